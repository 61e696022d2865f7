#pragma once

#include <cstddef>

namespace cake::kernels {

// Data-parallel primitives for the proportional-response inner loop.
//
// Every implementation must be bit-identical to the scalar reference so that
// solver output does not depend on the host CPU. Reductions therefore follow
// a fixed tree: four accumulators acc[j] fed by index j = k mod 4 (the tail
// elements continue the same lane pattern), combined at the end as
// (acc[0] + acc[2]) + (acc[1] + acc[3]) — the order an AVX2 horizontal sum
// produces. Elementwise ops evaluate ((a*b)/p)*s with no FMA contraction.
struct Ops {
  const char* name;

  // acc[k] += x[k]
  void (*add)(double* acc, const double* x, std::size_t n);

  // blocked-tree sum of a[k]*b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // blocked-tree sum of (a[k]*b[k])/p[k]
  double (*dot_over)(const double* a, const double* b, const double* p,
                     std::size_t n);

  // out[k] = ((a[k]*b[k])/p[k])*s   (out may alias b)
  void (*bid_update)(double* out, const double* a, const double* b,
                     const double* p, double s, std::size_t n);
};

const Ops& scalar_ops();

/// AVX2 variant, or nullptr when the build or the CPU lacks it.
const Ops* avx2_ops();

/// Runtime-selected implementation. Environment variable CAKEMECH_KERNELS
/// (scalar|avx2|auto) overrides the automatic pick; the choice is made once.
const Ops& active_ops();

}  // namespace cake::kernels
