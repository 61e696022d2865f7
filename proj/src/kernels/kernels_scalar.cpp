#include "cakemech/kernels.hpp"

// Reference implementation of the kernel contract. The 4-lane accumulator
// pattern here *is* the specification; vector variants must match it bit for
// bit (see kernels.hpp). Keep -ffp-contract=off: a fused multiply-add would
// change the bits.

namespace cake::kernels {

namespace {

void add_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) acc[k] += x[k];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc[0] += a[k] * b[k];
    acc[1] += a[k + 1] * b[k + 1];
    acc[2] += a[k + 2] * b[k + 2];
    acc[3] += a[k + 3] * b[k + 3];
  }
  for (std::size_t lane = 0; k < n; ++k, ++lane) acc[lane] += a[k] * b[k];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double dot_over_scalar(const double* a, const double* b, const double* p,
                       std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc[0] += (a[k] * b[k]) / p[k];
    acc[1] += (a[k + 1] * b[k + 1]) / p[k + 1];
    acc[2] += (a[k + 2] * b[k + 2]) / p[k + 2];
    acc[3] += (a[k + 3] * b[k + 3]) / p[k + 3];
  }
  for (std::size_t lane = 0; k < n; ++k, ++lane) acc[lane] += (a[k] * b[k]) / p[k];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

void bid_update_scalar(double* out, const double* a, const double* b,
                       const double* p, double s, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = ((a[k] * b[k]) / p[k]) * s;
}

constexpr Ops kScalarOps{"scalar", add_scalar, dot_scalar, dot_over_scalar,
                         bid_update_scalar};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

}  // namespace cake::kernels
