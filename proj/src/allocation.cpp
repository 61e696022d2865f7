#include "cakemech/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cakemech/errors.hpp"
#include "cakemech/rng.hpp"

namespace cake {

namespace {

// Drops numerically empty pieces so bundles stay canonical.
void push_piece(IntervalList& bundle, double lo, double hi) {
  if (hi - lo > kMergeTol) bundle.emplace_back(lo, hi);
}

}  // namespace

ShareMatrix::ShareMatrix(std::vector<Interval> cells, int agents)
    : cells_(std::move(cells)), agents_(agents) {
  if (agents_ <= 0 || cells_.empty()) {
    throw DomainError("share matrix needs at least one agent and one cell");
  }
  lengths_.assign(static_cast<std::size_t>(agents_) * cells_.size(), 0.0);
}

double ShareMatrix::column_sum(int cell) const {
  double sum = 0.0;
  for (int i = 0; i < agents_; ++i) sum += at(i, cell);
  return sum;
}

void ShareMatrix::validate(bool complete, double tol) const {
  for (int t = 0; t < cell_count(); ++t) {
    const double len = cells_[t].length();
    double sum = 0.0;
    for (int i = 0; i < agents_; ++i) {
      const double share = at(i, t);
      if (share < -tol || share > len + tol) {
        throw InvariantError("share " + std::to_string(share) + " of agent " +
                             std::to_string(i + 1) + " exceeds cell " +
                             std::to_string(t + 1));
      }
      sum += share;
    }
    if (sum > len + tol) {
      throw InvariantError("cell " + std::to_string(t + 1) + " is over-allocated");
    }
    if (complete && sum < len - tol) {
      throw InvariantError("cell " + std::to_string(t + 1) +
                           " is not fully allocated in a complete matrix");
    }
  }
}

Allocation realize(const ShareMatrix& shares, Placement policy, std::uint64_t seed) {
  shares.validate(false);
  Allocation alloc;
  alloc.bundles.assign(shares.agent_count(), {});

  for (int t = 0; t < shares.cell_count(); ++t) {
    const Interval& cell = shares.cells()[t];
    switch (policy) {
      case Placement::kLeftToRight: {
        double cursor = cell.lo;
        for (int i = 0; i < shares.agent_count(); ++i) {
          const double len = shares.at(i, t);
          if (len <= 0.0) continue;
          push_piece(alloc.bundles[i], cursor, std::min(cursor + len, cell.hi));
          cursor += len;
        }
        break;
      }
      case Placement::kRightmostPack: {
        double cursor = cell.hi;
        for (int i = 0; i < shares.agent_count(); ++i) {
          const double len = shares.at(i, t);
          if (len <= 0.0) continue;
          push_piece(alloc.bundles[i], std::max(cursor - len, cell.lo), cursor);
          cursor -= len;
        }
        break;
      }
      case Placement::kCyclicRandom: {
        // Rotated left-to-right packing: one uniform start per cell keeps
        // bundles disjoint while every piece is a cyclic slice of the cell.
        Rng rng(seed, static_cast<std::uint64_t>(t) + 1);
        double cursor = cell.lo + rng.next_double() * cell.length();
        for (int i = 0; i < shares.agent_count(); ++i) {
          const double len = shares.at(i, t);
          if (len <= 0.0) continue;
          for (const Interval& piece : cyclic_fraction(cell, len / cell.length(), cursor)) {
            push_piece(alloc.bundles[i], piece.lo, piece.hi);
          }
          cursor += len;
          if (cursor >= cell.hi) cursor -= cell.length();
        }
        break;
      }
    }
  }
  for (IntervalList& bundle : alloc.bundles) bundle = canonical_union(bundle);

  bool full = true;
  for (int t = 0; t < shares.cell_count(); ++t) {
    if (shares.column_sum(t) < shares.cells()[t].length() - kCompareTol) full = false;
  }
  alloc.complete = full;
  return alloc;
}

ShareMatrix to_share_matrix(const Profile& profile, const Allocation& alloc) {
  if (static_cast<int>(alloc.bundles.size()) != profile.agent_count()) {
    throw DomainError("allocation has the wrong number of agents");
  }
  std::vector<IntervalList> canonical;
  canonical.reserve(alloc.bundles.size());
  for (const IntervalList& bundle : alloc.bundles) {
    for (const Interval& piece : bundle) {
      if (!profile.cake().contains(piece)) {
        throw DomainError("bundle interval lies outside the cake");
      }
    }
    canonical.push_back(canonical_union(bundle));
  }
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    for (std::size_t j = i + 1; j < canonical.size(); ++j) {
      if (intersection_length(canonical[i], canonical[j]) > kCompareTol) {
        throw InvariantError("bundles of agents " + std::to_string(i + 1) + " and " +
                             std::to_string(j + 1) + " overlap");
      }
    }
  }

  ShareMatrix shares(profile.cells(), profile.agent_count());
  for (int i = 0; i < profile.agent_count(); ++i) {
    for (int t = 0; t < profile.cell_count(); ++t) {
      shares.at(i, t) = intersection_length(canonical[i], {profile.cell(t)});
    }
  }
  return shares;
}

std::vector<double> utilities(const Profile& profile, const Allocation& alloc) {
  std::vector<double> out(profile.agent_count(), 0.0);
  for (int i = 0; i < profile.agent_count(); ++i) {
    out[i] = value_of(profile.density(i), alloc.bundles[i]);
  }
  return out;
}

double nash_welfare(const Profile& profile, const Allocation& alloc) {
  const std::vector<double> u = utilities(profile, alloc);
  double log_sum = 0.0;
  for (double value : u) {
    if (value <= 0.0) return 0.0;
    log_sum += std::log(value);
  }
  return std::exp(log_sum / static_cast<double>(u.size()));
}

IntervalList rightmost_fraction(const Interval& piece, double fraction) {
  const double keep = fraction * piece.length();
  if (keep <= kMergeTol) return {};
  return {Interval(std::max(piece.hi - keep, piece.lo), piece.hi)};
}

IntervalList cyclic_fraction(const Interval& piece, double fraction, double start) {
  const double keep = fraction * piece.length();
  if (keep <= kMergeTol) return {};
  IntervalList out;
  if (start + keep <= piece.hi + kMergeTol) {
    push_piece(out, start, std::min(start + keep, piece.hi));
  } else {
    push_piece(out, start, piece.hi);
    push_piece(out, piece.lo, piece.lo + (keep - (piece.hi - start)));
  }
  return out;
}

}  // namespace cake
