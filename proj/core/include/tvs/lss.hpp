#pragma once

// Linear systems of subspaces x -> V_x. The system is indexed by a subspace U of
// G and takes values in a subspace V of H; both are handled in coordinates
// (F_p^dim U and F_p^dim V) with respect to their canonical bases, and all
// complements are taken inside those coordinate spaces.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvs/gf_linalg.hpp"
#include "tvs/gridset.hpp"

namespace tvs {

class LinearSubspaceSystem {
 public:
  LinearSubspaceSystem() = default;
  /// `table[i]` is V_x for x = U.element(i), as a subspace of F_p^dim V.
  LinearSubspaceSystem(Subspace U, Subspace V, std::vector<Subspace> table);
  /// Indexed by all of G with values in all of H.
  static LinearSubspaceSystem over(const FieldSpec& G, const FieldSpec& H, std::vector<Subspace> table);

  const Subspace& U() const noexcept { return U_; }
  const Subspace& V() const noexcept { return V_; }
  /// Coordinate space of U; the index set of the table.
  const FieldSpec& domain() const noexcept { return domain_; }
  /// Coordinate space of V; every V_x lives here.
  const FieldSpec& values() const noexcept { return values_; }

  const Subspace& at(Vec x) const { return table_.at(x.code); }
  std::span<const Subspace> table() const noexcept { return table_; }

  Vec lift_index(Vec x) const noexcept { return U_.element(x.code); }
  Vec lift_value(Vec v) const noexcept { return V_.element(v.code); }

  friend bool operator==(const LinearSubspaceSystem& a, const LinearSubspaceSystem& b) noexcept {
    return a.U_ == b.U_ && a.V_ == b.V_ && a.table_ == b.table_;
  }

 private:
  Subspace U_;
  Subspace V_;
  FieldSpec domain_;
  FieldSpec values_;
  std::vector<Subspace> table_;
};

/// V_x = (A_{x.} ∩ V)^perp inside V, for x ranging over U.
LinearSubspaceSystem from_transverse(const TransverseSet& t, const Subspace& U, const Subspace& V);
LinearSubspaceSystem from_transverse(const TransverseSet& t, const Subspace& V);
LinearSubspaceSystem from_transverse(const TransverseSet& t);

struct LssValidation {
  bool ok = true;
  std::string reason;
  Vec x1;
  Vec x2;
  explicit operator bool() const noexcept { return ok; }
};

/// V_0 = {0} and V_{x1+x2} ⊆ V_{x1} + V_{x2} for every pair.
LssValidation validate(const LinearSubspaceSystem& s);
/// V_{lambda x} = V_x for every nonzero scalar.
bool check_scaling(const LinearSubspaceSystem& s);
/// For every r-tuple summing to 0: V_{x1}+...+V_{xr} = V_{x1}+...+V_{x(r-1)}. Needs r <= 4.
bool check_zero_sum(const LinearSubspaceSystem& s, int r);

struct QuasirandomnessProfile {
  int d = 0;
  double eps1 = 0;
  double eps2 = 0;
  std::uint64_t bad_points = 0;  // x with dim V_x != d
  std::uint64_t bad_pairs = 0;   // (x1, x2) with V_x1 ∩ V_x2 != {0}, diagonal included
  std::uint64_t points = 0;
  std::uint64_t pairs = 0;
};

QuasirandomnessProfile quasirandomness_profile(const LinearSubspaceSystem& s, int d);

/// Sum of `components` random systems, each either x -> span{M x} for a random
/// matrix M, or x -> W for x outside a random hyperplane K (and {0} on K).
LinearSubspaceSystem random_lss(const FieldSpec& G, const FieldSpec& H, int components, std::uint64_t seed);

/// Fraction of (r+1)-tuples with V_x0 ∩ (V_x1 + ... + V_xr) != {0}. Needs r <= 4.
double sum_intersection_fraction(const LinearSubspaceSystem& s, int r);

}  // namespace tvs
