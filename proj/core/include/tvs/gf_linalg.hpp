#pragma once

// Exact linear algebra over a prime field F_p.
//
// Vectors of F_p^n are stored as their base-p encoding (coordinate i is digit
// i), so for p = 2 a vector is a plain bit pattern and row reduction runs on
// machine words. Subspaces are kept in reduced row-echelon form with strictly
// increasing pivot columns; that form is canonical, so two Subspace values
// compare equal exactly when they span the same space.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tvs/error.hpp"

namespace tvs {

inline constexpr int kMaxPrime = 17;
inline constexpr int kMaxRows = 64;

/// Element of some F_p^n, identified by its base-p encoding.
struct Vec {
  std::uint64_t code = 0;
  friend constexpr auto operator<=>(Vec, Vec) = default;
};

/// The space F_p^n. Cheap to copy.
class FieldSpec {
 public:
  FieldSpec() : FieldSpec(2, 0) {}
  /// Throws InvalidArgument unless p is a prime <= 17 and p^n <= 2^62.
  FieldSpec(int p, int n);

  int p() const noexcept { return p_; }
  int n() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return pow_[n_]; }
  std::uint64_t power(int i) const noexcept { return pow_[i]; }
  bool contains(Vec v) const noexcept { return v.code < size(); }

  int digit(Vec v, int i) const noexcept {
    return p_ == 2 ? static_cast<int>((v.code >> i) & 1U)
                   : static_cast<int>((v.code / pow_[i]) % static_cast<std::uint64_t>(p_));
  }
  Vec add(Vec a, Vec b) const noexcept;
  Vec sub(Vec a, Vec b) const noexcept;
  Vec neg(Vec a) const noexcept;
  Vec scale(int c, Vec a) const noexcept;
  /// y + c*x
  Vec axpy(int c, Vec x, Vec y) const noexcept;
  /// Standard dot product sum_i a_i b_i mod p; the fixed inner product everywhere.
  int dot(Vec a, Vec b) const noexcept;
  Vec unit(int i) const noexcept { return Vec{pow_[i]}; }
  /// Index of the lowest nonzero coordinate, or -1 for the zero vector.
  int leading(Vec v) const noexcept;

  Vec from_digits(std::span<const int> digits) const;
  std::vector<int> digits(Vec v) const;

  int mod(long long a) const noexcept {
    const long long r = a % p_;
    return static_cast<int>(r < 0 ? r + p_ : r);
  }
  int inv(int a) const noexcept { return inv_[a]; }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept {
    return a.p_ == b.p_ && a.n_ == b.n_;
  }

 private:
  int p_;
  int n_;
  const std::uint64_t* pow_;
  const std::uint8_t* inv_;
};

bool is_prime(int p) noexcept;

class Subspace;

/// Incremental row reducer with fixed capacity and no heap allocation.
/// Rows are only ever appended, so `truncate` rolls back to an earlier state;
/// hot loops rely on that instead of copying.
class Echelon {
 public:
  explicit Echelon(const FieldSpec& field) : field_(field) {}

  /// Reduces v against the current rows and appends it when independent.
  bool insert(Vec v) noexcept;
  Vec reduce(Vec v) const noexcept;
  bool contains(Vec v) const noexcept { return reduce(v).code == 0; }
  int rank() const noexcept { return count_; }
  void truncate(int rank) noexcept { count_ = rank; }
  const FieldSpec& field() const noexcept { return field_; }

  Subspace canonical() const;

 private:
  FieldSpec field_;
  int count_ = 0;
  std::array<std::uint64_t, kMaxRows> rows_{};
  std::array<std::int8_t, kMaxRows> pivots_{};
};

/// Subspace of F_p^n in canonical RREF form; {0} has an empty basis.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(const FieldSpec& field) : field_(field) {}

  static Subspace zero(const FieldSpec& field) { return Subspace(field); }
  static Subspace full(const FieldSpec& field);
  /// Canonical span of arbitrary vectors (the `canonicalize` operation).
  static Subspace span(const FieldSpec& field, std::span<const Vec> vectors);
  /// Wraps rows already known to be in canonical RREF order. Unchecked.
  static Subspace from_rref(const FieldSpec& field, std::vector<Vec> rows);

  const FieldSpec& field() const noexcept { return field_; }
  int dim() const noexcept { return static_cast<int>(basis_.size()); }
  int codim() const noexcept { return field_.n() - dim(); }
  std::span<const Vec> basis() const noexcept { return basis_; }
  std::vector<int> pivots() const;
  std::uint64_t size() const noexcept { return field_.power(dim()); }
  bool is_zero() const noexcept { return basis_.empty(); }
  bool is_full() const noexcept { return dim() == field_.n(); }

  bool contains(Vec v) const;
  bool contains(const Subspace& other) const;

  /// The element whose coordinates (base-p digits of `index`) combine the basis.
  Vec element(std::uint64_t index) const noexcept;
  /// Every element, in coordinate-index order. Throws CapExceeded past `cap`.
  std::vector<Vec> elements(std::uint64_t cap = std::uint64_t{1} << 20) const;
  /// Coordinates of a member as an index into F_p^dim (digits at the pivots).
  std::uint64_t coordinate_index(Vec v) const noexcept;

  Echelon echelon() const;

  friend bool operator==(const Subspace& a, const Subspace& b) noexcept {
    return a.field_ == b.field_ && a.basis_ == b.basis_;
  }

 private:
  FieldSpec field_;
  std::vector<Vec> basis_;
};

Subspace sum(const Subspace& u, const Subspace& w);
/// Computed by duality: (U^perp + W^perp)^perp.
Subspace intersect(const Subspace& u, const Subspace& w);
/// Zassenhaus sum-intersection algorithm; independent of `intersect`.
Subspace intersect_direct(const Subspace& u, const Subspace& w);
/// Complement for the standard dot product.
Subspace orth_complement(const Subspace& u);
bool member(Vec v, const Subspace& u);
int sum_dim(const Subspace& u, const Subspace& w);

/// Uniformly random subspace of exactly `dim` dimensions.
Subspace random_subspace(const FieldSpec& field, int dim, std::uint64_t seed);

/// Number of subspaces of dimension k (Gaussian binomial), saturating at UINT64_MAX.
std::uint64_t count_subspaces(const FieldSpec& field, int k);
/// Visits each k-dimensional subspace once; the callback returns false to stop.
void for_each_subspace(const FieldSpec& field, int k,
                       const std::function<bool(const Subspace&)>& visit);
/// Every subspace of F_p^n, grouped by increasing dimension.
std::vector<Subspace> all_subspaces(const FieldSpec& field,
                                    std::uint64_t cap = std::uint64_t{1} << 20);

std::string to_string(const FieldSpec& field, Vec v);

}  // namespace tvs
