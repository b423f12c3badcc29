#pragma once

// Subsets of G x H. GridSet is a plain bitset over all cells and supports the
// horizontal/vertical difference operators; TransverseSet stores one column
// subspace of H per element of G, which is all the extraction algorithms need.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tvs/gf_linalg.hpp"
#include "tvs/matrix.hpp"

namespace tvs {

inline constexpr std::uint64_t kDefaultGridCap = std::uint64_t{1} << 24;

/// G = F_p^nG and H = F_p^nH.
struct Ambient2 {
  int p = 2;
  int nG = 0;
  int nH = 0;

  FieldSpec G() const { return FieldSpec(p, nG); }
  FieldSpec H() const { return FieldSpec(p, nH); }
  /// |G| * |H|; throws CapExceeded above `cap`.
  std::uint64_t cells(std::uint64_t cap = kDefaultGridCap) const;
  friend bool operator==(const Ambient2&, const Ambient2&) = default;
};

class GridSet {
 public:
  GridSet() = default;
  explicit GridSet(const Ambient2& ambient, std::uint64_t cap = kDefaultGridCap);
  static GridSet full(const Ambient2& ambient);

  const Ambient2& ambient() const noexcept { return ambient_; }
  std::uint64_t size() const noexcept { return size_; }
  /// Cell index = encode(x) * |H| + encode(y).
  std::uint64_t index(Vec x, Vec y) const noexcept { return x.code * h_size_ + y.code; }

  bool test(Vec x, Vec y) const noexcept { return test_index(index(x, y)); }
  bool test_index(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(Vec x, Vec y, bool on = true) noexcept { set_index(index(x, y), on); }
  void set_index(std::uint64_t i, bool on = true) noexcept;
  void flip_index(std::uint64_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::uint64_t count() const noexcept;
  double density() const noexcept;

  /// X_{.y} = {x : (x, y) in X}
  std::vector<Vec> row_slice(Vec y) const;
  /// X_{x.} = {y : (x, y) in X}
  std::vector<Vec> col_slice(Vec x) const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  friend bool operator==(const GridSet& a, const GridSet& b) noexcept {
    return a.ambient_ == b.ambient_ && a.words_ == b.words_;
  }

 private:
  Ambient2 ambient_;
  std::uint64_t size_ = 0;
  std::uint64_t h_size_ = 1;
  std::vector<std::uint64_t> words_;
};

/// {(x1 - x2, y) : (x1, y), (x2, y) in A}
GridSet dhor(const GridSet& a);
/// {(x, y1 - y2) : (x, y1), (x, y2) in A}
GridSet dver(const GridSet& a);

/// Reason a grid set fails to be transverse.
struct SliceWitness {
  enum class Kind { Row, Column } kind = Kind::Row;
  Vec index;           // y for a row, x for a column
  std::string reason;  // "empty", "missing 0", "not closed under addition"
};

std::optional<SliceWitness> transversality_witness(const GridSet& a);
bool is_transverse(const GridSet& a);

class NotTransverse : public Error {
 public:
  NotTransverse(const std::string& what, SliceWitness witness)
      : Error(what), witness_(std::move(witness)) {}
  const SliceWitness& witness() const noexcept { return witness_; }

 private:
  SliceWitness witness_;
};

/// Transverse subset of G x H, one column subspace per x in G.
class TransverseSet {
 public:
  TransverseSet() = default;
  /// Validates: column 0 must be H and every row must be a subspace.
  static TransverseSet from_columns(const Ambient2& ambient, std::vector<Subspace> columns);
  /// Skips the row check; for callers that established transversality already.
  static TransverseSet from_columns_unchecked(const Ambient2& ambient, std::vector<Subspace> columns);
  static TransverseSet full(const Ambient2& ambient);

  const Ambient2& ambient() const noexcept { return ambient_; }
  FieldSpec G() const { return ambient_.G(); }
  FieldSpec H() const { return ambient_.H(); }

  const Subspace& column(Vec x) const { return columns_.at(x.code); }
  std::span<const Subspace> columns() const noexcept { return columns_; }
  /// A_{.y} as a subspace of G.
  Subspace row(Vec y) const;
  bool contains(Vec x, Vec y) const { return column(x).contains(y); }

  std::uint64_t count() const noexcept;
  double density() const noexcept;

  friend bool operator==(const TransverseSet& a, const TransverseSet& b) noexcept {
    return a.ambient_ == b.ambient_ && a.columns_ == b.columns_;
  }

 private:
  Ambient2 ambient_;
  std::vector<Subspace> columns_;
};

/// Throws NotTransverse carrying the failing slice.
TransverseSet to_transverse(const GridSet& a);
GridSet to_gridset(const TransverseSet& t, std::uint64_t cap = kDefaultGridCap);

class LinearSubspaceSystem;
/// A = union over x of {x} x V_x^perp. The system must be indexed by all of G
/// with values in all of H.
TransverseSet from_lss(const LinearSubspaceSystem& system);

/// Parameters of a variety-generated transverse set.
struct BilinearMapSpec {
  Ambient2 ambient;
  int r = 1;
  int dimU = -1;  // -1 means U = G
  int dimV = -1;  // -1 means V = H
};

struct GeneratedVariety {
  TransverseSet set;
  Subspace U;
  Subspace V;
  std::vector<Matrix> forms;  // nG x nH, form i is x^T B_i y
};

/// Zero set of r random forms on U x V, completed to G x H with column H at
/// x = 0 and column {0} for x outside U.
GeneratedVariety gen_from_bilinear(const BilinearMapSpec& spec, std::uint64_t seed);

/// Streams every transverse set on the ambient exactly once (requires |G|, |H| <= 16).
/// Sets with fewer than `min_cells` cells are pruned. Returns the number visited;
/// the callback returns false to stop.
std::uint64_t enumerate_transverse_small(const Ambient2& ambient,
                                         const std::function<bool(const TransverseSet&)>& visit,
                                         std::uint64_t min_cells = 0);

}  // namespace tvs
