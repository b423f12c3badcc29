#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvs/gf_linalg.hpp"
#include "tvs/gridset.hpp"
#include "tvs/matrix.hpp"

namespace tvs {

/// {(x, y) ∈ U x V : x^T B_i y = 0 for every i}.
class BilinearVariety {
 public:
  BilinearVariety() = default;
  /// Forms are nG x nH matrices; they are replaced by the reduced row-echelon
  /// basis of their span in the form space, so r is the rank of the input.
  BilinearVariety(Subspace U, Subspace V, std::vector<Matrix> forms);

  const Subspace& U() const noexcept { return U_; }
  const Subspace& V() const noexcept { return V_; }
  std::span<const Matrix> forms() const noexcept { return forms_; }
  int r() const noexcept { return static_cast<int>(forms_.size()); }
  Ambient2 ambient() const { return {U_.field().p(), U_.field().n(), V_.field().n()}; }

  bool member(Vec x, Vec y) const;
  /// Zero set of the forms inside V at a fixed x ∈ U.
  Subspace fiber(Vec x) const;
  int codimension() const noexcept { return U_.codim() + V_.codim() + r(); }
  /// p^{-r} |U|/|G| |V|/|H|
  double density_bound() const noexcept;

  friend bool operator==(const BilinearVariety&, const BilinearVariety&) = default;

 private:
  Subspace U_;
  Subspace V_;
  std::vector<Matrix> forms_;
  std::vector<Matrix> transposed_;
};

/// Reduced row-echelon basis of the span of `forms`, each flattened row-major.
std::vector<Matrix> reduce_forms(int p, int nG, int nH, const std::vector<Matrix>& forms);

GridSet enumerate(const BilinearVariety& w, std::uint64_t cap = kDefaultGridCap);

enum class CertifyMode { Auto, Exhaustive, Sampled };

struct ContainmentCertificate {
  bool pass = true;
  std::string mode;  // "exhaustive", "columnwise" or "sampled"
  std::uint64_t checked = 0;
  std::optional<std::pair<Vec, Vec>> violation;
};

inline constexpr std::uint64_t kMinSampledCells = 100000;

/// Auto is exhaustive when |U||V| fits `cap` and sampled otherwise.
/// Exhaustive walks every member cell when |U||V| fits `cap`, and otherwise
/// compares fiber(x) with A_{x.} for every x ∈ U. Sampled mode draws member
/// cells uniformly by rejection until `samples` of them have been checked.
ContainmentCertificate contained_in(const BilinearVariety& w, const TransverseSet& a,
                                    CertifyMode mode = CertifyMode::Auto, std::uint64_t seed = 0,
                                    std::uint64_t samples = kMinSampledCells,
                                    std::uint64_t cap = kDefaultGridCap);

struct ExactVarietyResult {
  bool exact = false;
  std::vector<Matrix> witness;  // forms whose zero set is A when exact
  int annihilator_dim = 0;      // dimension of the forms vanishing on A
  bool minimal = true;          // false if the search cap stopped the minimal search
};

/// Whether A is the zero set of a space of forms on G x H. Needs p ∈ {2, 3}
/// and nG * nH <= 9.
ExactVarietyResult is_exact_variety(const TransverseSet& a, std::uint64_t search_cap = std::uint64_t{1} << 22);

}  // namespace tvs
