#pragma once

// Variety extraction. regularize() finds subspaces U, V on which the column
// slices of A have a uniform codimension d; the slices then form a linear system
// of subspaces, bilinear_system_structure() recovers a bilinear parametrisation
// of most of it, and extract_variety() turns that parametrisation into forms
// whose zero set inside U x V' is contained in A. Every stage checks its own
// output by exact counting, and the final containment is certified separately.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvs/gf_linalg.hpp"
#include "tvs/gridset.hpp"
#include "tvs/lemma_engines.hpp"
#include "tvs/lss.hpp"
#include "tvs/matrix.hpp"
#include "tvs/variety.hpp"

namespace tvs {

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::string diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

class ExtractionError : public Error {
 public:
  enum class Kind { AnchorTooWeak, ConsensusFailed, ExtensionFailed, ProfileRejected };
  ExtractionError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(ExtractionError::Kind kind) noexcept;

class CertificationFailed : public Error {
 public:
  CertificationFailed(const std::string& what, Vec x, Vec y) : Error(what), x_(x), y_(y) {}
  Vec x() const noexcept { return x_; }
  Vec y() const noexcept { return y_; }

 private:
  Vec x_;
  Vec y_;
};

enum class SearchMode { Sampled, Exhaustive };

// ---------------------------------------------------------------------------
// Regularity

struct RegularizeConfig {
  double eps = 0.05;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::Sampled;
  int retry_budget = 64;
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 20;
  int max_d = -1;  // when >= 0, keep descending until d <= max_d
};

struct RegularityCounts {
  std::uint64_t exceptions_i = 0;   // x ∈ U with |A_x ∩ V| != p^{-d}|V|
  std::uint64_t points = 0;         // |U|
  std::uint64_t exceptions_ii = 0;  // pairs with |A_x1 ∩ A_x2 ∩ V| != p^{-2d}|V|
  std::uint64_t pairs = 0;          // |U|^2
  double fraction_i() const noexcept { return points ? double(exceptions_i) / double(points) : 0.0; }
  double fraction_ii() const noexcept { return pairs ? double(exceptions_ii) / double(pairs) : 0.0; }
};

struct RegularityOutput {
  Subspace U;
  Subspace V;
  int d = 0;
  double eps_target = 0;
  RegularityCounts certified;
  std::uint64_t cells = 0;  // |A|
  std::uint64_t total = 0;  // |G||H|
  int d0_formula = 0;       // least k with p^k >= 10^4 delta^-4
  int d0 = 0;               // largest codim of A_x ∩ V0 over x ∈ U0
  Vec y0;
  Vec x0;
  int iterations = 0;
  std::vector<std::string> trace;
};

/// Least k >= 0 with p^k * cells^4 >= 10^4 * total^4.
int d0_bound(int p, std::uint64_t cells, std::uint64_t total);
/// Least r >= 0 with p^r >= (4 / eps)^2.
int drc_rounds(int p, double eps);

/// Exact counts of properties (i) and (ii) for (U, V, d).
RegularityCounts regularity_counts(const TransverseSet& a, const Subspace& U, const Subspace& V, int d);

/// Throws BudgetExceeded when no admissible dependent-random-choice step is found.
RegularityOutput regularize(const TransverseSet& a, const RegularizeConfig& config = {});

// ---------------------------------------------------------------------------
// Bilinear structure

struct AnchorScore {
  Vec a;
  double score = 0;
  std::uint64_t good_triples = 0;
  std::uint64_t triples = 0;
  std::uint64_t pairs = 0;  // |P_a|
  std::uint64_t scanned = 0;
};

inline constexpr std::uint64_t kDefaultAnchorBudget = 4096;

/// Best anchor among the scanned candidates. All of G is scanned in code order
/// when |G| <= 2^12 (capped by `budget`), otherwise `budget` seeded samples.
AnchorScore choose_anchor(const LinearSubspaceSystem& s, int d, std::uint64_t budget = kDefaultAnchorBudget,
                          std::uint64_t seed = 0);

/// Pairs (x, y) with dim V_x = dim V_y = dim V_{x+y-a} = d and dim(V_a + V_x + V_y) = 3d.
std::vector<std::pair<Vec, Vec>> anchor_pairs(const LinearSubspaceSystem& s, int d, Vec a);

struct StructureConfig {
  std::uint64_t seed = 0;
  std::uint64_t anchor_budget = kDefaultAnchorBudget;
  double max_eps1 = 0.5;
  double max_eps2 = 0.5;
  double extension_cap = 1.0;
};

/// x -> Phi(x, .) + Psi as a k x d matrix, with Phi(x, .) = sum_a x_a phi[a].
struct BilinearStructure {
  int d = 0;
  int k = 0;                 // dimension of the value space
  std::vector<Matrix> phi;   // one k x d matrix per coordinate of the domain
  Matrix psi;                // k x d
  std::vector<char> good;    // by domain code
  std::uint64_t good_count = 0;
  double good_fraction = 0;
  QuasirandomnessProfile profile;
  std::optional<AnchorScore> anchor;
  std::uint64_t quad_pairs = 0;
  std::uint64_t quad_skipped = 0;
  std::uint64_t voted_points = 0;
  std::optional<NearHomReport> extension;

  Matrix at(const FieldSpec& domain, Vec x) const;
};

/// Throws ExtractionError; the returned good set is always computed exactly.
BilinearStructure bilinear_system_structure(const LinearSubspaceSystem& s, int d,
                                            const StructureConfig& config = {});

// ---------------------------------------------------------------------------
// Extraction

struct ExtractConfig {
  double eps = 0.05;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::Sampled;
  int retry_budget = 64;
  std::uint64_t anchor_budget = kDefaultAnchorBudget;
  StructureConfig structure;  // seed and anchor budget are overwritten from above
  CertifyMode certify = CertifyMode::Auto;
  std::uint64_t cap = kDefaultGridCap;
};

struct ExtractionAttempt {
  int d = 0;
  std::string outcome;  // "accepted" or the reason for descending
};

struct ExtractionReport {
  BilinearVariety variety;
  RegularityOutput regularity;
  std::optional<BilinearStructure> structure;
  ContainmentCertificate certificate;
  std::vector<ExtractionAttempt> attempts;
  bool argument_checked = false;
  bool restricted_to_good = false;
  double density = 0;
  double log_inv_density = 0;  // log_p(1 / delta)
  std::map<std::string, double> timing;
};

/// Throws CertificationFailed if the certified containment check finds a cell outside A.
ExtractionReport extract_variety(const TransverseSet& a, const ExtractConfig& config = {});

}  // namespace tvs
