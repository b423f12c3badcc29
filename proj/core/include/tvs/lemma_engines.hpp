#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvs/gf_linalg.hpp"
#include "tvs/matrix.hpp"

namespace tvs {

/// Input sums do not have the dimensions the construction relies on.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// A predicate was called outside its stated preconditions.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class EpsilonTooLarge : public Error {
 public:
  EpsilonTooLarge(const std::string& what, double measured) : Error(what), measured_(measured) {}
  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

class NoConsensus : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Quadruples of subspaces

struct QuadInput {
  Subspace U1, U2, U3, U4;
  Matrix phi4;  // n x d, injective with image U4
};

struct QuadMaps {
  Matrix phi1, phi2, phi3;
};

/// phi1 + phi2 = phi3 + phi4 with each phi_i an isomorphism onto U_i. Every
/// vector of U4 splits uniquely as u1 + u2 + u3 over U1 ⊕ U2 ⊕ U3; phi1 and phi2
/// take the first two parts and phi3 the negated third.
/// Throws HypothesisViolated naming the failing condition.
QuadMaps quad_isomorphisms(const QuadInput& q);

/// Re-evaluates phi1 + phi2 - phi3 - phi4 and the images of every map.
bool verify_quad(const QuadInput& q, const QuadMaps& m);

/// Returns whether theta = 0. Throws PreconditionViolated if a map leaves its
/// subspace, if W meets U1 + U2 + V1 + V2, or if the five maps do not sum to 0.
bool check_independence_forces_zero(const Subspace& U1, const Subspace& U2, const Subspace& V1,
                                    const Subspace& V2, const Subspace& W, const Matrix& phi1,
                                    const Matrix& phi2, const Matrix& psi1, const Matrix& psi2,
                                    const Matrix& theta);

// ---------------------------------------------------------------------------
// Near-homomorphisms

/// Map defined on a subset of G1 = F_p^n1 with values in G2 = F_p^n2.
struct PartialMap {
  FieldSpec G1;
  FieldSpec G2;
  std::vector<char> defined;  // indexed by code of G1
  std::vector<Vec> values;    // meaningful where defined

  PartialMap() = default;
  PartialMap(const FieldSpec& g1, const FieldSpec& g2)
      : G1(g1), G2(g2), defined(g1.size(), 0), values(g1.size()) {}
  void set(Vec x, Vec y) {
    defined.at(x.code) = 1;
    values.at(x.code) = y;
  }
  std::uint64_t domain_size() const noexcept;
};

/// x -> linear * x + constant.
struct AffineMap {
  Matrix linear;  // n2 x n1
  Vec constant;
  Vec apply(const FieldSpec& G1, const FieldSpec& G2, Vec x) const {
    return G2.add(linear.apply(G1, G2, x), constant);
  }
};

struct NearHomReport {
  AffineMap map;
  double measured_eps = 0;
  bool eps_sampled = false;
  std::uint64_t good_triples = 0;
  std::uint64_t triples = 0;          // |G1|^3, or the sample count when sampled
  std::uint64_t agreement = 0;        // x in the domain with map(x) = f(x)
  double agreement_fraction = 0;      // agreement / |G1|
  std::uint64_t consensus_fit = 0;    // x where map(x) equals the pointwise vote
  double bound = 0;                   // (1 - 5 eps^{1/4}) |G1|
};

inline constexpr double kDefaultEpsilonCap = 1e-5;

/// Pointwise majority vote followed by a consensus affine fit; see NearHomReport.
/// Exact triple counting up to 2^27 triples, seeded sampling beyond.
NearHomReport extend_near_homomorphism(const PartialMap& f, double epsilon_cap = kDefaultEpsilonCap,
                                       std::uint64_t seed = 0);

}  // namespace tvs
