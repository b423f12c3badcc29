#include "tvs/lemma_engines.hpp"

#include <algorithm>
#include <cmath>

#include "tvs/rng.hpp"

namespace tvs {

namespace {

Subspace image(const FieldSpec& field, const Matrix& m) {
  return Subspace::span(field, m.columns(field));
}

void require_subspace_of(const FieldSpec& field, const Subspace& s, int d, const char* name) {
  if (!(s.field() == field)) throw HypothesisViolated(std::string(name) + " lies in a different ambient");
  if (s.dim() != d) throw HypothesisViolated(std::string(name) + " does not have dimension d");
}

}  // namespace

QuadMaps quad_isomorphisms(const QuadInput& q) {
  const FieldSpec field = q.U1.field();
  const int d = q.U1.dim();
  const int n = field.n();
  require_subspace_of(field, q.U2, d, "U2");
  require_subspace_of(field, q.U3, d, "U3");
  require_subspace_of(field, q.U4, d, "U4");
  if (q.phi4.rows() != n || q.phi4.cols() != d || q.phi4.p() != field.p())
    throw HypothesisViolated("phi4 has the wrong shape");
  const Subspace im4 = image(field, q.phi4);
  if (im4.dim() != d || !(im4 == q.U4)) throw HypothesisViolated("phi4 is not an isomorphism onto U4");

  const Subspace* u[4] = {&q.U1, &q.U2, &q.U3, &q.U4};
  static constexpr int kTriples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : kTriples) {
    if (sum(sum(*u[t[0]], *u[t[1]]), *u[t[2]]).dim() != 3 * d)
      throw HypothesisViolated("|U" + std::to_string(t[0] + 1) + " + U" + std::to_string(t[1] + 1) +
                               " + U" + std::to_string(t[2] + 1) + "| != p^{3d}");
  }
  if (sum(sum(q.U1, q.U2), sum(q.U3, q.U4)).dim() != 3 * d)
    throw HypothesisViolated("|U1 + U2 + U3 + U4| != p^{3d}");

  std::vector<Vec> cols;
  for (const Subspace* s : {u[0], u[1], u[2]})
    for (Vec b : s->basis()) cols.push_back(b);
  const Matrix B = Matrix::from_columns(field, cols);

  QuadMaps out{Matrix(field.p(), n, d), Matrix(field.p(), n, d), Matrix(field.p(), n, d)};
  for (int j = 0; j < d; ++j) {
    const auto target = field.digits(q.phi4.column(field, j));
    const auto c = B.solve(target);
    if (!c) throw HypothesisViolated("U4 is not contained in U1 + U2 + U3");
    Vec parts[3] = {};
    for (int k = 0; k < 3 * d; ++k)
      parts[k / d] = field.axpy((*c)[static_cast<std::size_t>(k)], cols[static_cast<std::size_t>(k)], parts[k / d]);
    parts[2] = field.neg(parts[2]);
    Matrix* dest[3] = {&out.phi1, &out.phi2, &out.phi3};
    for (int r = 0; r < 3; ++r)
      for (int i = 0; i < n; ++i) dest[r]->set(i, j, field.digit(parts[r], i));
  }
  if (!verify_quad(q, out)) throw HypothesisViolated("decomposition failed its self-check");
  return out;
}

bool verify_quad(const QuadInput& q, const QuadMaps& m) {
  const FieldSpec field = q.U1.field();
  if (!(m.phi1 + m.phi2 - m.phi3 - q.phi4).is_zero()) return false;
  const std::pair<const Matrix*, const Subspace*> pairs[4] = {
      {&m.phi1, &q.U1}, {&m.phi2, &q.U2}, {&m.phi3, &q.U3}, {&q.phi4, &q.U4}};
  for (const auto& [map, target] : pairs) {
    if (map->rank() != map->cols()) return false;
    if (!(image(field, *map) == *target)) return false;
  }
  return true;
}

bool check_independence_forces_zero(const Subspace& U1, const Subspace& U2, const Subspace& V1,
                                    const Subspace& V2, const Subspace& W, const Matrix& phi1,
                                    const Matrix& phi2, const Matrix& psi1, const Matrix& psi2,
                                    const Matrix& theta) {
  const FieldSpec field = W.field();
  const std::pair<const Matrix*, const Subspace*> pairs[5] = {
      {&phi1, &U1}, {&phi2, &U2}, {&psi1, &V1}, {&psi2, &V2}, {&theta, &W}};
  for (const auto& [map, target] : pairs) {
    if (!(target->field() == field) || map->rows() != field.n())
      throw PreconditionViolated("ambient mismatch");
    if (!target->contains(image(field, *map))) throw PreconditionViolated("a map leaves its subspace");
  }
  const Subspace rest = sum(sum(U1, U2), sum(V1, V2));
  if (!intersect(W, rest).is_zero()) throw PreconditionViolated("W meets U1 + U2 + V1 + V2");
  if (!(phi1 + phi2 + psi1 + psi2 + theta).is_zero())
    throw PreconditionViolated("the maps do not sum to zero");
  return theta.is_zero();
}

std::uint64_t PartialMap::domain_size() const noexcept {
  return static_cast<std::uint64_t>(std::count(defined.begin(), defined.end(), 1));
}

namespace {

// Most frequent value, ties to the smallest code; `tied` reports an ambiguous top.
Vec majority(std::vector<std::uint64_t>& votes, bool& tied) {
  std::sort(votes.begin(), votes.end());
  std::uint64_t best = 0;
  std::size_t best_count = 0;
  tied = false;
  for (std::size_t i = 0; i < votes.size();) {
    std::size_t j = i;
    while (j < votes.size() && votes[j] == votes[i]) ++j;
    if (j - i > best_count) {
      best = votes[i];
      best_count = j - i;
      tied = false;
    } else if (j - i == best_count) {
      tied = true;
    }
    i = j;
  }
  return Vec{best};
}

constexpr std::uint64_t kExactTripleCap = std::uint64_t{1} << 27;
constexpr std::uint64_t kSampledTriples = std::uint64_t{1} << 22;

}  // namespace

NearHomReport extend_near_homomorphism(const PartialMap& f, double epsilon_cap, std::uint64_t seed) {
  const FieldSpec& G1 = f.G1;
  const FieldSpec& G2 = f.G2;
  const std::uint64_t n = G1.size();
  if (f.defined.size() != n || f.values.size() != n) throw DimensionMismatch("partial map table size");

  std::vector<Vec> dom;
  for (std::uint64_t x = 0; x < n; ++x)
    if (f.defined[x]) dom.push_back(Vec{x});
  if (dom.empty()) throw NoConsensus("partial map has an empty domain");

  NearHomReport rep;
  auto good = [&](Vec x, Vec y, Vec z) {
    const Vec w = G1.sub(G1.add(x, y), z);
    if (!f.defined[w.code]) return false;
    return G2.add(f.values[x.code], f.values[y.code]) == G2.add(f.values[z.code], f.values[w.code]);
  };
  const std::uint64_t m = dom.size();
  const long double all = static_cast<long double>(n) * n * n;
  if (all <= static_cast<long double>(kExactTripleCap)) {
    for (Vec x : dom)
      for (Vec y : dom)
        for (Vec z : dom)
          if (good(x, y, z)) ++rep.good_triples;
    rep.triples = n * n * n;
  } else {
    // Sample uniformly from G1^3; triples outside the domain count as failures.
    Rng rng = Rng::derive(seed, kTagCertify, 0x6e68);
    for (std::uint64_t s = 0; s < kSampledTriples; ++s) {
      const Vec x{rng.below(n)}, y{rng.below(n)}, z{rng.below(n)};
      if (f.defined[x.code] && f.defined[y.code] && f.defined[z.code] && good(x, y, z)) ++rep.good_triples;
    }
    rep.triples = kSampledTriples;
    rep.eps_sampled = true;
  }
  rep.measured_eps = 1.0 - static_cast<double>(rep.good_triples) / static_cast<double>(rep.triples);
  if (rep.measured_eps > epsilon_cap)
    throw EpsilonTooLarge("measured epsilon " + std::to_string(rep.measured_eps) + " exceeds cap",
                          rep.measured_eps);

  // Pointwise vote over f(a) + f(b) - f(a + b - x).
  std::vector<char> has_vote(n, 0);
  std::vector<Vec> raw(n);
  bool any_clear = false;
  std::vector<std::uint64_t> votes;
  votes.reserve(m * m);
  for (std::uint64_t xc = 0; xc < n; ++xc) {
    const Vec x{xc};
    votes.clear();
    for (Vec a : dom)
      for (Vec b : dom) {
        const Vec c = G1.sub(G1.add(a, b), x);
        if (!f.defined[c.code]) continue;
        votes.push_back(G2.sub(G2.add(f.values[a.code], f.values[b.code]), f.values[c.code]).code);
      }
    if (votes.empty()) continue;
    bool tied = false;
    raw[xc] = majority(votes, tied);
    has_vote[xc] = 1;
    any_clear = any_clear || !tied;
  }
  if (!any_clear) throw NoConsensus("pointwise vote is tied at every point");

  // Consensus affine fit through the voted values.
  std::vector<Vec> lin_cols;
  for (int i = 0; i < G1.n(); ++i) {
    const Vec e = G1.unit(i);
    votes.clear();
    for (std::uint64_t xc = 0; xc < n; ++xc) {
      const Vec y = G1.add(Vec{xc}, e);
      if (has_vote[xc] && has_vote[y.code]) votes.push_back(G2.sub(raw[y.code], raw[xc]).code);
    }
    if (votes.empty()) throw NoConsensus("no voted pair along a basis direction");
    bool tied = false;
    lin_cols.push_back(majority(votes, tied));
  }
  rep.map.linear = Matrix::from_columns(G2, lin_cols);
  votes.clear();
  for (std::uint64_t xc = 0; xc < n; ++xc)
    if (has_vote[xc]) votes.push_back(G2.sub(raw[xc], rep.map.linear.apply(G1, G2, Vec{xc})).code);
  bool tied = false;
  rep.map.constant = majority(votes, tied);

  for (std::uint64_t xc = 0; xc < n; ++xc) {
    const Vec v = rep.map.apply(G1, G2, Vec{xc});
    if (has_vote[xc] && v == raw[xc]) ++rep.consensus_fit;
    if (f.defined[xc] && v == f.values[xc]) ++rep.agreement;
  }
  rep.agreement_fraction = static_cast<double>(rep.agreement) / static_cast<double>(n);
  rep.bound = (1.0 - 5.0 * std::pow(rep.measured_eps, 0.25)) * static_cast<double>(n);
  if (static_cast<double>(rep.consensus_fit) < rep.bound)
    throw NoConsensus("voted values are affine on only " + std::to_string(rep.consensus_fit) + " of " +
                      std::to_string(n) + " points");
  return rep;
}

}  // namespace tvs
