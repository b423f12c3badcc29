#include <algorithm>
#include <sstream>

#include "tvs/extraction.hpp"
#include "tvs/rng.hpp"

namespace tvs {

namespace {

constexpr std::uint64_t kExactAnchorTriples = std::uint64_t{1} << 24;
constexpr std::uint64_t kSampledAnchorTriples = std::uint64_t{1} << 16;

void insert_all(Echelon& e, const Subspace& s) {
  for (Vec b : s.basis()) e.insert(b);
}

// Matrices k x d <-> vectors of F_p^{kd}; entry (i, j) is coordinate j*k + i.
Vec flatten(const FieldSpec& flat, const Matrix& m) {
  std::vector<int> digits(static_cast<std::size_t>(flat.n()));
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) digits[static_cast<std::size_t>(j * m.rows() + i)] = m(i, j);
  return flat.from_digits(digits);
}

Matrix unflatten(const FieldSpec& flat, int k, int d, Vec v) {
  Matrix m(flat.p(), k, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < k; ++i) m.set(i, j, flat.digit(v, j * k + i));
  return m;
}

struct AnchorEval {
  std::uint64_t good = 0;
  std::uint64_t triples = 0;
  std::uint64_t pairs = 0;
};

AnchorEval evaluate_anchor(const LinearSubspaceSystem& s, int d, Vec a, const std::vector<Vec>& full_dim,
                           std::uint64_t seed) {
  const FieldSpec& G = s.domain();
  const std::uint64_t n = G.size();
  const Subspace& Va = s.at(a);
  const bool a_ok = Va.dim() == d;
  AnchorEval ev;
  const bool exact = n * n * n <= kExactAnchorTriples;

  Echelon e(s.values());
  auto pair_ok = [&](Vec x, Vec y, Vec w) {
    if (s.at(x).dim() != d || s.at(y).dim() != d || s.at(w).dim() != d) return false;
    e.truncate(0);
    insert_all(e, Va);
    insert_all(e, s.at(x));
    insert_all(e, s.at(y));
    return e.rank() == 3 * d;
  };
  // Triple (x, y, z) condition (iii), given the pair conditions.
  auto triple_ok = [&](Vec x, Vec y, Vec z, Vec w) {
    e.truncate(0);
    insert_all(e, s.at(x));
    insert_all(e, s.at(y));
    insert_all(e, s.at(z));
    const int k = e.rank();
    insert_all(e, s.at(w));
    return e.rank() == k + d;
  };

  for (std::uint64_t xc = 0; xc < n; ++xc)
    for (std::uint64_t yc = 0; yc < n; ++yc) {
      const Vec x{xc}, y{yc};
      const Vec w = G.sub(G.add(x, y), a);
      if (!pair_ok(x, y, w)) continue;
      ++ev.pairs;
      if (!a_ok || !exact) continue;
      e.truncate(0);
      insert_all(e, s.at(x));
      insert_all(e, s.at(y));
      const int base = e.rank();
      for (Vec z : full_dim) {
        insert_all(e, s.at(z));
        const int k = e.rank();
        insert_all(e, s.at(w));
        if (e.rank() == k + d) ++ev.good;
        e.truncate(base);
      }
    }
  if (exact) {
    ev.triples = n * n * n;
    return ev;
  }
  ev.triples = kSampledAnchorTriples;
  if (!a_ok) return ev;
  Rng rng = Rng::derive(seed, kTagAnchor, a.code);
  for (std::uint64_t t = 0; t < kSampledAnchorTriples; ++t) {
    const Vec x{rng.below(n)}, y{rng.below(n)}, z{rng.below(n)};
    const Vec w = G.sub(G.add(x, y), a);
    if (s.at(z).dim() == d && pair_ok(x, y, w) && triple_ok(x, y, z, w)) ++ev.good;
  }
  return ev;
}

}  // namespace

std::vector<std::pair<Vec, Vec>> anchor_pairs(const LinearSubspaceSystem& s, int d, Vec a) {
  const FieldSpec& G = s.domain();
  std::vector<std::pair<Vec, Vec>> out;
  Echelon e(s.values());
  for (std::uint64_t xc = 0; xc < G.size(); ++xc)
    for (std::uint64_t yc = 0; yc < G.size(); ++yc) {
      const Vec x{xc}, y{yc};
      const Vec w = G.sub(G.add(x, y), a);
      if (s.at(x).dim() != d || s.at(y).dim() != d || s.at(w).dim() != d) continue;
      e.truncate(0);
      insert_all(e, s.at(a));
      insert_all(e, s.at(x));
      insert_all(e, s.at(y));
      if (e.rank() == 3 * d) out.emplace_back(x, y);
    }
  return out;
}

AnchorScore choose_anchor(const LinearSubspaceSystem& s, int d, std::uint64_t budget, std::uint64_t seed) {
  const FieldSpec& G = s.domain();
  const std::uint64_t n = G.size();
  std::vector<Vec> full_dim;
  for (std::uint64_t z = 0; z < n; ++z)
    if (s.at(Vec{z}).dim() == d) full_dim.push_back(Vec{z});

  std::vector<Vec> candidates;
  if (n <= (std::uint64_t{1} << 12)) {
    for (std::uint64_t a = 0; a < std::min(budget, n); ++a) candidates.push_back(Vec{a});
  } else {
    Rng rng = Rng::derive(seed, kTagAnchor);
    for (std::uint64_t i = 0; i < budget; ++i) candidates.push_back(Vec{rng.below(n)});
  }

  AnchorScore best;
  bool have = false;
  for (Vec a : candidates) {
    const AnchorEval ev = evaluate_anchor(s, d, a, full_dim, seed);
    AnchorScore cur;
    cur.a = a;
    cur.good_triples = ev.good;
    cur.triples = ev.triples;
    cur.pairs = ev.pairs;
    cur.score = ev.triples ? static_cast<double>(ev.good) / static_cast<double>(ev.triples) : 0.0;
    ++best.scanned;
    const bool better = !have || cur.good_triples * best.triples > best.good_triples * cur.triples ||
                        (cur.good_triples * best.triples == best.good_triples * cur.triples &&
                         (cur.pairs > best.pairs || (cur.pairs == best.pairs && cur.a < best.a)));
    if (better) {
      const std::uint64_t scanned = best.scanned;
      best = cur;
      best.scanned = scanned;
      have = true;
    }
    if (best.triples > 0 && best.good_triples == best.triples) break;
  }
  return best;
}

Matrix BilinearStructure::at(const FieldSpec& domain, Vec x) const {
  Matrix m = psi;
  for (int i = 0; i < domain.n(); ++i) {
    const int c = domain.digit(x, i);
    if (c != 0) m = m + phi[static_cast<std::size_t>(i)].scaled(c);
  }
  return m;
}

BilinearStructure bilinear_system_structure(const LinearSubspaceSystem& s, int d, const StructureConfig& cfg) {
  const FieldSpec& G = s.domain();
  const FieldSpec& K = s.values();
  const int p = G.p();
  const std::uint64_t n = G.size();
  if (d < 0 || d > K.n()) throw InvalidArgument("d outside [0, dim V]");

  BilinearStructure st;
  st.d = d;
  st.k = K.n();
  st.profile = quasirandomness_profile(s, d);
  st.good.assign(n, 0);

  auto certify_good = [&] {
    st.good_count = 0;
    for (std::uint64_t x = 0; x < n; ++x) {
      const Matrix m = st.at(G, Vec{x});
      const bool ok = Subspace::span(K, m.columns(K)) == s.at(Vec{x});
      st.good[x] = ok ? 1 : 0;
      st.good_count += ok ? 1 : 0;
    }
    st.good_fraction = static_cast<double>(st.good_count) / static_cast<double>(n);
  };

  if (d == 0) {
    st.phi.assign(static_cast<std::size_t>(G.n()), Matrix(p, st.k, 0));
    st.psi = Matrix(p, st.k, 0);
    certify_good();
    return st;
  }

  if (st.profile.eps1 > cfg.max_eps1 || st.profile.eps2 > cfg.max_eps2) {
    std::ostringstream os;
    os << "quasirandomness profile (" << st.profile.eps1 << ", " << st.profile.eps2 << ") above thresholds";
    throw ExtractionError(ExtractionError::Kind::ProfileRejected, os.str());
  }

  const AnchorScore anchor = choose_anchor(s, d, cfg.anchor_budget, cfg.seed);
  st.anchor = anchor;
  if (anchor.pairs == 0) throw ExtractionError(ExtractionError::Kind::AnchorTooWeak, "no admissible pairs for any scanned anchor");
  const Vec a = anchor.a;
  const Matrix theta = Matrix::from_columns(K, s.at(a).basis());

  // theta^1_q + theta^2_q = theta + theta^3_q for q = (x, y); vote theta^3_q onto x + y - a.
  const FieldSpec flat(p, st.k * d);
  std::vector<std::vector<std::uint64_t>> votes(n);
  for (const auto& [x, y] : anchor_pairs(s, d, a)) {
    const Vec w = G.sub(G.add(x, y), a);
    ++st.quad_pairs;
    try {
      const QuadMaps maps = quad_isomorphisms({s.at(x), s.at(y), s.at(w), s.at(a), theta});
      votes[w.code].push_back(flatten(flat, maps.phi3).code);
    } catch (const HypothesisViolated&) {
      ++st.quad_skipped;
    }
  }

  PartialMap f(G, flat);
  bool any_clear = false;
  for (std::uint64_t w = 0; w < n; ++w) {
    auto& v = votes[w];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    std::uint64_t best = 0;
    std::size_t best_count = 0;
    bool tied = false;
    for (std::size_t i = 0; i < v.size();) {
      std::size_t j = i;
      while (j < v.size() && v[j] == v[i]) ++j;
      if (j - i > best_count) {
        best = v[i];
        best_count = j - i;
        tied = false;
      } else if (j - i == best_count) {
        tied = true;
      }
      i = j;
    }
    f.set(Vec{w}, Vec{best});
    ++st.voted_points;
    any_clear = any_clear || !tied;
  }
  if (!any_clear) throw ExtractionError(ExtractionError::Kind::ConsensusFailed, "every point has a tied or empty vote");

  try {
    st.extension = extend_near_homomorphism(f, cfg.extension_cap, cfg.seed);
  } catch (const EpsilonTooLarge& e) {
    throw ExtractionError(ExtractionError::Kind::ExtensionFailed, e.what());
  } catch (const NoConsensus& e) {
    throw ExtractionError(ExtractionError::Kind::ExtensionFailed, e.what());
  }
  const AffineMap& phi = st.extension->map;
  for (int i = 0; i < G.n(); ++i) st.phi.push_back(unflatten(flat, st.k, d, phi.linear.column(flat, i)));
  st.psi = unflatten(flat, st.k, d, phi.constant);
  certify_good();
  return st;
}

}  // namespace tvs
