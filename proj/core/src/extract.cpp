#include <chrono>
#include <cmath>
#include <sstream>

#include "tvs/extraction.hpp"

namespace tvs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Subspace lift(const Subspace& ambient_sub, const Subspace& coords) {
  std::vector<Vec> out;
  for (Vec c : coords.basis()) out.push_back(ambient_sub.element(c.code));
  return Subspace::span(ambient_sub.field(), out);
}

// Forms on G x H whose restriction to U x V' is the coordinate form R: the
// entry at (pivot of u_a, pivot of v_b) is R(a, b), everything else is 0.
Matrix lift_form(const Subspace& U, const Subspace& V, const Matrix& restricted) {
  const auto pu = U.pivots();
  const auto pv = V.pivots();
  Matrix b(U.field().p(), U.field().n(), V.field().n());
  for (int i = 0; i < restricted.rows(); ++i)
    for (int j = 0; j < restricted.cols(); ++j)
      b.set(pu[static_cast<std::size_t>(i)], pv[static_cast<std::size_t>(j)], restricted(i, j));
  return b;
}

// Restriction of a form to U x V' in the canonical bases.
Matrix restrict_form(const Subspace& U, const Subspace& V, const Matrix& b) {
  const FieldSpec& G = U.field();
  const FieldSpec& H = V.field();
  Matrix r(G.p(), U.dim(), V.dim());
  const Matrix bt = b.transpose();
  for (int i = 0; i < U.dim(); ++i) {
    const Vec image = bt.apply(G, H, U.basis()[static_cast<std::size_t>(i)]);
    for (int j = 0; j < V.dim(); ++j) r.set(i, j, H.dot(image, V.basis()[static_cast<std::size_t>(j)]));
  }
  return r;
}

struct Candidate {
  BilinearVariety variety;
  bool argument_checked = false;
  bool argument_holds = true;
  bool restricted_to_good = false;
};

constexpr std::uint64_t kArgumentCap = std::uint64_t{1} << 27;

Candidate build_candidate(const TransverseSet& a, const RegularityOutput& reg, const LinearSubspaceSystem& sys,
                          const BilinearStructure& st) {
  const FieldSpec& G = a.G();
  const FieldSpec& dom = sys.domain();
  const FieldSpec& K = sys.values();
  const int p = G.p();
  Candidate c;

  if (st.d == 0) {
    // No forms: the zero cells are all of U x V, which lie in A exactly over the good set.
    Subspace U = reg.U;
    if (st.good_count != dom.size()) {
      std::vector<Vec> good;
      for (std::uint64_t x = 0; x < dom.size(); ++x)
        if (st.good[x]) good.push_back(sys.lift_index(Vec{x}));
      U = Subspace::span(G, good);
      c.restricted_to_good = true;
    }
    c.variety = BilinearVariety(U, reg.V, {});
    c.argument_checked = true;
    return c;
  }

  // V' = V ∩ (Im Psi)^perp, in coordinates of V.
  const Subspace im_psi = Subspace::span(K, st.psi.columns(K));
  const Subspace v_prime_coords = orth_complement(im_psi);
  const Subspace v_prime = lift(reg.V, v_prime_coords);

  // beta_i(x, y) = Phi(x, e_i) . y in coordinates; lifted to G x H through the pivots of U and V.
  std::vector<Matrix> raw;
  for (int i = 0; i < st.d; ++i) {
    Matrix coord(p, dom.n(), K.n());
    for (int u = 0; u < dom.n(); ++u)
      for (int b = 0; b < K.n(); ++b) coord.set(u, b, st.phi[static_cast<std::size_t>(u)](b, i));
    raw.push_back(lift_form(reg.U, reg.V, coord));
  }
  std::vector<Matrix> restricted;
  for (const auto& b : raw) restricted.push_back(restrict_form(reg.U, v_prime, b));
  std::vector<Matrix> forms;
  for (const auto& r : reduce_forms(p, reg.U.dim(), v_prime.dim(), restricted))
    forms.push_back(lift_form(reg.U, v_prime, r));
  c.variety = BilinearVariety(reg.U, v_prime, forms);

  // Every zero cell (x, y) needs u with u, u - x good and beta(u, y) = 0.
  const std::uint64_t nu = reg.U.size();
  if (nu * nu * v_prime.size() > kArgumentCap) return c;
  c.argument_checked = true;
  std::vector<Vec> good;
  std::vector<char> good_code(G.size(), 0);
  for (std::uint64_t x = 0; x < dom.size(); ++x)
    if (st.good[x]) {
      const Vec g = sys.lift_index(Vec{x});
      good.push_back(g);
      good_code[g.code] = 1;
    }
  const auto us = reg.U.elements();
  for (Vec y : v_prime.elements()) {
    std::vector<Vec> kernel_good;
    for (Vec u : good)
      if (c.variety.member(u, y)) kernel_good.push_back(u);
    for (Vec x : us) {
      if (!c.variety.member(x, y)) continue;
      bool found = false;
      for (Vec u : kernel_good)
        if (good_code[G.sub(u, x).code]) {
          found = true;
          break;
        }
      if (!found) {
        c.argument_holds = false;
        return c;
      }
    }
  }
  return c;
}

}  // namespace

ExtractionReport extract_variety(const TransverseSet& a, const ExtractConfig& cfg) {
  ExtractionReport rep;
  const FieldSpec G = a.G();
  const int p = G.p();
  const auto t_total = Clock::now();

  RegularizeConfig rcfg;
  rcfg.eps = cfg.eps;
  rcfg.seed = cfg.seed;
  rcfg.mode = cfg.mode;
  rcfg.retry_budget = cfg.retry_budget;
  StructureConfig scfg = cfg.structure;
  scfg.seed = cfg.seed;
  scfg.anchor_budget = cfg.anchor_budget;

  double t_reg = 0, t_struct = 0, t_build = 0;
  for (;;) {
    auto t0 = Clock::now();
    RegularityOutput reg = regularize(a, rcfg);
    t_reg += seconds_since(t0);

    t0 = Clock::now();
    const LinearSubspaceSystem sys = from_transverse(a, reg.U, reg.V);
    std::optional<BilinearStructure> st;
    try {
      st = bilinear_system_structure(sys, reg.d, scfg);
    } catch (const ExtractionError& e) {
      t_struct += seconds_since(t0);
      rep.attempts.push_back({reg.d, std::string(to_string(e.kind())) + ": " + e.what()});
      rcfg.max_d = reg.d - 1;
      continue;
    }
    t_struct += seconds_since(t0);

    t0 = Clock::now();
    Candidate cand = build_candidate(a, reg, sys, *st);
    t_build += seconds_since(t0);
    if (!cand.argument_holds) {
      rep.attempts.push_back({reg.d, "containment argument fails for some zero cell"});
      rcfg.max_d = reg.d - 1;
      continue;
    }
    rep.attempts.push_back({reg.d, "accepted"});
    rep.variety = std::move(cand.variety);
    rep.argument_checked = cand.argument_checked;
    rep.restricted_to_good = cand.restricted_to_good;
    rep.regularity = std::move(reg);
    rep.structure = std::move(st);
    break;
  }

  const auto t0 = Clock::now();
  rep.certificate = contained_in(rep.variety, a, cfg.certify, cfg.seed, kMinSampledCells, cfg.cap);
  rep.timing["certify"] = seconds_since(t0);
  rep.timing["regularize"] = t_reg;
  rep.timing["structure"] = t_struct;
  rep.timing["variety"] = t_build;
  rep.timing["total"] = seconds_since(t_total);

  rep.density = static_cast<double>(rep.regularity.cells) / static_cast<double>(rep.regularity.total);
  rep.log_inv_density = std::log(1.0 / rep.density) / std::log(static_cast<double>(p));
  if (!rep.certificate.pass) {
    const auto [x, y] = rep.certificate.violation.value_or(std::make_pair(Vec{}, Vec{}));
    std::ostringstream os;
    os << "variety cell (" << x.code << ", " << y.code << ") is not in A";
    throw CertificationFailed(os.str(), x, y);
  }
  return rep;
}

}  // namespace tvs
