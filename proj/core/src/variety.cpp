#include "tvs/variety.hpp"

#include <cmath>

#include "tvs/rng.hpp"

namespace tvs {

std::vector<Matrix> reduce_forms(int p, int nG, int nH, const std::vector<Matrix>& forms) {
  const int width = nG * nH;
  Matrix stacked(p, static_cast<int>(forms.size()), width);
  for (std::size_t f = 0; f < forms.size(); ++f) {
    if (forms[f].rows() != nG || forms[f].cols() != nH || forms[f].p() != p)
      throw DimensionMismatch("form has the wrong shape");
    for (int i = 0; i < nG; ++i)
      for (int j = 0; j < nH; ++j) stacked.set(static_cast<int>(f), i * nH + j, forms[f](i, j));
  }
  const auto rr = stacked.rref();
  std::vector<Matrix> out;
  for (int row = 0; row < rr.rank; ++row) {
    Matrix b(p, nG, nH);
    for (int i = 0; i < nG; ++i)
      for (int j = 0; j < nH; ++j) b.set(i, j, rr.reduced(row, i * nH + j));
    out.push_back(std::move(b));
  }
  return out;
}

BilinearVariety::BilinearVariety(Subspace U, Subspace V, std::vector<Matrix> forms)
    : U_(std::move(U)), V_(std::move(V)) {
  if (U_.field().p() != V_.field().p()) throw DimensionMismatch("U and V over different fields");
  forms_ = reduce_forms(U_.field().p(), U_.field().n(), V_.field().n(), forms);
  for (const auto& b : forms_) transposed_.push_back(b.transpose());
}

bool BilinearVariety::member(Vec x, Vec y) const {
  if (!U_.field().contains(x) || !V_.field().contains(y)) throw DimensionMismatch("point outside G x H");
  if (!U_.contains(x) || !V_.contains(y)) return false;
  const FieldSpec& G = U_.field();
  const FieldSpec& H = V_.field();
  for (const auto& bt : transposed_)
    if (H.dot(bt.apply(G, H, x), y) != 0) return false;
  return true;
}

Subspace BilinearVariety::fiber(Vec x) const {
  const FieldSpec& G = U_.field();
  const FieldSpec& H = V_.field();
  std::vector<Vec> normals;
  for (const auto& bt : transposed_) normals.push_back(bt.apply(G, H, x));
  return intersect(V_, orth_complement(Subspace::span(H, normals)));
}

double BilinearVariety::density_bound() const noexcept {
  const double p = U_.field().p();
  return std::pow(p, -(codimension()));
}

GridSet enumerate(const BilinearVariety& w, std::uint64_t cap) {
  GridSet g(w.ambient(), cap);
  for (Vec x : w.U().elements())
    for (Vec y : w.fiber(x).elements()) g.set(x, y);
  return g;
}

ContainmentCertificate contained_in(const BilinearVariety& w, const TransverseSet& a, CertifyMode mode,
                                    std::uint64_t seed, std::uint64_t samples, std::uint64_t cap) {
  if (!(w.ambient() == a.ambient())) throw DimensionMismatch("variety and set on different ambients");
  const std::uint64_t cells_uv = w.U().size() * w.V().size();
  constexpr std::uint64_t kColumnCap = std::uint64_t{1} << 20;
  if (mode == CertifyMode::Auto)
    mode = cells_uv <= cap ? CertifyMode::Exhaustive : CertifyMode::Sampled;

  ContainmentCertificate cert;
  if (mode == CertifyMode::Exhaustive) {
    if (w.U().size() > kColumnCap) throw CapExceeded("U too large for exhaustive certification");
    const bool cellwise = cells_uv <= cap;
    cert.mode = cellwise ? "exhaustive" : "columnwise";
    for (Vec x : w.U().elements()) {
      const Subspace fib = w.fiber(x);
      const Subspace& col = a.column(x);
      if (cellwise) {
        for (Vec y : fib.elements()) {
          ++cert.checked;
          if (!col.contains(y)) {
            cert.pass = false;
            cert.violation = std::make_pair(x, y);
            return cert;
          }
        }
      } else {
        cert.checked += fib.size();
        if (!col.contains(fib)) {
          for (Vec b : fib.basis())
            if (!col.contains(b)) cert.violation = std::make_pair(x, b);
          cert.pass = false;
          return cert;
        }
      }
    }
    return cert;
  }

  cert.mode = "sampled";
  Rng rng = Rng::derive(seed, kTagCertify, 0);
  const std::uint64_t max_draws = samples * 4096;
  for (std::uint64_t draw = 0; draw < max_draws && cert.checked < samples; ++draw) {
    const Vec x = w.U().element(rng.below(w.U().size()));
    const Vec y = w.V().element(rng.below(w.V().size()));
    if (!w.member(x, y)) continue;
    ++cert.checked;
    if (!a.contains(x, y)) {
      cert.pass = false;
      cert.violation = std::make_pair(x, y);
      return cert;
    }
  }
  return cert;
}

namespace {

Matrix unflatten(const FieldSpec& forms, int nG, int nH, Vec v) {
  Matrix b(forms.p(), nG, nH);
  for (int i = 0; i < nG; ++i)
    for (int j = 0; j < nH; ++j) b.set(i, j, forms.digit(v, i * nH + j));
  return b;
}

}  // namespace

ExactVarietyResult is_exact_variety(const TransverseSet& a, std::uint64_t search_cap) {
  const Ambient2 amb = a.ambient();
  if ((amb.p != 2 && amb.p != 3) || amb.nG * amb.nH > 9)
    throw CapExceeded("exact-variety oracle needs p in {2, 3} and nG * nH <= 9");
  const FieldSpec G = amb.G();
  const FieldSpec H = amb.H();
  const FieldSpec F(amb.p, amb.nG * amb.nH);

  // Evaluation functional of the cell (x, y) on the form space.
  auto tensor = [&](Vec x, Vec y) {
    std::vector<int> digits(static_cast<std::size_t>(F.n()));
    for (int i = 0; i < amb.nG; ++i)
      for (int j = 0; j < amb.nH; ++j)
        digits[static_cast<std::size_t>(i * amb.nH + j)] = F.mod(G.digit(x, i) * H.digit(y, j));
    return F.from_digits(digits);
  };

  std::vector<Vec> inside;
  std::vector<Vec> outside;
  for (std::uint64_t x = 0; x < G.size(); ++x)
    for (std::uint64_t y = 0; y < H.size(); ++y)
      (a.contains(Vec{x}, Vec{y}) ? inside : outside).push_back(tensor(Vec{x}, Vec{y}));
  const Subspace T = Subspace::span(F, inside);
  const Subspace B = orth_complement(T);

  ExactVarietyResult res;
  res.annihilator_dim = B.dim();
  for (Vec t : outside)
    if (T.contains(t)) return res;
  res.exact = true;

  auto to_forms = [&](std::span<const Vec> basis) {
    std::vector<Matrix> out;
    for (Vec v : basis) out.push_back(unflatten(F, amb.nG, amb.nH, v));
    return out;
  };
  const FieldSpec coords(amb.p, B.dim());
  std::uint64_t visited = 0;
  bool found = false;
  bool capped = false;
  for (int k = 0; k <= B.dim() && !found && !capped; ++k) {
    for_each_subspace(coords, k, [&](const Subspace& s) {
      if (++visited > search_cap) {
        capped = true;
        return false;
      }
      std::vector<Vec> lifted;
      for (Vec c : s.basis()) lifted.push_back(B.element(c.code));
      for (Vec t : outside) {
        bool separated = false;
        for (Vec f : lifted)
          if (F.dot(f, t) != 0) {
            separated = true;
            break;
          }
        if (!separated) return true;
      }
      res.witness = to_forms(lifted);
      found = true;
      return false;
    });
  }
  if (!found) {
    res.witness = to_forms(B.basis());
    res.minimal = false;
  }
  return res;
}

}  // namespace tvs
