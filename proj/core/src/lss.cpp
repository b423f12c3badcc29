#include "tvs/lss.hpp"

#include <functional>

#include "tvs/matrix.hpp"
#include "tvs/rng.hpp"

namespace tvs {

LinearSubspaceSystem::LinearSubspaceSystem(Subspace U, Subspace V, std::vector<Subspace> table)
    : U_(std::move(U)),
      V_(std::move(V)),
      domain_(U_.field().p(), U_.dim()),
      values_(V_.field().p(), V_.dim()),
      table_(std::move(table)) {
  if (U_.field().p() != V_.field().p()) throw DimensionMismatch("U and V over different fields");
  if (table_.size() != domain_.size()) throw DimensionMismatch("table must have one entry per element of U");
  for (const auto& s : table_)
    if (!(s.field() == values_)) throw DimensionMismatch("table entry outside the value space");
}

LinearSubspaceSystem LinearSubspaceSystem::over(const FieldSpec& G, const FieldSpec& H,
                                                std::vector<Subspace> table) {
  return LinearSubspaceSystem(Subspace::full(G), Subspace::full(H), std::move(table));
}

LinearSubspaceSystem from_transverse(const TransverseSet& t, const Subspace& U, const Subspace& V) {
  if (!(U.field() == t.G()) || !(V.field() == t.H())) throw DimensionMismatch("U, V must lie in G, H");
  const FieldSpec values(V.field().p(), V.dim());
  const FieldSpec domain(U.field().p(), U.dim());
  std::vector<Subspace> table;
  table.reserve(domain.size());
  std::vector<Vec> coords;
  for (std::uint64_t i = 0; i < domain.size(); ++i) {
    const Subspace slice = intersect(t.column(U.element(i)), V);
    coords.clear();
    for (Vec b : slice.basis()) coords.push_back(Vec{V.coordinate_index(b)});
    table.push_back(orth_complement(Subspace::span(values, coords)));
  }
  return LinearSubspaceSystem(U, V, std::move(table));
}

LinearSubspaceSystem from_transverse(const TransverseSet& t, const Subspace& V) {
  return from_transverse(t, Subspace::full(t.G()), V);
}

LinearSubspaceSystem from_transverse(const TransverseSet& t) {
  return from_transverse(t, Subspace::full(t.G()), Subspace::full(t.H()));
}

TransverseSet from_lss(const LinearSubspaceSystem& s) {
  if (!s.U().is_full() || !s.V().is_full())
    throw InvalidArgument("from_lss needs a system indexed by G with values in H");
  if (!validate(s)) throw InvalidArgument("invalid linear system of subspaces");
  const Ambient2 amb{s.U().field().p(), s.U().field().n(), s.V().field().n()};
  std::vector<Subspace> cols;
  cols.reserve(s.table().size());
  for (const auto& vx : s.table()) cols.push_back(orth_complement(vx));
  return TransverseSet::from_columns_unchecked(amb, std::move(cols));
}

LssValidation validate(const LinearSubspaceSystem& s) {
  const FieldSpec& G = s.domain();
  if (!s.at(Vec{0}).is_zero()) return {false, "V_0 is not {0}", Vec{0}, Vec{0}};
  for (std::uint64_t a = 0; a < G.size(); ++a) {
    for (std::uint64_t b = a; b < G.size(); ++b) {
      const Vec x1{a};
      const Vec x2{b};
      if (!sum(s.at(x1), s.at(x2)).contains(s.at(G.add(x1, x2))))
        return {false, "V_{x1+x2} not contained in V_x1 + V_x2", x1, x2};
    }
  }
  return {};
}

bool check_scaling(const LinearSubspaceSystem& s) {
  const FieldSpec& G = s.domain();
  for (std::uint64_t a = 0; a < G.size(); ++a)
    for (int lambda = 2; lambda < G.p(); ++lambda)
      if (!(s.at(G.scale(lambda, Vec{a})) == s.at(Vec{a}))) return false;
  return true;
}

bool check_zero_sum(const LinearSubspaceSystem& s, int r) {
  if (r < 1 || r > 4) throw InvalidArgument("zero-sum check supports 1 <= r <= 4");
  const FieldSpec& G = s.domain();
  std::vector<Vec> xs(static_cast<std::size_t>(r));
  bool ok = true;
  // Choose x1..x(r-1) freely; xr is forced to minus their sum.
  std::function<void(int, Vec)> rec = [&](int i, Vec partial) {
    if (!ok) return;
    if (i == r - 1) {
      xs[i] = G.neg(partial);
      Subspace head = Subspace::zero(s.values());
      for (int j = 0; j < r - 1; ++j) head = sum(head, s.at(xs[j]));
      if (!(sum(head, s.at(xs[i])) == head)) ok = false;
      return;
    }
    for (std::uint64_t c = 0; c < G.size() && ok; ++c) {
      xs[i] = Vec{c};
      rec(i + 1, G.add(partial, xs[i]));
    }
  };
  rec(0, Vec{0});
  return ok;
}

QuasirandomnessProfile quasirandomness_profile(const LinearSubspaceSystem& s, int d) {
  QuasirandomnessProfile q;
  q.d = d;
  const auto table = s.table();
  q.points = table.size();
  q.pairs = q.points * q.points;
  for (const auto& v : table)
    if (v.dim() != d) ++q.bad_points;
  for (std::size_t a = 0; a < table.size(); ++a) {
    if (table[a].is_zero()) continue;
    for (std::size_t b = 0; b < table.size(); ++b) {
      if (table[b].is_zero()) continue;
      if (sum_dim(table[a], table[b]) < table[a].dim() + table[b].dim()) ++q.bad_pairs;
    }
  }
  q.eps1 = static_cast<double>(q.bad_points) / static_cast<double>(q.points);
  q.eps2 = static_cast<double>(q.bad_pairs) / static_cast<double>(q.pairs);
  return q;
}

LinearSubspaceSystem random_lss(const FieldSpec& G, const FieldSpec& H, int components, std::uint64_t seed) {
  std::vector<Subspace> table(G.size(), Subspace::zero(H));
  Rng rng = Rng::derive(seed, kTagGenerate, 0x6c7373);
  for (int c = 0; c < components; ++c) {
    if (rng.below(2) == 0 || G.n() == 0) {
      Matrix m(G.p(), H.n(), G.n());
      for (int i = 0; i < H.n(); ++i)
        for (int j = 0; j < G.n(); ++j) m.set(i, j, static_cast<int>(rng.below(G.p())));
      for (std::uint64_t x = 0; x < G.size(); ++x) {
        const Vec v = m.apply(G, H, Vec{x});
        table[x] = sum(table[x], Subspace::span(H, std::span<const Vec>(&v, 1)));
      }
    } else {
      const Subspace K = random_subspace(G, G.n() - 1, rng.next());
      const Subspace W = random_subspace(H, H.n() == 0 ? 0 : 1, rng.next());
      for (std::uint64_t x = 0; x < G.size(); ++x)
        if (!K.contains(Vec{x})) table[x] = sum(table[x], W);
    }
  }
  return LinearSubspaceSystem::over(G, H, std::move(table));
}

double sum_intersection_fraction(const LinearSubspaceSystem& s, int r) {
  if (r < 1 || r > 4) throw InvalidArgument("tuple counting supports 1 <= r <= 4");
  const auto table = s.table();
  const std::uint64_t n = table.size();
  std::uint64_t bad = 0;
  std::uint64_t total = 0;
  std::function<void(int, const Subspace&)> rec = [&](int depth, const Subspace& acc) {
    if (depth == r) {
      for (std::uint64_t x0 = 0; x0 < n; ++x0) {
        ++total;
        if (sum_dim(table[x0], acc) < table[x0].dim() + acc.dim()) ++bad;
      }
      return;
    }
    for (std::uint64_t x = 0; x < n; ++x) rec(depth + 1, sum(acc, table[x]));
  };
  rec(0, Subspace::zero(s.values()));
  return static_cast<double>(bad) / static_cast<double>(total);
}

}  // namespace tvs
