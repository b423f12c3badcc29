#include "tvs/gridset.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "tvs/rng.hpp"

namespace tvs {

std::uint64_t Ambient2::cells(std::uint64_t cap) const {
  const std::uint64_t g = G().size();
  const std::uint64_t h = H().size();
  if (h != 0 && g > cap / h) throw CapExceeded("grid has more cells than the configured cap");
  if (g * h > cap) throw CapExceeded("grid has more cells than the configured cap");
  return g * h;
}

GridSet::GridSet(const Ambient2& ambient, std::uint64_t cap)
    : ambient_(ambient),
      size_(ambient.cells(cap)),
      h_size_(ambient.H().size()),
      words_((size_ + 63) / 64, 0) {}

GridSet GridSet::full(const Ambient2& ambient) {
  GridSet g(ambient);
  std::fill(g.words_.begin(), g.words_.end(), ~std::uint64_t{0});
  if (const auto tail = g.size_ % 64; tail != 0) g.words_.back() = (std::uint64_t{1} << tail) - 1;
  return g;
}

void GridSet::set_index(std::uint64_t i, bool on) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (on)
    words_[i >> 6] |= bit;
  else
    words_[i >> 6] &= ~bit;
}

std::uint64_t GridSet::count() const noexcept {
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

double GridSet::density() const noexcept {
  return size_ == 0 ? 0.0 : static_cast<double>(count()) / static_cast<double>(size_);
}

std::vector<Vec> GridSet::row_slice(Vec y) const {
  if (y.code >= h_size_) throw DimensionMismatch("row index outside H");
  std::vector<Vec> out;
  const std::uint64_t g = ambient_.G().size();
  for (std::uint64_t x = 0; x < g; ++x)
    if (test(Vec{x}, y)) out.push_back(Vec{x});
  return out;
}

std::vector<Vec> GridSet::col_slice(Vec x) const {
  if (x.code >= ambient_.G().size()) throw DimensionMismatch("column index outside G");
  std::vector<Vec> out;
  for (std::uint64_t y = 0; y < h_size_; ++y)
    if (test(x, Vec{y})) out.push_back(Vec{y});
  return out;
}

GridSet dhor(const GridSet& a) {
  const FieldSpec G = a.ambient().G();
  const FieldSpec H = a.ambient().H();
  GridSet out(a.ambient());
  for (std::uint64_t y = 0; y < H.size(); ++y) {
    const auto row = a.row_slice(Vec{y});
    for (Vec x1 : row)
      for (Vec x2 : row) out.set(G.sub(x1, x2), Vec{y});
  }
  return out;
}

GridSet dver(const GridSet& a) {
  const FieldSpec G = a.ambient().G();
  const FieldSpec H = a.ambient().H();
  GridSet out(a.ambient());
  for (std::uint64_t x = 0; x < G.size(); ++x) {
    const auto col = a.col_slice(Vec{x});
    for (Vec y1 : col)
      for (Vec y2 : col) out.set(Vec{x}, H.sub(y1, y2));
  }
  return out;
}

namespace {

// A finite set containing 0 is a subspace iff its span has the same size.
std::optional<std::string> subspace_defect(const FieldSpec& field, const std::vector<Vec>& s) {
  if (s.empty()) return "empty";
  if (s.front().code != 0) return "missing 0";
  if (Subspace::span(field, s).size() != s.size()) return "not closed under addition";
  return std::nullopt;
}

}  // namespace

std::optional<SliceWitness> transversality_witness(const GridSet& a) {
  const FieldSpec G = a.ambient().G();
  const FieldSpec H = a.ambient().H();
  for (std::uint64_t y = 0; y < H.size(); ++y)
    if (auto why = subspace_defect(G, a.row_slice(Vec{y})))
      return SliceWitness{SliceWitness::Kind::Row, Vec{y}, *why};
  for (std::uint64_t x = 0; x < G.size(); ++x)
    if (auto why = subspace_defect(H, a.col_slice(Vec{x})))
      return SliceWitness{SliceWitness::Kind::Column, Vec{x}, *why};
  return std::nullopt;
}

bool is_transverse(const GridSet& a) { return !transversality_witness(a).has_value(); }

namespace {

std::string describe(const SliceWitness& w) {
  return std::string(w.kind == SliceWitness::Kind::Row ? "row " : "column ") +
         std::to_string(w.index.code) + ": " + w.reason;
}

}  // namespace

TransverseSet TransverseSet::from_columns_unchecked(const Ambient2& ambient,
                                                    std::vector<Subspace> columns) {
  TransverseSet t;
  t.ambient_ = ambient;
  t.columns_ = std::move(columns);
  return t;
}

TransverseSet TransverseSet::from_columns(const Ambient2& ambient, std::vector<Subspace> columns) {
  const FieldSpec G = ambient.G();
  const FieldSpec H = ambient.H();
  if (columns.size() != G.size()) throw DimensionMismatch("need one column per element of G");
  for (const auto& c : columns)
    if (!(c.field() == H)) throw DimensionMismatch("column is not a subspace of H");
  if (!columns[0].is_full())
    throw NotTransverse("column 0 must equal H",
                        SliceWitness{SliceWitness::Kind::Column, Vec{0}, "missing 0"});
  std::vector<Vec> row;
  for (std::uint64_t y = 0; y < H.size(); ++y) {
    row.clear();
    for (std::uint64_t x = 0; x < G.size(); ++x)
      if (columns[x].contains(Vec{y})) row.push_back(Vec{x});
    if (auto why = subspace_defect(G, row)) {
      SliceWitness w{SliceWitness::Kind::Row, Vec{y}, *why};
      throw NotTransverse("not transverse: " + describe(w), w);
    }
  }
  return from_columns_unchecked(ambient, std::move(columns));
}

TransverseSet TransverseSet::full(const Ambient2& ambient) {
  const FieldSpec G = ambient.G();
  return from_columns_unchecked(ambient,
                                std::vector<Subspace>(G.size(), Subspace::full(ambient.H())));
}

Subspace TransverseSet::row(Vec y) const {
  std::vector<Vec> xs;
  for (std::uint64_t x = 0; x < columns_.size(); ++x)
    if (columns_[x].contains(y)) xs.push_back(Vec{x});
  return Subspace::span(G(), xs);
}

std::uint64_t TransverseSet::count() const noexcept {
  std::uint64_t c = 0;
  for (const auto& col : columns_) c += col.size();
  return c;
}

double TransverseSet::density() const noexcept {
  const double total = static_cast<double>(columns_.size()) *
                       static_cast<double>(ambient_.H().size());
  return total == 0 ? 0.0 : static_cast<double>(count()) / total;
}

TransverseSet to_transverse(const GridSet& a) {
  if (auto w = transversality_witness(a)) throw NotTransverse("not transverse: " + describe(*w), *w);
  const FieldSpec G = a.ambient().G();
  const FieldSpec H = a.ambient().H();
  std::vector<Subspace> cols;
  cols.reserve(G.size());
  for (std::uint64_t x = 0; x < G.size(); ++x) cols.push_back(Subspace::span(H, a.col_slice(Vec{x})));
  return TransverseSet::from_columns_unchecked(a.ambient(), std::move(cols));
}

GridSet to_gridset(const TransverseSet& t, std::uint64_t cap) {
  GridSet g(t.ambient(), cap);
  const auto cols = t.columns();
  for (std::uint64_t x = 0; x < cols.size(); ++x)
    for (Vec y : cols[x].elements()) g.set(Vec{x}, y);
  return g;
}

GeneratedVariety gen_from_bilinear(const BilinearMapSpec& spec, std::uint64_t seed) {
  const Ambient2& amb = spec.ambient;
  const FieldSpec G = amb.G();
  const FieldSpec H = amb.H();
  amb.cells();
  const int dimU = spec.dimU < 0 ? amb.nG : spec.dimU;
  const int dimV = spec.dimV < 0 ? amb.nH : spec.dimV;
  if (dimU > amb.nG || dimV > amb.nH) throw InvalidArgument("subspace dimension exceeds ambient");
  if (spec.r < 0) throw InvalidArgument("r must be non-negative");

  GeneratedVariety out;
  out.U = random_subspace(G, dimU, Rng::derive(seed, kTagGenerate, 0).next());
  out.V = random_subspace(H, dimV, Rng::derive(seed, kTagGenerate, 1).next());
  Rng rng = Rng::derive(seed, kTagGenerate, 2);
  for (int i = 0; i < spec.r; ++i) {
    Matrix b(amb.p, amb.nG, amb.nH);
    for (int row = 0; row < amb.nG; ++row)
      for (int col = 0; col < amb.nH; ++col) b.set(row, col, static_cast<int>(rng.below(amb.p)));
    out.forms.push_back(std::move(b));
  }

  std::vector<Matrix> transposed;
  for (const auto& b : out.forms) transposed.push_back(b.transpose());
  std::vector<Subspace> cols(G.size(), Subspace::zero(H));
  cols[0] = Subspace::full(H);
  std::vector<Vec> normals;
  for (std::uint64_t x = 1; x < G.size(); ++x) {
    if (!out.U.contains(Vec{x})) continue;
    normals.clear();
    for (const auto& bt : transposed) normals.push_back(bt.apply(G, H, Vec{x}));
    cols[x] = intersect(out.V, orth_complement(Subspace::span(H, normals)));
  }
  out.set = TransverseSet::from_columns(amb, std::move(cols));
  return out;
}

std::uint64_t enumerate_transverse_small(const Ambient2& ambient,
                                         const std::function<bool(const TransverseSet&)>& visit,
                                         std::uint64_t min_cells) {
  const FieldSpec G = ambient.G();
  const FieldSpec H = ambient.H();
  if (G.size() > 16 || H.size() > 16) throw CapExceeded("enumeration needs |G|, |H| <= 16");

  const std::vector<Subspace> subs = all_subspaces(H);
  const std::size_t m = subs.size();
  auto index_of = [&](const Subspace& s) {
    return static_cast<std::size_t>(std::find(subs.begin(), subs.end(), s) - subs.begin());
  };
  std::vector<std::size_t> meet(m * m);
  std::vector<char> within(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      meet[i * m + j] = index_of(intersect(subs[i], subs[j]));
      within[i * m + j] = subs[j].contains(subs[i]) ? 1 : 0;
    }
  // Largest first so the full product is visited early.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());

  const std::size_t g = G.size();
  const std::size_t full_idx = index_of(Subspace::full(H));
  std::vector<std::size_t> assign(g, full_idx);
  std::uint64_t visited = 0;
  bool stop = false;

  // Closure of every row under addition, tested on the triples completed by x.
  auto consistent = [&](std::size_t x) {
    for (std::size_t o = 0; o <= x; ++o) {
      const std::size_t s = G.add(Vec{x}, Vec{o}).code;
      if (s <= x && !within[meet[assign[x] * m + assign[o]] * m + assign[s]]) return false;
      const std::size_t d = G.sub(Vec{x}, Vec{o}).code;
      if (d <= x && !within[meet[assign[o] * m + assign[d]] * m + assign[x]]) return false;
    }
    return true;
  };

  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t x, std::uint64_t cells) {
    if (stop) return;
    if (cells + (g - x) * H.size() < min_cells) return;
    if (x == g) {
      std::vector<Subspace> cols;
      cols.reserve(g);
      for (auto idx : assign) cols.push_back(subs[idx]);
      ++visited;
      if (!visit(TransverseSet::from_columns_unchecked(ambient, std::move(cols)))) stop = true;
      return;
    }
    for (std::size_t idx : order) {
      assign[x] = idx;
      if (consistent(x)) rec(x + 1, cells + subs[idx].size());
      if (stop) return;
    }
    assign[x] = full_idx;
  };
  rec(1, H.size());
  return visited;
}

}  // namespace tvs
