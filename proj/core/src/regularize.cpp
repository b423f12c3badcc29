#include <algorithm>
#include <cmath>
#include <sstream>

#include "tvs/extraction.hpp"
#include "tvs/rng.hpp"

namespace tvs {

const char* to_string(ExtractionError::Kind kind) noexcept {
  switch (kind) {
    case ExtractionError::Kind::AnchorTooWeak: return "AnchorTooWeak";
    case ExtractionError::Kind::ConsensusFailed: return "ConsensusFailed";
    case ExtractionError::Kind::ExtensionFailed: return "ExtensionFailed";
    case ExtractionError::Kind::ProfileRejected: return "ProfileRejected";
  }
  return "unknown";
}

int d0_bound(int p, std::uint64_t cells, std::uint64_t total) {
  if (cells == 0) throw InvalidArgument("density must be positive");
  if (total <= (std::uint64_t{1} << 24)) {
    using u128 = unsigned __int128;
    const u128 n = cells;
    const u128 m = total;
    u128 lhs = n * n * n * n;
    const u128 rhs = u128{10000} * m * m * m * m;
    int k = 0;
    while (lhs < rhs) {
      lhs *= static_cast<unsigned>(p);
      ++k;
    }
    return k;
  }
  const long double ratio = static_cast<long double>(total) / static_cast<long double>(cells);
  const long double v = std::log(10000.0L * ratio * ratio * ratio * ratio) / std::log(static_cast<long double>(p));
  return std::max(0, static_cast<int>(std::ceil(v - 1e-12L)));
}

int drc_rounds(int p, double eps) {
  if (!(eps > 0)) throw InvalidArgument("eps must be positive");
  const double target = (4.0 / eps) * (4.0 / eps);
  int r = 0;
  for (double pr = 1; pr < target; pr *= p) ++r;
  return r;
}

namespace {

using u128 = unsigned __int128;

struct Slices {
  std::vector<Vec> xs;
  std::vector<Subspace> w;  // A_x ∩ V
  std::vector<int> codim;
};

Slices slices(const TransverseSet& a, const Subspace& U, const Subspace& V) {
  Slices s;
  s.xs = U.elements();
  s.w.reserve(s.xs.size());
  for (Vec x : s.xs) {
    s.w.push_back(intersect(a.column(x), V));
    s.codim.push_back(V.dim() - s.w.back().dim());
  }
  return s;
}

bool pair_regular(const Slices& s, std::size_t i, std::size_t j, int dimV, int d) {
  const int meet = s.w[i].dim() + s.w[j].dim() - sum_dim(s.w[i], s.w[j]);
  return dimV - meet == 2 * d;
}

RegularityCounts count_slices(const Slices& s, int dimV, int d) {
  RegularityCounts c;
  c.points = s.xs.size();
  c.pairs = c.points * c.points;
  for (int cx : s.codim)
    if (cx != d) ++c.exceptions_i;
  for (std::size_t i = 0; i < s.xs.size(); ++i)
    for (std::size_t j = 0; j < s.xs.size(); ++j)
      if (!pair_regular(s, i, j, dimV, d)) ++c.exceptions_ii;
  return c;
}

std::string describe_counts(const RegularityCounts& c) {
  std::ostringstream os;
  os << "(i) " << c.exceptions_i << "/" << c.points << ", (ii) " << c.exceptions_ii << "/" << c.pairs;
  return os.str();
}

// Slice sizes |A_{.y}| and |A_{x.}|.
struct Marginals {
  std::vector<std::uint64_t> row;
  std::vector<std::uint64_t> col;
};

Marginals marginals(const TransverseSet& a) {
  const FieldSpec G = a.G();
  const FieldSpec H = a.H();
  Marginals m{std::vector<std::uint64_t>(H.size(), 0), std::vector<std::uint64_t>(G.size(), 0)};
  for (std::uint64_t x = 0; x < G.size(); ++x) {
    const Subspace& c = a.column(Vec{x});
    m.col[x] = c.size();
    for (Vec y : c.elements()) ++m.row[y.code];
  }
  return m;
}

// A line (y0 or x0) whose slice is at least half the average and whose members
// mostly have slices of size at least delta^2/100 of the ambient.
template <typename Members>
std::optional<Vec> pick_line(std::uint64_t count, std::uint64_t other, std::uint64_t n_cells,
                             const std::vector<std::uint64_t>& line_size,
                             const std::vector<std::uint64_t>& cross_size, Members members,
                             std::uint64_t seed, std::uint64_t tag, int retries) {
  const u128 n2 = u128{n_cells} * n_cells;
  auto heavy = [&](std::uint64_t l) { return 2 * u128{line_size[l]} * other >= n_cells; };
  auto admissible = [&](std::uint64_t l) {
    if (!heavy(l)) return false;
    std::uint64_t good = 0;
    std::uint64_t total = 0;
    for (Vec m : members(l)) {
      ++total;
      if (u128{100} * cross_size[m.code] * count * count * other >= n2) ++good;
    }
    return 10 * good >= 9 * total;
  };
  if (admissible(0)) return Vec{0};
  std::vector<std::uint64_t> heavy_lines;
  for (std::uint64_t l = 0; l < line_size.size(); ++l)
    if (heavy(l)) heavy_lines.push_back(l);
  if (heavy_lines.empty()) return std::nullopt;
  Rng rng = Rng::derive(seed, tag);
  for (int t = 0; t < retries; ++t) {
    const std::uint64_t l = heavy_lines[rng.below(heavy_lines.size())];
    if (admissible(l)) return Vec{l};
  }
  for (std::uint64_t l : heavy_lines)
    if (admissible(l)) return Vec{l};
  return std::nullopt;
}

}  // namespace

RegularityCounts regularity_counts(const TransverseSet& a, const Subspace& U, const Subspace& V, int d) {
  return count_slices(slices(a, U, V), V.dim(), d);
}

RegularityOutput regularize(const TransverseSet& a, const RegularizeConfig& cfg) {
  if (!(cfg.eps > 0) || cfg.eps >= 1) throw InvalidArgument("eps must lie in (0, 1)");
  const FieldSpec G = a.G();
  const FieldSpec H = a.H();
  const int p = G.p();

  RegularityOutput out;
  out.eps_target = cfg.eps;
  out.cells = a.count();
  out.total = G.size() * H.size();
  out.d0_formula = d0_bound(p, out.cells, out.total);

  const Marginals m = marginals(a);
  // Condition for members: 100 |A_x.| |G|^2 |H| >= |A|^2, written as size * count^2 * other.
  const auto y0 = pick_line(
      G.size(), H.size(), out.cells, m.row, m.col, [&](std::uint64_t y) { return a.row(Vec{y}).elements(); },
      cfg.seed, kTagRegularizeRow, cfg.retry_budget);
  const auto x0 = pick_line(
      H.size(), G.size(), out.cells, m.col, m.row, [&](std::uint64_t x) { return a.column(Vec{x}).elements(); },
      cfg.seed, kTagRegularizeCol, cfg.retry_budget);
  if (!y0 || !x0) throw BudgetExceeded("no admissible starting row or column", "y0/x0 selection");
  out.y0 = *y0;
  out.x0 = *x0;

  Subspace U = a.row(out.y0);
  Subspace V = a.column(out.x0);
  int d = 0;
  {
    const Slices s0 = slices(a, U, V);
    for (int c : s0.codim) d = std::max(d, c);
  }
  out.d0 = d;
  const int r = drc_rounds(p, cfg.eps);

  for (int iter = 0;; ++iter) {
    if (iter > out.d0 + 1) throw BudgetExceeded("iteration bound exceeded", describe_counts(out.certified));
    const Slices s = slices(a, U, V);
    RegularityCounts counts;
    counts.points = s.xs.size();
    counts.pairs = counts.points * counts.points;
    for (int cx : s.codim)
      if (cx != d) ++counts.exceptions_i;
    const bool ok_i = static_cast<double>(counts.exceptions_i) <= cfg.eps * static_cast<double>(counts.points);
    const bool forced = cfg.max_d >= 0 && d > cfg.max_d;
    std::ostringstream note;
    note << "i=" << iter << " d=" << d << " codimU=" << U.codim() << " codimV=" << V.codim();

    Subspace next_V = V;
    if (ok_i && !forced) {
      counts = count_slices(s, V.dim(), d);
      note << " " << describe_counts(counts);
      if (static_cast<double>(counts.exceptions_ii) <= 3 * cfg.eps * static_cast<double>(counts.pairs)) {
        out.U = U;
        out.V = V;
        out.d = d;
        out.certified = counts;
        out.iterations = iter;
        note << " accepted";
        out.trace.push_back(note.str());
        return out;
      }
      // Property (ii) fails: restrict V to the slice of the most irregular regular point.
      std::optional<std::size_t> best;
      std::uint64_t best_count = 0;
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        if (s.codim[i] != d) continue;
        std::uint64_t irregular = 0;
        for (std::size_t j = 0; j < s.xs.size(); ++j)
          if (!pair_regular(s, i, j, V.dim(), d)) ++irregular;
        if (!best || irregular > best_count || (irregular == best_count && s.xs[i] < s.xs[*best])) {
          best = i;
          best_count = irregular;
        }
      }
      if (best) {
        next_V = s.w[*best];
        note << " branch II a=" << s.xs[*best].code;
      } else {
        note << " branch I";
      }
    } else {
      note << " (i) " << counts.exceptions_i << "/" << counts.points << (forced ? " forced" : "") << " branch I";
    }
    if (d == 0) throw BudgetExceeded("no regular pair at d = 0", note.str());

    // Dependent random choice: U' = {x ∈ U : S ⊆ A_x} for a subspace S of V'.
    const int t = d - 1;
    std::vector<int> codim_next(s.xs.size());
    for (std::size_t i = 0; i < s.xs.size(); ++i)
      codim_next[i] = next_V.dim() - intersect(a.column(s.xs[i]), next_V).dim();
    struct Candidate {
      std::vector<Vec> members;
      bool acceptable = false;
    };
    auto evaluate = [&](const Subspace& S) {
      Candidate c;
      std::uint64_t good = 0;
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        if (!a.column(s.xs[i]).contains(S)) continue;
        c.members.push_back(s.xs[i]);
        if (codim_next[i] <= t) ++good;
      }
      c.acceptable = static_cast<double>(good) >= (1.0 - cfg.eps / 2) * static_cast<double>(c.members.size());
      return c;
    };

    std::optional<Candidate> chosen;
    if (cfg.mode == SearchMode::Sampled) {
      for (int attempt = 0; attempt < cfg.retry_budget && !chosen; ++attempt) {
        Rng rng = Rng::derive(cfg.seed, kTagDependentChoice,
                              (static_cast<std::uint64_t>(iter) << 32) | static_cast<std::uint64_t>(attempt));
        std::vector<Vec> ys;
        for (int j = 0; j < r; ++j) ys.push_back(next_V.element(rng.below(next_V.size())));
        Candidate c = evaluate(Subspace::span(H, ys));
        if (c.acceptable) {
          chosen = std::move(c);
          note << " sampled attempt " << attempt;
        }
      }
    }
    if (!chosen) {
      const FieldSpec coords(p, next_V.dim());
      const int top = std::min(r, next_V.dim());
      std::uint64_t space = 0;
      for (int k = 0; k <= top; ++k) {
        const std::uint64_t c = count_subspaces(coords, k);
        space = (c > cfg.exhaustive_cap || space + c > cfg.exhaustive_cap) ? cfg.exhaustive_cap + 1 : space + c;
      }
      if (space > cfg.exhaustive_cap)
        throw BudgetExceeded("dependent random choice found no witness within budget",
                             note.str() + "; exhaustive space exceeds cap");
      for (int k = 0; k <= top; ++k) {
        for_each_subspace(coords, k, [&](const Subspace& sc) {
          std::vector<Vec> lifted;
          for (Vec b : sc.basis()) lifted.push_back(next_V.element(b.code));
          Candidate c = evaluate(Subspace::span(H, lifted));
          if (c.acceptable && (!chosen || c.members.size() > chosen->members.size())) chosen = std::move(c);
          return true;
        });
      }
      if (!chosen)
        throw BudgetExceeded("dependent random choice found no witness", note.str() + "; exhaustive search empty");
      note << " exhaustive";
    }
    out.trace.push_back(note.str());
    U = Subspace::span(G, chosen->members);
    V = next_V;
    d = t;
  }
}

}  // namespace tvs
