#pragma once

#include <doctest.h>

#include <functional>
#include <initializer_list>
#include <vector>

#include "brute.hpp"
#include "tvs/gf_linalg.hpp"
#include "tvs/gridset.hpp"
#include "tvs/matrix.hpp"

namespace testutil {

inline tvs::Vec vec(int p, std::vector<int> digits) { return tvs::Vec{brute::code(p, digits)}; }

inline tvs::Subspace span(int p, int n, std::initializer_list<std::vector<int>> gens) {
  std::vector<tvs::Vec> vs;
  for (const auto& g : gens) vs.push_back(vec(p, g));
  return tvs::Subspace::span(tvs::FieldSpec(p, n), vs);
}

inline brute::Set as_set(const tvs::Subspace& s) {
  brute::Set out;
  for (tvs::Vec v : s.elements()) out.insert(v.code);
  return out;
}

inline tvs::GridSet grid_where(const tvs::Ambient2& a, const std::function<bool(brute::Code, brute::Code)>& in) {
  tvs::GridSet g(a);
  const auto gs = brute::ipow(a.p, a.nG);
  const auto hs = brute::ipow(a.p, a.nH);
  for (brute::Code x = 0; x < gs; ++x)
    for (brute::Code y = 0; y < hs; ++y)
      if (in(x, y)) g.set(tvs::Vec{x}, tvs::Vec{y});
  return g;
}

/// {(x, y) : x . y = 0} on F_p^n x F_p^n.
inline tvs::GridSet dot_zero_grid(int p, int n) {
  return grid_where({p, n, n}, [&](brute::Code x, brute::Code y) { return brute::dot(p, n, x, y) == 0; });
}

/// ({0} x H) ∪ (G x {0}).
inline tvs::GridSet axes_grid(int p, int nG, int nH) {
  return grid_where({p, nG, nH}, [](brute::Code x, brute::Code y) { return x == 0 || y == 0; });
}

inline tvs::Matrix matrix(int p, std::initializer_list<std::vector<int>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  tvs::Matrix m(p, r, c);
  int i = 0;
  for (const auto& row : rows) {
    for (int j = 0; j < c; ++j) m.set(i, j, row[static_cast<std::size_t>(j)]);
    ++i;
  }
  return m;
}

}  // namespace testutil
