#pragma once

// Naive reference implementations over F_p^n. Vectors are digit arrays or
// base-p codes; everything is done by exhaustive enumeration and closure so it
// shares no code path with the library.

#include <cstdint>
#include <set>
#include <vector>

namespace brute {

using Code = std::uint64_t;
using Set = std::set<Code>;

inline Code ipow(int p, int n) {
  Code r = 1;
  for (int i = 0; i < n; ++i) r *= static_cast<Code>(p);
  return r;
}

inline std::vector<int> digits(int p, int n, Code c) {
  std::vector<int> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    d[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<Code>(p));
    c /= static_cast<Code>(p);
  }
  return d;
}

inline Code code(int p, const std::vector<int>& d) {
  Code c = 0;
  for (std::size_t i = d.size(); i-- > 0;) c = c * static_cast<Code>(p) + static_cast<Code>(((d[i] % p) + p) % p);
  return c;
}

inline Code add(int p, int n, Code a, Code b, int cb = 1) {
  auto da = digits(p, n, a);
  const auto db = digits(p, n, b);
  for (int i = 0; i < n; ++i) da[static_cast<std::size_t>(i)] += cb * db[static_cast<std::size_t>(i)];
  return code(p, da);
}

inline int dot(int p, int n, Code a, Code b) {
  const auto da = digits(p, n, a);
  const auto db = digits(p, n, b);
  int s = 0;
  for (int i = 0; i < n; ++i) s += da[static_cast<std::size_t>(i)] * db[static_cast<std::size_t>(i)];
  return s % p;
}

/// Closure of {0} under adding scalar multiples of the generators.
inline Set span(int p, int n, const std::vector<Code>& gens) {
  Set s{0};
  bool grew = true;
  while (grew) {
    grew = false;
    const Set snapshot = s;
    for (Code x : snapshot)
      for (Code g : gens)
        for (int c = 1; c < p; ++c)
          if (s.insert(add(p, n, x, g, c)).second) grew = true;
  }
  return s;
}

inline bool is_subspace(int p, int n, const Set& s) {
  if (!s.count(0)) return false;
  for (Code a : s)
    for (Code b : s)
      for (int c = 1; c < p; ++c)
        if (!s.count(add(p, n, a, b, c))) return false;
  return true;
}

inline Set intersection(const Set& a, const Set& b) {
  Set out;
  for (Code x : a)
    if (b.count(x)) out.insert(x);
  return out;
}

inline Set orth(int p, int n, const Set& s) {
  Set out;
  for (Code v = 0; v < ipow(p, n); ++v) {
    bool ok = true;
    for (Code x : s)
      if (dot(p, n, v, x) != 0) {
        ok = false;
        break;
      }
    if (ok) out.insert(v);
  }
  return out;
}

inline int log_size(int p, std::size_t size) {
  int k = 0;
  std::size_t m = 1;
  while (m < size) {
    m *= static_cast<std::size_t>(p);
    ++k;
  }
  return k;
}

/// Value of x^T B y with B given row-major as nG x nH.
inline int form(int p, int nG, int nH, const std::vector<std::vector<int>>& b, Code x, Code y) {
  const auto dx = digits(p, nG, x);
  const auto dy = digits(p, nH, y);
  int s = 0;
  for (int i = 0; i < nG; ++i)
    for (int j = 0; j < nH; ++j)
      s += dx[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
           dy[static_cast<std::size_t>(j)];
  return s % p;
}

}  // namespace brute
