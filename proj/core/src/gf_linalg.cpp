#include "tvs/gf_linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "tvs/matrix.hpp"
#include "tvs/rng.hpp"

namespace tvs {

namespace {

constexpr std::uint64_t kEncodingLimit = std::uint64_t{1} << 62;

struct PrimeTables {
  std::array<std::array<std::uint64_t, 64>, kMaxPrime + 1> pow{};
  std::array<std::array<std::uint8_t, kMaxPrime>, kMaxPrime + 1> inv{};

  PrimeTables() {
    for (int p = 2; p <= kMaxPrime; ++p) {
      if (!is_prime(p)) continue;
      std::uint64_t v = 1;
      for (int i = 0; i < 64; ++i) {
        pow[p][i] = v;
        if (v > kEncodingLimit / static_cast<std::uint64_t>(p)) {
          v = kEncodingLimit + 1;  // sentinel: beyond the encodable range
        } else {
          v *= static_cast<std::uint64_t>(p);
        }
      }
      for (int a = 1; a < p; ++a)
        for (int b = 1; b < p; ++b)
          if (a * b % p == 1) inv[p][a] = static_cast<std::uint8_t>(b);
    }
  }
};

const PrimeTables& tables() {
  static const PrimeTables t;
  return t;
}

}  // namespace

bool is_prime(int p) noexcept {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

FieldSpec::FieldSpec(int p, int n) : p_(p), n_(n) {
  if (p < 2 || p > kMaxPrime || !is_prime(p))
    throw InvalidArgument("field characteristic must be a prime <= 17, got " + std::to_string(p));
  if (n < 0 || n >= 63)
    throw InvalidArgument("dimension out of range: " + std::to_string(n));
  const auto& t = tables();
  pow_ = t.pow[p].data();
  inv_ = t.inv[p].data();
  if (pow_[n] > kEncodingLimit)
    throw InvalidArgument("F_" + std::to_string(p) + "^" + std::to_string(n) +
                          " does not fit the 62-bit vector encoding");
}

Vec FieldSpec::add(Vec a, Vec b) const noexcept {
  if (p_ == 2) return Vec{a.code ^ b.code};
  const auto p = static_cast<std::uint64_t>(p_);
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i) {
    const std::uint64_t s = (a.code % p + b.code % p) % p;
    out += s * pow_[i];
    a.code /= p;
    b.code /= p;
  }
  return Vec{out};
}

Vec FieldSpec::sub(Vec a, Vec b) const noexcept {
  if (p_ == 2) return Vec{a.code ^ b.code};
  const auto p = static_cast<std::uint64_t>(p_);
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i) {
    const std::uint64_t s = (a.code % p + p - b.code % p) % p;
    out += s * pow_[i];
    a.code /= p;
    b.code /= p;
  }
  return Vec{out};
}

Vec FieldSpec::neg(Vec a) const noexcept {
  if (p_ == 2) return a;
  return sub(Vec{0}, a);
}

Vec FieldSpec::scale(int c, Vec a) const noexcept {
  c = mod(c);
  if (c == 0) return Vec{0};
  if (c == 1) return a;
  const auto p = static_cast<std::uint64_t>(p_);
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i) {
    out += (a.code % p) * static_cast<std::uint64_t>(c) % p * pow_[i];
    a.code /= p;
  }
  return Vec{out};
}

Vec FieldSpec::axpy(int c, Vec x, Vec y) const noexcept {
  c = mod(c);
  if (c == 0) return y;
  if (p_ == 2) return Vec{x.code ^ y.code};
  const auto p = static_cast<std::uint64_t>(p_);
  const auto cc = static_cast<std::uint64_t>(c);
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i) {
    out += ((x.code % p) * cc + y.code % p) % p * pow_[i];
    x.code /= p;
    y.code /= p;
  }
  return Vec{out};
}

int FieldSpec::dot(Vec a, Vec b) const noexcept {
  if (p_ == 2) return std::popcount(a.code & b.code) & 1;
  const auto p = static_cast<std::uint64_t>(p_);
  std::uint64_t acc = 0;
  for (int i = 0; i < n_; ++i) {
    acc += (a.code % p) * (b.code % p);
    a.code /= p;
    b.code /= p;
  }
  return static_cast<int>(acc % p);
}

int FieldSpec::leading(Vec v) const noexcept {
  if (v.code == 0) return -1;
  if (p_ == 2) return std::countr_zero(v.code);
  const auto p = static_cast<std::uint64_t>(p_);
  int i = 0;
  while (v.code % p == 0) {
    v.code /= p;
    ++i;
  }
  return i;
}

Vec FieldSpec::from_digits(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != n_)
    throw DimensionMismatch("expected " + std::to_string(n_) + " coordinates, got " +
                            std::to_string(digits.size()));
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i) out += static_cast<std::uint64_t>(mod(digits[i])) * pow_[i];
  return Vec{out};
}

std::vector<int> FieldSpec::digits(Vec v) const {
  std::vector<int> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = digit(v, i);
  return out;
}

// --- Echelon ---------------------------------------------------------------

Vec Echelon::reduce(Vec v) const noexcept {
  // Row k is zero at the pivots of rows 0..k-1, so one pass in insertion
  // order clears every pivot coordinate of v.
  if (field_.p() == 2) {
    for (int k = 0; k < count_; ++k)
      if ((v.code >> pivots_[k]) & 1U) v.code ^= rows_[k];
    return v;
  }
  for (int k = 0; k < count_; ++k) {
    const int c = field_.digit(v, pivots_[k]);
    if (c != 0) v = field_.axpy(field_.p() - c, Vec{rows_[k]}, v);
  }
  return v;
}

bool Echelon::insert(Vec v) noexcept {
  v = reduce(v);
  if (v.code == 0) return false;
  const int lead = field_.leading(v);
  if (field_.p() != 2) v = field_.scale(field_.inv(field_.digit(v, lead)), v);
  rows_[count_] = v.code;
  pivots_[count_] = static_cast<std::int8_t>(lead);
  ++count_;
  return true;
}

Subspace Echelon::canonical() const {
  std::vector<int> order(count_);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pivots_[a] < pivots_[b]; });
  std::vector<Vec> rows;
  std::vector<int> piv;
  rows.reserve(count_);
  for (int k : order) {
    rows.push_back(Vec{rows_[k]});
    piv.push_back(pivots_[k]);
  }
  // Gauss-Jordan back substitution; leading entries are preserved because a
  // row is only subtracted from rows whose own pivot is smaller.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (i == j) continue;
      const int c = field_.digit(rows[j], piv[i]);
      if (c != 0) rows[j] = field_.axpy(field_.p() - c, rows[i], rows[j]);
    }
  }
  return Subspace::from_rref(field_, std::move(rows));
}

// --- Subspace --------------------------------------------------------------

Subspace Subspace::full(const FieldSpec& field) {
  std::vector<Vec> rows;
  for (int i = 0; i < field.n(); ++i) rows.push_back(field.unit(i));
  return from_rref(field, std::move(rows));
}

Subspace Subspace::span(const FieldSpec& field, std::span<const Vec> vectors) {
  Echelon e(field);
  for (Vec v : vectors) {
    if (!field.contains(v))
      throw DimensionMismatch("vector " + std::to_string(v.code) + " is not in F_" +
                              std::to_string(field.p()) + "^" + std::to_string(field.n()));
    e.insert(v);
    if (e.rank() == field.n()) break;
  }
  return e.canonical();
}

Subspace Subspace::from_rref(const FieldSpec& field, std::vector<Vec> rows) {
  Subspace s(field);
  s.basis_ = std::move(rows);
  return s;
}

std::vector<int> Subspace::pivots() const {
  std::vector<int> out;
  out.reserve(basis_.size());
  for (Vec v : basis_) out.push_back(field_.leading(v));
  return out;
}

bool Subspace::contains(Vec v) const {
  if (!field_.contains(v)) throw DimensionMismatch("vector outside the ambient space");
  for (Vec row : basis_) {
    const int c = field_.digit(v, field_.leading(row));
    if (c != 0) v = field_.axpy(field_.p() - c, row, v);
  }
  return v.code == 0;
}

bool Subspace::contains(const Subspace& other) const {
  if (!(other.field_ == field_)) throw DimensionMismatch("subspaces in different ambients");
  if (other.dim() > dim()) return false;
  return std::all_of(other.basis_.begin(), other.basis_.end(),
                     [&](Vec v) { return contains(v); });
}

Vec Subspace::element(std::uint64_t index) const noexcept {
  Vec out{0};
  const auto p = static_cast<std::uint64_t>(field_.p());
  for (Vec row : basis_) {
    const int c = static_cast<int>(index % p);
    index /= p;
    if (c != 0) out = field_.axpy(c, row, out);
  }
  return out;
}

std::vector<Vec> Subspace::elements(std::uint64_t cap) const {
  if (size() > cap)
    throw CapExceeded("subspace has " + std::to_string(size()) + " elements, cap is " +
                      std::to_string(cap));
  std::vector<Vec> out;
  out.reserve(size());
  for (std::uint64_t i = 0; i < size(); ++i) out.push_back(element(i));
  return out;
}

std::uint64_t Subspace::coordinate_index(Vec v) const noexcept {
  std::uint64_t idx = 0;
  std::uint64_t m = 1;
  for (Vec row : basis_) {
    idx += static_cast<std::uint64_t>(field_.digit(v, field_.leading(row))) * m;
    m *= static_cast<std::uint64_t>(field_.p());
  }
  return idx;
}

Echelon Subspace::echelon() const {
  Echelon e(field_);
  for (Vec v : basis_) e.insert(v);
  return e;
}

// --- lattice operations ----------------------------------------------------

namespace {

void require_same(const Subspace& u, const Subspace& w) {
  if (!(u.field() == w.field()))
    throw DimensionMismatch("subspaces live in different ambient spaces");
}

}  // namespace

Subspace sum(const Subspace& u, const Subspace& w) {
  require_same(u, w);
  Echelon e = u.echelon();
  for (Vec v : w.basis()) e.insert(v);
  return e.canonical();
}

int sum_dim(const Subspace& u, const Subspace& w) {
  require_same(u, w);
  Echelon e = u.echelon();
  for (Vec v : w.basis()) e.insert(v);
  return e.rank();
}

Subspace orth_complement(const Subspace& u) {
  const FieldSpec& f = u.field();
  const std::vector<int> piv = u.pivots();
  std::vector<bool> is_pivot(f.n(), false);
  for (int c : piv) is_pivot[c] = true;
  // One kernel vector per free column: 1 there, -row_i[free] at pivot_i.
  std::vector<Vec> kernel;
  for (int free = 0; free < f.n(); ++free) {
    if (is_pivot[free]) continue;
    Vec w = f.unit(free);
    for (std::size_t i = 0; i < piv.size(); ++i) {
      const int c = f.digit(u.basis()[i], free);
      if (c != 0) w = f.axpy(f.p() - c, f.unit(piv[i]), w);
    }
    kernel.push_back(w);
  }
  return Subspace::span(f, kernel);
}

Subspace intersect(const Subspace& u, const Subspace& w) {
  require_same(u, w);
  return orth_complement(sum(orth_complement(u), orth_complement(w)));
}

Subspace intersect_direct(const Subspace& u, const Subspace& w) {
  require_same(u, w);
  const FieldSpec& f = u.field();
  const int n = f.n();
  // Rows (u | u) and (w | 0); after elimination the rows with a zero left
  // half carry a basis of the intersection in their right half.
  Matrix m(f.p(), u.dim() + w.dim(), 2 * n);
  int r = 0;
  for (Vec v : u.basis()) {
    for (int j = 0; j < n; ++j) {
      m.set(r, j, f.digit(v, j));
      m.set(r, n + j, f.digit(v, j));
    }
    ++r;
  }
  for (Vec v : w.basis()) {
    for (int j = 0; j < n; ++j) m.set(r, j, f.digit(v, j));
    ++r;
  }
  const Matrix::Rref red = m.rref();
  std::vector<Vec> out;
  for (int i = 0; i < red.rank; ++i) {
    if (red.pivots[i] < n) continue;
    std::vector<int> right(n);
    for (int j = 0; j < n; ++j) right[j] = red.reduced(i, n + j);
    out.push_back(f.from_digits(right));
  }
  return Subspace::span(f, out);
}

bool member(Vec v, const Subspace& u) { return u.contains(v); }

Subspace random_subspace(const FieldSpec& field, int dim, std::uint64_t seed) {
  if (dim < 0 || dim > field.n())
    throw InvalidArgument("requested dimension " + std::to_string(dim) + " exceeds n = " +
                          std::to_string(field.n()));
  // A uniformly random full-rank dim x n matrix spans a uniformly random
  // subspace, since every subspace has the same number of ordered bases.
  Rng rng(seed);
  for (;;) {
    Echelon e(field);
    for (int i = 0; i < dim; ++i) e.insert(Vec{rng.below(field.size())});
    if (e.rank() == dim) return e.canonical();
  }
}

std::uint64_t count_subspaces(const FieldSpec& field, int k) {
  const int n = field.n();
  if (k < 0 || k > n) return 0;
  // [n k]_p = prod_{i<k} (p^{n-i} - 1) / (p^{i+1} - 1), accumulated in long double
  // and then corrected; exact for every size we ever enumerate.
  long double acc = 1.0L;
  const long double p = field.p();
  for (int i = 0; i < k; ++i) acc *= (std::pow(p, n - i) - 1.0L) / (std::pow(p, i + 1) - 1.0L);
  if (acc >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
    return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(acc + 0.5L);
}

void for_each_subspace(const FieldSpec& field, int k,
                       const std::function<bool(const Subspace&)>& visit) {
  const int n = field.n();
  if (k < 0 || k > n) return;
  const int p = field.p();
  // Enumerate RREF matrices: pivot columns c_0 < ... < c_{k-1}, and free
  // entries at non-pivot columns to the right of each row's pivot.
  std::vector<int> piv(k);
  std::iota(piv.begin(), piv.end(), 0);
  for (;;) {
    std::vector<bool> is_pivot(n, false);
    for (int c : piv) is_pivot[c] = true;
    std::vector<std::pair<int, int>> slots;  // (row, column)
    for (int i = 0; i < k; ++i)
      for (int c = piv[i] + 1; c < n; ++c)
        if (!is_pivot[c]) slots.emplace_back(i, c);
    std::vector<int> fill(slots.size(), 0);
    for (;;) {
      std::vector<Vec> rows(k);
      for (int i = 0; i < k; ++i) rows[i] = field.unit(piv[i]);
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (fill[s] != 0)
          rows[slots[s].first] = field.axpy(fill[s], field.unit(slots[s].second),
                                            rows[slots[s].first]);
      if (!visit(Subspace::from_rref(field, std::move(rows)))) return;
      std::size_t s = 0;
      while (s < fill.size() && ++fill[s] == p) fill[s++] = 0;
      if (s == fill.size()) break;
    }
    // Next pivot combination.
    int i = k - 1;
    while (i >= 0 && piv[i] == n - k + i) --i;
    if (i < 0) return;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

std::vector<Subspace> all_subspaces(const FieldSpec& field, std::uint64_t cap) {
  std::uint64_t total = 0;
  for (int k = 0; k <= field.n(); ++k) {
    const std::uint64_t c = count_subspaces(field, k);
    total = (c > cap || total + c > cap) ? cap + 1 : total + c;
  }
  if (total > cap)
    throw CapExceeded("F_" + std::to_string(field.p()) + "^" + std::to_string(field.n()) +
                      " has more than " + std::to_string(cap) + " subspaces");
  std::vector<Subspace> out;
  out.reserve(total);
  for (int k = 0; k <= field.n(); ++k)
    for_each_subspace(field, k, [&](const Subspace& s) {
      out.push_back(s);
      return true;
    });
  return out;
}

std::string to_string(const FieldSpec& field, Vec v) {
  std::string s = "(";
  for (int i = 0; i < field.n(); ++i) {
    if (i) s += ',';
    s += std::to_string(field.digit(v, i));
  }
  return s + ")";
}

}  // namespace tvs
