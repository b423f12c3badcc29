#include "tvs/matrix.hpp"

#include <string>

namespace tvs {

namespace {

int inverse_mod(int a, int p) {
  for (int b = 1; b < p; ++b)
    if (a * b % p == 1) return b;
  return 0;
}

}  // namespace

Matrix::Matrix(int p, int rows, int cols)
    : p_(p), rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {
  if (!is_prime(p) || p > kMaxPrime) throw InvalidArgument("matrix over unsupported field");
  if (rows < 0 || cols < 0) throw InvalidArgument("negative matrix shape");
}

Matrix Matrix::identity(int p, int n) {
  Matrix m(p, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::from_columns(const FieldSpec& field, std::span<const Vec> columns) {
  Matrix m(field.p(), field.n(), static_cast<int>(columns.size()));
  for (int j = 0; j < m.cols_; ++j)
    for (int i = 0; i < m.rows_; ++i) m.set(i, j, field.digit(columns[j], i));
  return m;
}

void Matrix::set(int i, int j, int v) noexcept {
  int r = v % p_;
  if (r < 0) r += p_;
  a_[static_cast<std::size_t>(i) * cols_ + j] = static_cast<std::uint8_t>(r);
}

Vec Matrix::column(const FieldSpec& field, int j) const {
  if (field.n() != rows_ || field.p() != p_) throw DimensionMismatch("column field mismatch");
  std::uint64_t code = 0;
  for (int i = 0; i < rows_; ++i) code += static_cast<std::uint64_t>((*this)(i, j)) * field.power(i);
  return Vec{code};
}

std::vector<Vec> Matrix::columns(const FieldSpec& field) const {
  std::vector<Vec> out;
  out.reserve(cols_);
  for (int j = 0; j < cols_; ++j) out.push_back(column(field, j));
  return out;
}

std::vector<int> Matrix::apply(std::span<const int> v) const {
  if (static_cast<int>(v.size()) != cols_) throw DimensionMismatch("matrix-vector shape mismatch");
  std::vector<int> out(rows_, 0);
  for (int i = 0; i < rows_; ++i) {
    long long acc = 0;
    for (int j = 0; j < cols_; ++j) acc += static_cast<long long>((*this)(i, j)) * v[j];
    out[i] = static_cast<int>(acc % p_);
  }
  return out;
}

Vec Matrix::apply(const FieldSpec& domain, const FieldSpec& codomain, Vec v) const {
  if (domain.n() != cols_ || codomain.n() != rows_) throw DimensionMismatch("map shape mismatch");
  Vec out{0};
  for (int j = 0; j < cols_; ++j) {
    const int c = domain.digit(v, j);
    if (c != 0) out = codomain.axpy(c, column(codomain, j), out);
  }
  return out;
}

void Matrix::require_same_shape(const Matrix& o) const {
  if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_)
    throw DimensionMismatch("matrix shapes differ");
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (p_ != o.p_ || cols_ != o.rows_) throw DimensionMismatch("matrix product shape mismatch");
  Matrix out(p_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) {
      long long acc = 0;
      for (int k = 0; k < cols_; ++k) acc += static_cast<long long>((*this)(i, k)) * o(k, j);
      out.set(i, j, static_cast<int>(acc % p_));
    }
  return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
  require_same_shape(o);
  Matrix out = *this;
  for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = static_cast<std::uint8_t>((a_[k] + o.a_[k]) % p_);
  return out;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_same_shape(o);
  Matrix out = *this;
  for (std::size_t k = 0; k < a_.size(); ++k)
    out.a_[k] = static_cast<std::uint8_t>((a_[k] + p_ - o.a_[k]) % p_);
  return out;
}

Matrix Matrix::operator-() const { return scaled(p_ - 1); }

Matrix Matrix::scaled(int c) const {
  Matrix out = *this;
  c %= p_;
  if (c < 0) c += p_;
  for (auto& e : out.a_) e = static_cast<std::uint8_t>(e * c % p_);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(p_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, (*this)(i, j));
  return out;
}

bool Matrix::is_zero() const noexcept {
  for (auto e : a_)
    if (e != 0) return false;
  return true;
}

Matrix::Rref Matrix::rref() const {
  Rref out{*this, {}, 0};
  Matrix& m = out.reduced;
  int row = 0;
  for (int col = 0; col < cols_ && row < rows_; ++col) {
    int sel = -1;
    for (int i = row; i < rows_; ++i)
      if (m(i, col) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int j = 0; j < cols_; ++j) {
        const int t = m(row, j);
        m.set(row, j, m(sel, j));
        m.set(sel, j, t);
      }
    const int inv = inverse_mod(m(row, col), p_);
    for (int j = 0; j < cols_; ++j) m.set(row, j, m(row, j) * inv);
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const int c = m(i, col);
      if (c == 0) continue;
      for (int j = 0; j < cols_; ++j) m.set(i, j, m(i, j) - c * m(row, j));
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  return out;
}

std::vector<std::vector<int>> Matrix::nullspace() const {
  const Rref red = rref();
  std::vector<bool> is_pivot(cols_, false);
  for (int c : red.pivots) is_pivot[c] = true;
  std::vector<std::vector<int>> basis;
  for (int free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<int> v(cols_, 0);
    v[free] = 1;
    for (int i = 0; i < red.rank; ++i) v[red.pivots[i]] = (p_ - red.reduced(i, free)) % p_;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<int>> Matrix::solve(std::span<const int> b) const {
  if (static_cast<int>(b.size()) != rows_) throw DimensionMismatch("right-hand side length mismatch");
  Matrix aug(p_, rows_, cols_ + 1);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.set(i, j, (*this)(i, j));
    aug.set(i, cols_, b[i]);
  }
  const Rref red = aug.rref();
  std::vector<int> x(cols_, 0);
  for (int i = 0; i < red.rank; ++i) {
    if (red.pivots[i] == cols_) return std::nullopt;
    x[red.pivots[i]] = red.reduced(i, cols_);
  }
  return x;
}

}  // namespace tvs
