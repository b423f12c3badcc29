#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tvs/gf_linalg.hpp"

namespace tvs {

/// Dense matrix over F_p. A linear map F_p^d -> F_p^m is an m x d matrix whose
/// column j is the image of the j-th standard basis vector.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int p, int rows, int cols);

  static Matrix identity(int p, int n);
  /// Columns given as encoded vectors of `field`.
  static Matrix from_columns(const FieldSpec& field, std::span<const Vec> columns);

  int p() const noexcept { return p_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  int operator()(int i, int j) const noexcept { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  void set(int i, int j, int v) noexcept;

  Vec column(const FieldSpec& field, int j) const;
  std::vector<Vec> columns(const FieldSpec& field) const;
  /// Row-major entries; used as the flattened encoding of a map.
  std::span<const std::uint8_t> entries() const noexcept { return a_; }

  std::vector<int> apply(std::span<const int> v) const;
  Vec apply(const FieldSpec& domain, const FieldSpec& codomain, Vec v) const;

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(int c) const;
  Matrix transpose() const;
  bool is_zero() const noexcept;

  struct Rref;
  Rref rref() const;
  int rank() const;
  /// Basis of {v : M v = 0}.
  std::vector<std::vector<int>> nullspace() const;
  /// Some solution of M v = b, or nullopt when inconsistent.
  std::optional<std::vector<int>> solve(std::span<const int> b) const;

  friend bool operator==(const Matrix& x, const Matrix& y) noexcept {
    return x.p_ == y.p_ && x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

 private:
  void require_same_shape(const Matrix& o) const;

  int p_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> a_;
};

struct Matrix::Rref {
  Matrix reduced;
  std::vector<int> pivots;
  int rank = 0;
};

inline int Matrix::rank() const { return rref().rank; }

}  // namespace tvs
