#pragma once

/// @file cyc.hpp
/// Exact arithmetic in cyclotomic fields Q(zeta_N), in the power basis
/// 1, zeta, ..., zeta^{phi(N)-1} modulo the N-th cyclotomic polynomial, with
/// a common positive denominator. Values of different conductors are
/// promoted to the lcm before combining.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace heisweil::cyc {

using i64 = std::int64_t;

class CycScalar {
 public:
  CycScalar() : CycScalar(1) {}
  explicit CycScalar(int conductor);

  static CycScalar zero(int n) { return CycScalar(n); }
  static CycScalar rational(int n, i64 num, i64 den = 1);
  static CycScalar one(int n) { return rational(n, 1); }
  /// zeta_N^k
  static CycScalar zeta(int n, i64 k);
  /// sum_k counts[k] zeta_N^k, divided by den.
  static CycScalar from_counts(int n, const std::vector<i64>& counts, i64 den = 1);
  /// Rebuilds from stored coordinates (normalizes).
  static CycScalar from_coefficients(int n, std::vector<i64> num, i64 den);

  int conductor() const { return n_; }
  i64 denominator() const { return den_; }
  const std::vector<i64>& numerators() const { return num_; }

  CycScalar operator+(const CycScalar& o) const;
  CycScalar operator-(const CycScalar& o) const;
  CycScalar operator*(const CycScalar& o) const;
  CycScalar operator/(const CycScalar& o) const;
  CycScalar operator-() const;
  CycScalar& operator+=(const CycScalar& o) { return *this = *this + o; }
  CycScalar& operator-=(const CycScalar& o) { return *this = *this - o; }
  CycScalar& operator*=(const CycScalar& o) { return *this = *this * o; }
  /// Equality of field elements (across conductors).
  bool operator==(const CycScalar& o) const;

  bool is_zero() const;
  bool is_rational() const;
  /// (numerator, denominator) when rational.
  std::pair<i64, i64> rational_value() const;
  /// Complex conjugation zeta -> zeta^-1.
  CycScalar conj() const;
  /// zeta -> zeta^k for k coprime to the conductor.
  CycScalar galois(i64 k) const;
  /// Throws DomainError on zero.
  CycScalar inverse() const;
  /// Embeds into Q(zeta_m); requires conductor | m.
  CycScalar to_conductor(int m) const;
  /// The exponent k with *this == zeta_N^k, or -1.
  i64 root_of_unity_exponent() const;

  std::string to_string() const;

 private:
  void normalize();
  int n_;
  i64 den_ = 1;
  std::vector<i64> num_;
};

int euler_phi(int n);
/// Integer coefficients of the n-th cyclotomic polynomial, constant first.
const std::vector<i64>& cyclotomic_polynomial(int n);
/// Smallest conductor containing sqrt(r) for a positive rational r, and the
/// square root itself (positive real).
CycScalar sqrt_positive_rational(i64 num, i64 den);
/// Conductor needed for sqrt_positive_rational(num, den).
int sqrt_conductor(i64 num, i64 den);

class CycMatrix {
 public:
  CycMatrix() = default;
  CycMatrix(std::size_t rows, std::size_t cols, int conductor);
  static CycMatrix identity(std::size_t n, int conductor);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const CycScalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  CycScalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  CycMatrix operator*(const CycMatrix& o) const;
  CycMatrix operator+(const CycMatrix& o) const;
  CycMatrix operator-(const CycMatrix& o) const;
  CycMatrix scaled(const CycScalar& s) const;
  bool operator==(const CycMatrix& o) const;

  CycMatrix conj() const;
  CycMatrix transpose() const;
  /// Conjugate transpose.
  CycMatrix adjoint() const;
  CycScalar trace() const;
  bool is_zero() const;
  /// Returns the scalar when the matrix is c * I.
  bool is_scalar(CycScalar* value = nullptr) const;
  /// Throws DomainError when singular.
  CycMatrix inverse() const;
  std::size_t rank() const;
  /// Basis of {x : A x = 0}, as column vectors.
  std::vector<std::vector<CycScalar>> kernel() const;
  /// First nonzero entry in row-major order, or nullptr.
  const CycScalar* first_nonzero() const;
  int max_conductor() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<CycScalar> data_;
};

/// Reduced row echelon form in place, pivoting only in the first `cols`
/// columns but applying row operations to the full rows; returns pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<CycScalar>>& rows, std::size_t cols);

}  // namespace heisweil::cyc
