#pragma once

/// @file gf.hpp
/// Exact arithmetic over prime fields F_p and their extensions F_{p^m},
/// plus the F_p-linear algebra used by every other module.
///
/// Extension fields use a fixed defining polynomial per (p, m): the
/// lexicographically smallest monic irreducible polynomial, where
/// x^m + c_{m-1}x^{m-1} + ... + c_0 is ordered by the integer
/// c_0 + c_1 p + ... + c_{m-1} p^{m-1}. For example
///   F_4:  x^2 + x + 1      F_8:  x^3 + x + 1      F_16: x^4 + x + 1
///   F_9:  x^2 + 1          F_25: x^2 + 2          F_27: x^3 + 2x + 1
/// Elements of F_{p^m} are encoded as c_0 + c_1 p + ... in that basis.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace heisweil::gf {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

/// Largest modulus (and largest extension field order) supported.
inline constexpr u32 kMaxModulus = 1u << 16;

bool is_prime(u64 n);
/// Distinct prime divisors of n in increasing order.
std::vector<u64> prime_divisors(u64 n);
u64 ipow(u64 base, unsigned exp);

u32 add_mod(u32 a, u32 b, u32 p);
u32 sub_mod(u32 a, u32 b, u32 p);
u32 mul_mod(u32 a, u32 b, u32 p);
u32 neg_mod(u32 a, u32 p);
/// Throws DomainError when a == 0.
u32 inv_mod(u32 a, u32 p);
u32 pow_mod(u32 a, u64 e, u32 p);
/// Reduces any signed integer into [0, p).
u32 reduce_mod(std::int64_t a, u32 p);

/// Checks 2 <= p <= kMaxModulus and p prime; throws DomainError otherwise.
void validate_prime(u32 p);

struct FpScalar {
  u32 p = 2;
  u32 value = 0;

  FpScalar() = default;
  FpScalar(u32 modulus, std::int64_t v);

  FpScalar operator+(const FpScalar& o) const;
  FpScalar operator-(const FpScalar& o) const;
  FpScalar operator*(const FpScalar& o) const;
  FpScalar operator/(const FpScalar& o) const;
  FpScalar operator-() const;
  FpScalar inv() const;
  FpScalar pow(u64 e) const;
  bool operator==(const FpScalar& o) const = default;
};

/// The field F_{p^m} with log/exp tables.
class FqField {
 public:
  static std::shared_ptr<const FqField> make(u32 p, unsigned m);

  u32 p() const { return p_; }
  unsigned m() const { return m_; }
  u32 q() const { return q_; }
  /// Coefficients c_0..c_m of the monic defining polynomial.
  const std::vector<u32>& modulus() const { return modulus_; }
  u32 primitive_element() const { return exp_[1]; }

  u32 add(u32 a, u32 b) const;
  u32 sub(u32 a, u32 b) const;
  u32 neg(u32 a) const;
  u32 mul(u32 a, u32 b) const;
  u32 inv(u32 a) const;
  u32 pow(u32 a, u64 e) const;
  u32 frobenius(u32 a, unsigned times = 1) const;

  std::vector<u32> coeffs(u32 a) const;
  u32 from_coeffs(const std::vector<u32>& c) const;
  u32 from_prime_field(u32 c) const { return c % p_; }

  /// True iff a lies in the subfield of degree e (requires e | m).
  bool in_subfield(u32 a, unsigned e) const;

  /// Norm and trace from the degree-`from` subfield down to the degree-`to`
  /// subfield; `a` must lie in the degree-`from` subfield and to | from | m.
  std::pair<u32, u32> relative_norm_trace(u32 a, unsigned from, unsigned to) const;

  /// Norm and trace from F_{p^m} to its degree-d subfield.
  std::pair<u32, u32> norm_trace(u32 a, unsigned d) const {
    return relative_norm_trace(a, m_, d);
  }

 private:
  FqField(u32 p, unsigned m);
  u32 poly_mul(u32 a, u32 b) const;

  u32 p_;
  unsigned m_;
  u32 q_;
  std::vector<u32> modulus_;
  std::vector<u32> exp_;  // exp_[k] = g^k, size q-1
  std::vector<u32> log_;  // log_[a] for a != 0
};

struct FqScalar {
  std::shared_ptr<const FqField> field;
  u32 value = 0;

  FqScalar operator+(const FqScalar& o) const;
  FqScalar operator-(const FqScalar& o) const;
  FqScalar operator*(const FqScalar& o) const;
  FqScalar operator/(const FqScalar& o) const;
  FqScalar inv() const;
  FqScalar pow(u64 e) const;
  bool operator==(const FqScalar& o) const;
};

/// Vectors over F_p are plain residue arrays; the modulus travels with the
/// surrounding object.
using FpVector = std::vector<u32>;

/// Number of vectors in F_p^dim; throws ResourceError above `limit`.
u64 space_size(u32 p, unsigned dim, u64 limit = u64{1} << 26);
/// Encoding with v[0] most significant, so index order is lexicographic.
u64 vector_index(const FpVector& v, u32 p);
FpVector vector_at(u64 index, unsigned dim, u32 p);
FpVector vadd(const FpVector& a, const FpVector& b, u32 p);
FpVector vsub(const FpVector& a, const FpVector& b, u32 p);
FpVector vscale(const FpVector& a, u32 s, u32 p);
bool is_zero(const FpVector& v);

class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(u32 p, std::size_t rows, std::size_t cols);
  FpMatrix(u32 p, std::size_t rows, std::size_t cols, std::vector<u32> data);

  static FpMatrix identity(u32 p, std::size_t n);
  /// Matrix whose columns are the given vectors.
  static FpMatrix from_columns(u32 p, std::size_t rows, const std::vector<FpVector>& cols);

  u32 p() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<u32>& data() const { return data_; }

  u32 operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, std::int64_t v);

  FpMatrix operator*(const FpMatrix& o) const;
  FpMatrix operator+(const FpMatrix& o) const;
  FpMatrix operator-(const FpMatrix& o) const;
  FpVector operator*(const FpVector& v) const;
  bool operator==(const FpMatrix& o) const = default;

  FpMatrix transpose() const;
  FpVector column(std::size_t j) const;
  std::size_t rank() const;
  /// Throws DomainError when singular.
  FpMatrix inverse() const;
  u32 determinant() const;
  bool is_identity() const;

 private:
  u32 p_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<u32> data_;
};

/// Reduced row echelon form and pivot columns.
struct Rref {
  FpMatrix reduced;
  std::vector<std::size_t> pivots;
};
Rref rref(const FpMatrix& a);

struct LinearSolution {
  std::size_t rank = 0;
  std::optional<FpVector> solution;
  std::vector<FpVector> kernel;
};

/// Solves A x = b. An inconsistent system yields `solution == nullopt`.
LinearSolution solve_linear(const FpMatrix& a, const FpVector& b);

/// Basis of the null space {x : A x = 0}.
std::vector<FpVector> kernel_basis(const FpMatrix& a);

/// Reduced echelon basis of the span of the given vectors.
std::vector<FpVector> span_basis(const std::vector<FpVector>& vecs, u32 p, std::size_t dim);

/// True iff v lies in the span of `basis`.
bool in_span(const std::vector<FpVector>& basis, const FpVector& v, u32 p);

std::string to_string(const FpMatrix& m);

}  // namespace heisweil::gf
