#include "heisweil/gf.hpp"

#include <algorithm>
#include <sstream>

#include "heisweil/errors.hpp"

namespace heisweil::gf {

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

u32 add_mod(u32 a, u32 b, u32 p) {
  u32 s = a + b;
  return s >= p ? s - p : s;
}

u32 sub_mod(u32 a, u32 b, u32 p) { return a >= b ? a - b : a + p - b; }

u32 mul_mod(u32 a, u32 b, u32 p) {
  return static_cast<u32>((static_cast<u64>(a) * b) % p);
}

u32 neg_mod(u32 a, u32 p) { return a == 0 ? 0 : p - a; }

u32 inv_mod(u32 a, u32 p) {
  a %= p;
  if (a == 0) throw DomainError("inversion of zero in F_" + std::to_string(p));
  std::int64_t t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    std::int64_t q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  return reduce_mod(t, p);
}

u32 pow_mod(u32 a, u64 e, u32 p) {
  u64 result = 1 % p;
  u64 base = a % p;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<u32>(result);
}

u32 reduce_mod(std::int64_t a, u32 p) {
  std::int64_t r = a % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  return static_cast<u32>(r);
}

void validate_prime(u32 p) {
  if (p < 2 || p > kMaxModulus || !is_prime(p))
    throw DomainError("modulus " + std::to_string(p) + " is not a supported prime");
}

// ---------------------------------------------------------------- FpScalar

FpScalar::FpScalar(u32 modulus, std::int64_t v) : p(modulus), value(reduce_mod(v, modulus)) {}

namespace {
void same_field(const FpScalar& a, const FpScalar& b) {
  if (a.p != b.p) throw DomainError("F_p operands with different moduli");
}
}  // namespace

FpScalar FpScalar::operator+(const FpScalar& o) const {
  same_field(*this, o);
  return {p, add_mod(value, o.value, p)};
}
FpScalar FpScalar::operator-(const FpScalar& o) const {
  same_field(*this, o);
  return {p, sub_mod(value, o.value, p)};
}
FpScalar FpScalar::operator*(const FpScalar& o) const {
  same_field(*this, o);
  return {p, mul_mod(value, o.value, p)};
}
FpScalar FpScalar::operator/(const FpScalar& o) const { return *this * o.inv(); }
FpScalar FpScalar::operator-() const { return {p, neg_mod(value, p)}; }
FpScalar FpScalar::inv() const { return {p, inv_mod(value, p)}; }
FpScalar FpScalar::pow(u64 e) const { return {p, pow_mod(value, e, p)}; }

// ----------------------------------------------------------------- FqField

namespace {

using Poly = std::vector<u32>;  // low degree first

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_rem(Poly a, const Poly& b, u32 p) {
  trim(a);
  const u32 lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const u32 coef = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = sub_mod(a[shift + i], mul_mod(coef, b[i], p), p);
    trim(a);
  }
  return a;
}

Poly poly_from_code(u64 code, unsigned degree, u32 p, bool monic) {
  Poly f(degree + (monic ? 1 : 0), 0);
  for (unsigned i = 0; i < degree; ++i) {
    f[i] = static_cast<u32>(code % p);
    code /= p;
  }
  if (monic) f[degree] = 1;
  return f;
}

bool is_irreducible(const Poly& f, u32 p) {
  const unsigned m = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; d <= m / 2; ++d) {
    const u64 count = ipow(p, d);
    for (u64 code = 0; code < count; ++code) {
      Poly g = poly_from_code(code, d, p, true);
      if (poly_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

std::shared_ptr<const FqField> FqField::make(u32 p, unsigned m) {
  return std::shared_ptr<const FqField>(new FqField(p, m));
}

FqField::FqField(u32 p, unsigned m) : p_(p), m_(m) {
  validate_prime(p);
  if (m == 0) throw DomainError("extension degree must be positive");
  const u64 q = ipow(p, m);
  if (q > kMaxModulus) throw DomainError("field order exceeds 2^16");
  q_ = static_cast<u32>(q);

  if (m == 1) {
    modulus_ = {0, 1};
  } else {
    const u64 count = ipow(p, m);
    for (u64 code = 0; code < count; ++code) {
      Poly f = poly_from_code(code, m, p, true);
      if (is_irreducible(f, p)) {
        modulus_ = f;
        break;
      }
    }
  }

  // Primitive element by search, using slow multiplication.
  const std::vector<u64> divs = prime_divisors(q_ - 1);
  auto slow_pow = [&](u32 a, u64 e) {
    u32 r = 1, b = a;
    while (e > 0) {
      if (e & 1) r = poly_mul(r, b);
      b = poly_mul(b, b);
      e >>= 1;
    }
    return r;
  };
  u32 g = 0;
  for (u32 cand = 1; cand < q_; ++cand) {
    bool primitive = true;
    for (u64 r : divs)
      if (slow_pow(cand, (q_ - 1) / r) == 1) {
        primitive = false;
        break;
      }
    if (primitive || q_ == 2) {
      g = cand;
      break;
    }
  }
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  u32 cur = 1;
  for (u32 k = 0; k + 1 < q_; ++k) {
    exp_[k] = cur;
    log_[cur] = k;
    cur = poly_mul(cur, g);
  }
}

u32 FqField::poly_mul(u32 a, u32 b) const {
  if (m_ == 1) return mul_mod(a, b, p_);
  std::vector<u32> ca = coeffs(a), cb = coeffs(b);
  std::vector<u32> prod(2 * m_ - 1, 0);
  for (unsigned i = 0; i < m_; ++i)
    for (unsigned j = 0; j < m_; ++j)
      prod[i + j] = add_mod(prod[i + j], mul_mod(ca[i], cb[j], p_), p_);
  for (unsigned k = 2 * m_ - 2; k >= m_; --k) {
    const u32 c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (unsigned i = 0; i < m_; ++i)
      prod[k - m_ + i] = sub_mod(prod[k - m_ + i], mul_mod(c, modulus_[i], p_), p_);
  }
  prod.resize(m_);
  return from_coeffs(prod);
}

std::vector<u32> FqField::coeffs(u32 a) const {
  std::vector<u32> c(m_);
  for (unsigned i = 0; i < m_; ++i) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

u32 FqField::from_coeffs(const std::vector<u32>& c) const {
  u32 r = 0;
  for (unsigned i = m_; i-- > 0;) r = r * p_ + (i < c.size() ? c[i] % p_ : 0);
  return r;
}

u32 FqField::add(u32 a, u32 b) const {
  if (m_ == 1) return add_mod(a, b, p_);
  u32 r = 0, mult = 1;
  for (unsigned i = 0; i < m_; ++i) {
    r += add_mod(a % p_, b % p_, p_) * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return r;
}

u32 FqField::neg(u32 a) const {
  u32 r = 0, mult = 1;
  for (unsigned i = 0; i < m_; ++i) {
    r += neg_mod(a % p_, p_) * mult;
    a /= p_;
    mult *= p_;
  }
  return r;
}

u32 FqField::sub(u32 a, u32 b) const { return add(a, neg(b)); }

u32 FqField::mul(u32 a, u32 b) const {
  if (a == 0 || b == 0) return 0;
  u64 k = static_cast<u64>(log_[a]) + log_[b];
  return exp_[k % (q_ - 1)];
}

u32 FqField::inv(u32 a) const {
  if (a == 0) throw DomainError("inversion of zero in F_" + std::to_string(q_));
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

u32 FqField::pow(u32 a, u64 e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[(static_cast<u64>(log_[a]) * (e % (q_ - 1))) % (q_ - 1)];
}

u32 FqField::frobenius(u32 a, unsigned times) const {
  for (unsigned i = 0; i < times; ++i) a = pow(a, p_);
  return a;
}

bool FqField::in_subfield(u32 a, unsigned e) const {
  if (e == 0 || m_ % e != 0) throw DomainError("subfield degree must divide m");
  return frobenius(a, e) == a;
}

std::pair<u32, u32> FqField::relative_norm_trace(u32 a, unsigned from, unsigned to) const {
  if (to == 0 || from == 0 || m_ % from != 0 || from % to != 0)
    throw DomainError("norm/trace: subfield degrees must divide each other and m");
  if (!in_subfield(a, from)) throw DomainError("norm/trace: element not in the source subfield");
  u32 norm = 1, trace = 0, conj = a;
  for (unsigned i = 0; i < from / to; ++i) {
    norm = mul(norm, conj);
    trace = add(trace, conj);
    conj = frobenius(conj, to);
  }
  return {norm, trace};
}

// ---------------------------------------------------------------- FqScalar

namespace {
const FqField& common_field(const FqScalar& a, const FqScalar& b) {
  if (!a.field || !b.field || a.field->p() != b.field->p() || a.field->m() != b.field->m())
    throw DomainError("F_q operands from different fields");
  return *a.field;
}
}  // namespace

FqScalar FqScalar::operator+(const FqScalar& o) const {
  return {field, common_field(*this, o).add(value, o.value)};
}
FqScalar FqScalar::operator-(const FqScalar& o) const {
  return {field, common_field(*this, o).sub(value, o.value)};
}
FqScalar FqScalar::operator*(const FqScalar& o) const {
  return {field, common_field(*this, o).mul(value, o.value)};
}
FqScalar FqScalar::operator/(const FqScalar& o) const { return *this * o.inv(); }
FqScalar FqScalar::inv() const { return {field, field->inv(value)}; }
FqScalar FqScalar::pow(u64 e) const { return {field, field->pow(value, e)}; }
bool FqScalar::operator==(const FqScalar& o) const {
  return field && o.field && field->p() == o.field->p() && field->m() == o.field->m() &&
         value == o.value;
}

// ----------------------------------------------------------------- vectors

u64 space_size(u32 p, unsigned dim, u64 limit) {
  u64 n = 1;
  for (unsigned i = 0; i < dim; ++i) {
    n *= p;
    if (n > limit)
      throw ResourceError("vector space F_" + std::to_string(p) + "^" + std::to_string(dim) +
                          " exceeds the enumeration bound");
  }
  return n;
}

u64 vector_index(const FpVector& v, u32 p) {
  u64 idx = 0;
  for (u32 x : v) idx = idx * p + x;
  return idx;
}

FpVector vector_at(u64 index, unsigned dim, u32 p) {
  FpVector v(dim);
  for (unsigned i = dim; i-- > 0;) {
    v[i] = static_cast<u32>(index % p);
    index /= p;
  }
  return v;
}

FpVector vadd(const FpVector& a, const FpVector& b, u32 p) {
  FpVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = add_mod(a[i], b[i], p);
  return r;
}

FpVector vsub(const FpVector& a, const FpVector& b, u32 p) {
  FpVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = sub_mod(a[i], b[i], p);
  return r;
}

FpVector vscale(const FpVector& a, u32 s, u32 p) {
  FpVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul_mod(a[i], s, p);
  return r;
}

bool is_zero(const FpVector& v) {
  return std::all_of(v.begin(), v.end(), [](u32 x) { return x == 0; });
}

// ---------------------------------------------------------------- FpMatrix

FpMatrix::FpMatrix(u32 p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FpMatrix::FpMatrix(u32 p, std::size_t rows, std::size_t cols, std::vector<u32> data)
    : p_(p), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw DomainError("matrix data size mismatch");
  for (u32& x : data_) x %= p;
}

FpMatrix FpMatrix::identity(u32 p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1 % p;
  return m;
}

FpMatrix FpMatrix::from_columns(u32 p, std::size_t rows, const std::vector<FpVector>& cols) {
  FpMatrix m(p, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw DomainError("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m.data_[i * cols.size() + j] = cols[j][i] % p;
  }
  return m;
}

void FpMatrix::set(std::size_t i, std::size_t j, std::int64_t v) {
  data_[i * cols_ + j] = reduce_mod(v, p_);
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
  if (cols_ != o.rows_ || p_ != o.p_) throw DomainError("matrix product dimension mismatch");
  FpMatrix r(p_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const u32 a = data_[i * cols_ + k];
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        r.data_[i * o.cols_ + j] =
            static_cast<u32>((r.data_[i * o.cols_ + j] + static_cast<u64>(a) * o.data_[k * o.cols_ + j]) % p_);
    }
  return r;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_) throw DomainError("matrix sum mismatch");
  FpMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = add_mod(data_[i], o.data_[i], p_);
  return r;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_) throw DomainError("matrix difference mismatch");
  FpMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = sub_mod(data_[i], o.data_[i], p_);
  return r;
}

FpVector FpMatrix::operator*(const FpVector& v) const {
  if (v.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
  FpVector r(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    u64 s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += static_cast<u64>(data_[i * cols_ + j]) * v[j];
    r[i] = static_cast<u32>(s % p_);
  }
  return r;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix r(p_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.data_[j * rows_ + i] = data_[i * cols_ + j];
  return r;
}

FpVector FpMatrix::column(std::size_t j) const {
  FpVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = data_[i * cols_ + j];
  return c;
}

Rref rref(const FpMatrix& a) {
  const u32 p = a.p();
  std::vector<u32> m = a.data();
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (m[i * cols + c] != 0) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[r * cols + j]);
    const u32 inv = inv_mod(m[r * cols + c], p);
    for (std::size_t j = 0; j < cols; ++j) m[r * cols + j] = mul_mod(m[r * cols + j], inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const u32 f = m[i * cols + c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        m[i * cols + j] = sub_mod(m[i * cols + j], mul_mod(f, m[r * cols + j], p), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return {FpMatrix(p, rows, cols, std::move(m)), pivots};
}

std::size_t FpMatrix::rank() const { return rref(*this).pivots.size(); }

FpMatrix FpMatrix::inverse() const {
  if (rows_ != cols_) throw DomainError("inverse of a non-square matrix");
  const std::size_t n = rows_;
  FpMatrix aug(p_, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.set(i, j, (*this)(i, j));
    aug.set(i, n + i, 1);
  }
  Rref r = rref(aug);
  if (r.pivots.size() < n || r.pivots[n - 1] != n - 1) throw DomainError("matrix is singular");
  FpMatrix inv(p_, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.set(i, j, r.reduced(i, n + j));
  return inv;
}

u32 FpMatrix::determinant() const {
  if (rows_ != cols_) throw DomainError("determinant of a non-square matrix");
  const std::size_t n = rows_;
  std::vector<u32> m = data_;
  u32 det = 1 % p_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (m[i * n + c] != 0) {
        piv = i;
        break;
      }
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[piv * n + j], m[c * n + j]);
      det = neg_mod(det, p_);
    }
    det = mul_mod(det, m[c * n + c], p_);
    const u32 inv = inv_mod(m[c * n + c], p_);
    for (std::size_t i = c + 1; i < n; ++i) {
      const u32 f = mul_mod(m[i * n + c], inv, p_);
      if (f == 0) continue;
      for (std::size_t j = c; j < n; ++j)
        m[i * n + j] = sub_mod(m[i * n + j], mul_mod(f, m[c * n + j], p_), p_);
    }
  }
  return det;
}

bool FpMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (data_[i * cols_ + j] != (i == j ? 1u % p_ : 0u)) return false;
  return true;
}

std::vector<FpVector> kernel_basis(const FpMatrix& a) {
  Rref r = rref(a);
  const u32 p = a.p();
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : r.pivots) is_pivot[c] = true;
  std::vector<FpVector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    FpVector v(a.cols(), 0);
    v[free] = 1 % p;
    for (std::size_t i = 0; i < r.pivots.size(); ++i)
      v[r.pivots[i]] = neg_mod(r.reduced(i, free), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

LinearSolution solve_linear(const FpMatrix& a, const FpVector& b) {
  if (b.size() != a.rows()) throw DomainError("solve_linear: dimension mismatch");
  const u32 p = a.p();
  FpMatrix aug(p, a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.set(i, j, a(i, j));
    aug.set(i, a.cols(), b[i]);
  }
  Rref r = rref(aug);
  LinearSolution out;
  out.kernel = kernel_basis(a);
  out.rank = a.cols() - out.kernel.size();
  const bool inconsistent = !r.pivots.empty() && r.pivots.back() == a.cols();
  if (!inconsistent) {
    FpVector x(a.cols(), 0);
    for (std::size_t i = 0; i < r.pivots.size(); ++i) x[r.pivots[i]] = r.reduced(i, a.cols());
    out.solution = std::move(x);
  }
  return out;
}

std::vector<FpVector> span_basis(const std::vector<FpVector>& vecs, u32 p, std::size_t dim) {
  FpMatrix m(p, vecs.size(), dim);
  for (std::size_t i = 0; i < vecs.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) m.set(i, j, vecs[i][j]);
  Rref r = rref(m);
  std::vector<FpVector> basis;
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    FpVector row(dim);
    for (std::size_t j = 0; j < dim; ++j) row[j] = r.reduced(i, j);
    basis.push_back(std::move(row));
  }
  return basis;
}

bool in_span(const std::vector<FpVector>& basis, const FpVector& v, u32 p) {
  std::vector<FpVector> ext = basis;
  ext.push_back(v);
  return span_basis(ext, p, v.size()).size() == span_basis(basis, p, v.size()).size();
}

std::string to_string(const FpMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace heisweil::gf
