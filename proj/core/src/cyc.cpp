#include "heisweil/cyc.hpp"

#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "heisweil/errors.hpp"
#include "heisweil/gf.hpp"

namespace heisweil::cyc {

namespace {

using i128 = __int128;

i64 narrow(i128 x) {
  if (x > static_cast<i128>(INT64_MAX) || x < -static_cast<i128>(INT64_MAX))
    throw ResourceError("cyclotomic arithmetic overflow");
  return static_cast<i64>(x);
}

i64 iabs(i64 x) { return x < 0 ? -x : x; }

struct Tables {
  int n = 1;
  int phi = 1;
  std::vector<i64> poly;                // Phi_n, constant first, monic
  std::vector<std::vector<i64>> red;    // red[k] = zeta^k in the power basis, k < n
};

std::vector<i64> poly_divide_monic(std::vector<i64> num, const std::vector<i64>& den) {
  const std::size_t dn = den.size() - 1;
  if (num.size() <= dn) return {0};
  std::vector<i64> q(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const i64 c = num[i];
    q[i - dn] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  return q;
}

const std::vector<i64>& cyclo_cached(int n) {
  thread_local std::map<int, std::vector<i64>> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  std::vector<i64> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) p = poly_divide_monic(p, cyclo_cached(d));
  return cache.emplace(n, std::move(p)).first->second;
}

const Tables& tables(int n) {
  thread_local std::map<int, std::unique_ptr<Tables>> cache;
  if (auto it = cache.find(n); it != cache.end()) return *it->second;
  auto t = std::make_unique<Tables>();
  t->n = n;
  t->poly = cyclo_cached(n);
  t->phi = static_cast<int>(t->poly.size()) - 1;
  const std::size_t phi = static_cast<std::size_t>(t->phi);
  t->red.assign(static_cast<std::size_t>(n), std::vector<i64>(phi, 0));
  std::vector<i64> cur(phi, 0);
  cur[0] = 1;
  for (int k = 0; k < n; ++k) {
    t->red[static_cast<std::size_t>(k)] = cur;
    // multiply by x
    const i64 top = cur[phi - 1];
    for (std::size_t j = phi - 1; j > 0; --j) cur[j] = cur[j - 1];
    cur[0] = 0;
    if (top != 0)
      for (std::size_t j = 0; j < phi; ++j) cur[j] -= top * t->poly[j];
  }
  return *cache.emplace(n, std::move(t)).first->second;
}

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

}  // namespace

int euler_phi(int n) { return tables(n).phi; }
const std::vector<i64>& cyclotomic_polynomial(int n) { return cyclo_cached(n); }

CycScalar::CycScalar(int conductor) : n_(conductor) {
  if (conductor < 1 || conductor > 4096) throw DomainError("CycScalar: unsupported conductor");
  num_.assign(static_cast<std::size_t>(tables(conductor).phi), 0);
}

void CycScalar::normalize() {
  if (den_ == 0) throw InvariantError("CycScalar: zero denominator");
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  i64 g = den_;
  for (i64 c : num_) g = std::gcd(g, iabs(c));
  if (g > 1) {
    den_ /= g;
    for (auto& c : num_) c /= g;
  }
  bool all_zero = true;
  for (i64 c : num_) all_zero = all_zero && c == 0;
  if (all_zero) den_ = 1;
}

CycScalar CycScalar::rational(int n, i64 num, i64 den) {
  CycScalar s(n);
  s.num_[0] = num;
  s.den_ = den;
  s.normalize();
  return s;
}

CycScalar CycScalar::zeta(int n, i64 k) {
  CycScalar s(n);
  const i64 kk = ((k % n) + n) % n;
  s.num_ = tables(n).red[static_cast<std::size_t>(kk)];
  return s;
}

CycScalar CycScalar::from_counts(int n, const std::vector<i64>& counts, i64 den) {
  CycScalar s(n);
  const Tables& t = tables(n);
  std::vector<i128> acc(static_cast<std::size_t>(t.phi), 0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const auto& r = t.red[k % static_cast<std::size_t>(n)];
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += static_cast<i128>(counts[k]) * r[j];
  }
  for (std::size_t j = 0; j < acc.size(); ++j) s.num_[j] = narrow(acc[j]);
  s.den_ = den;
  s.normalize();
  return s;
}

CycScalar CycScalar::from_coefficients(int n, std::vector<i64> num, i64 den) {
  CycScalar s(n);
  if (num.size() != s.num_.size()) throw DomainError("CycScalar: coefficient count does not match phi(N)");
  s.num_ = std::move(num);
  s.den_ = den;
  s.normalize();
  return s;
}

CycScalar CycScalar::to_conductor(int m) const {
  if (m == n_) return *this;
  if (m % n_ != 0) throw DomainError("CycScalar: target conductor is not a multiple");
  const Tables& t = tables(m);
  const int step = m / n_;
  CycScalar s(m);
  std::vector<i128> acc(static_cast<std::size_t>(t.phi), 0);
  for (std::size_t j = 0; j < num_.size(); ++j) {
    if (num_[j] == 0) continue;
    const auto& r = t.red[(j * static_cast<std::size_t>(step)) % static_cast<std::size_t>(m)];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += static_cast<i128>(num_[j]) * r[i];
  }
  for (std::size_t i = 0; i < acc.size(); ++i) s.num_[i] = narrow(acc[i]);
  s.den_ = den_;
  s.normalize();
  return s;
}

CycScalar CycScalar::operator+(const CycScalar& o) const {
  if (o.n_ != n_) {
    const int m = lcm_int(n_, o.n_);
    return to_conductor(m) + o.to_conductor(m);
  }
  CycScalar s(n_);
  for (std::size_t j = 0; j < num_.size(); ++j)
    s.num_[j] = narrow(static_cast<i128>(num_[j]) * o.den_ + static_cast<i128>(o.num_[j]) * den_);
  s.den_ = narrow(static_cast<i128>(den_) * o.den_);
  s.normalize();
  return s;
}

CycScalar CycScalar::operator-() const {
  CycScalar s = *this;
  for (auto& c : s.num_) c = -c;
  return s;
}

CycScalar CycScalar::operator-(const CycScalar& o) const { return *this + (-o); }

CycScalar CycScalar::operator*(const CycScalar& o) const {
  if (o.n_ != n_) {
    const int m = lcm_int(n_, o.n_);
    return to_conductor(m) * o.to_conductor(m);
  }
  const Tables& t = tables(n_);
  const std::size_t phi = num_.size();
  std::vector<i128> prod(2 * phi, 0);
  bool any = false;
  for (std::size_t i = 0; i < phi; ++i) {
    if (num_[i] == 0) continue;
    for (std::size_t j = 0; j < phi; ++j)
      if (o.num_[j] != 0) {
        prod[i + j] += static_cast<i128>(num_[i]) * o.num_[j];
        any = true;
      }
  }
  CycScalar s(n_);
  if (!any) return s;
  std::vector<i128> acc(phi, 0);
  for (std::size_t k = 0; k < prod.size(); ++k) {
    if (prod[k] == 0) continue;
    const auto& r = t.red[k % static_cast<std::size_t>(n_)];
    for (std::size_t j = 0; j < phi; ++j)
      if (r[j] != 0) acc[j] += prod[k] * r[j];
  }
  for (std::size_t j = 0; j < phi; ++j) s.num_[j] = narrow(acc[j]);
  s.den_ = narrow(static_cast<i128>(den_) * o.den_);
  s.normalize();
  return s;
}

CycScalar CycScalar::operator/(const CycScalar& o) const { return *this * o.inverse(); }

bool CycScalar::operator==(const CycScalar& o) const {
  if (o.n_ != n_) {
    const int m = lcm_int(n_, o.n_);
    return to_conductor(m) == o.to_conductor(m);
  }
  return den_ == o.den_ && num_ == o.num_;
}

bool CycScalar::is_zero() const {
  for (i64 c : num_)
    if (c != 0) return false;
  return true;
}

bool CycScalar::is_rational() const {
  for (std::size_t j = 1; j < num_.size(); ++j)
    if (num_[j] != 0) return false;
  return true;
}

std::pair<i64, i64> CycScalar::rational_value() const {
  if (!is_rational()) throw DomainError("CycScalar: value is not rational");
  return {num_[0], den_};
}

CycScalar CycScalar::galois(i64 k) const {
  const i64 kk = ((k % n_) + n_) % n_;
  if (std::gcd(kk, static_cast<i64>(n_)) != 1 && n_ > 1) throw DomainError("CycScalar: galois exponent not a unit");
  const Tables& t = tables(n_);
  CycScalar s(n_);
  std::vector<i128> acc(num_.size(), 0);
  for (std::size_t j = 0; j < num_.size(); ++j) {
    if (num_[j] == 0) continue;
    const auto& r = t.red[(j * static_cast<std::size_t>(kk)) % static_cast<std::size_t>(n_)];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += static_cast<i128>(num_[j]) * r[i];
  }
  for (std::size_t i = 0; i < acc.size(); ++i) s.num_[i] = narrow(acc[i]);
  s.den_ = den_;
  s.normalize();
  return s;
}

CycScalar CycScalar::conj() const { return galois(n_ - 1); }

CycScalar CycScalar::inverse() const {
  if (is_zero()) throw DomainError("CycScalar: inverse of zero");
  if (is_rational()) return rational(n_, den_, num_[0]);
  CycScalar prod = one(n_);
  for (i64 k = 2; k < n_; ++k)
    if (std::gcd(k, static_cast<i64>(n_)) == 1) prod = prod * galois(k);
  const CycScalar norm = *this * prod;
  check_invariant(norm.is_rational(), "CycScalar: norm is not rational");
  const auto [a, b] = norm.rational_value();
  return prod * rational(n_, b, a);
}

i64 CycScalar::root_of_unity_exponent() const {
  if (den_ != 1) return -1;
  for (i64 k = 0; k < n_; ++k)
    if (num_ == tables(n_).red[static_cast<std::size_t>(k)]) return k;
  return -1;
}

std::string CycScalar::to_string() const {
  std::ostringstream os;
  bool first = true;
  os << "(";
  for (std::size_t j = 0; j < num_.size(); ++j) {
    if (num_[j] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << num_[j];
    if (j == 1) os << "*z";
    if (j > 1) os << "*z^" << j;
  }
  if (first) os << "0";
  os << ")";
  if (den_ != 1) os << "/" << den_;
  os << " [z=zeta_" << n_ << "]";
  return os.str();
}

namespace {

// Squarefree part of n and the integer square root of n / squarefree.
std::pair<i64, i64> squarefree_split(i64 n) {
  i64 sq = 1, free = 1;
  for (i64 d = 2; d * d <= n; ++d) {
    while (n % (d * d) == 0) {
      n /= d * d;
      sq *= d;
    }
    if (n % d == 0) {
      n /= d;
      free *= d;
    }
  }
  return {free * n, sq};
}

}  // namespace

int sqrt_conductor(i64 num, i64 den) {
  if (num <= 0 || den <= 0) throw DomainError("sqrt_conductor: input must be positive");
  const auto [free, sq] = squarefree_split(narrow(static_cast<i128>(num) * den));
  (void)sq;
  int c = 1;
  for (auto ell64 : gf::prime_divisors(static_cast<gf::u64>(free))) {
    const int ell = static_cast<int>(ell64);
    const int need = ell == 2 ? 8 : (ell % 4 == 1 ? ell : 4 * ell);
    c = lcm_int(c, need);
  }
  return c;
}

CycScalar sqrt_positive_rational(i64 num, i64 den) {
  const int c = sqrt_conductor(num, den);
  const auto [free, sq] = squarefree_split(narrow(static_cast<i128>(num) * den));
  CycScalar root = CycScalar::rational(c, sq, den);
  for (auto ell64 : gf::prime_divisors(static_cast<gf::u64>(free))) {
    const int ell = static_cast<int>(ell64);
    CycScalar r(c);
    if (ell == 2) {
      r = CycScalar::zeta(8, 1) + CycScalar::zeta(8, 7);
    } else {
      std::vector<i64> counts(static_cast<std::size_t>(ell), 0);
      for (int a = 1; a < ell; ++a)
        counts[static_cast<std::size_t>(a)] = gf::pow_mod(static_cast<gf::u32>(a), (ell - 1) / 2, ell) == 1 ? 1 : -1;
      CycScalar g = CycScalar::from_counts(ell, counts);
      r = ell % 4 == 1 ? g : CycScalar::zeta(4, 3) * g;
    }
    root = root * r;
  }
  root = root.to_conductor(c);
  check_invariant(root * root == CycScalar::rational(c, num, den), "sqrt_positive_rational: square mismatch");
  return root;
}

// ---------------------------------------------------------------------------

CycMatrix::CycMatrix(std::size_t rows, std::size_t cols, int conductor)
    : rows_(rows), cols_(cols), data_(rows * cols, CycScalar(conductor)) {}

CycMatrix CycMatrix::identity(std::size_t n, int conductor) {
  CycMatrix m(n, n, conductor);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = CycScalar::one(conductor);
  return m;
}

CycMatrix CycMatrix::operator*(const CycMatrix& o) const {
  if (cols_ != o.rows_) throw DomainError("CycMatrix: dimension mismatch");
  CycMatrix r(rows_, o.cols_, 1);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const CycScalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const CycScalar& b = o(k, j);
        if (!b.is_zero()) r.at(i, j) += a * b;
      }
    }
  return r;
}

CycMatrix CycMatrix::operator+(const CycMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("CycMatrix: dimension mismatch");
  CycMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

CycMatrix CycMatrix::operator-(const CycMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("CycMatrix: dimension mismatch");
  CycMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

CycMatrix CycMatrix::scaled(const CycScalar& s) const {
  CycMatrix r = *this;
  for (auto& x : r.data_)
    if (!x.is_zero()) x = x * s;
  return r;
}

bool CycMatrix::operator==(const CycMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!(data_[i] == o.data_[i])) return false;
  return true;
}

CycMatrix CycMatrix::conj() const {
  CycMatrix r = *this;
  for (auto& x : r.data_) x = x.conj();
  return r;
}

CycMatrix CycMatrix::transpose() const {
  CycMatrix r(cols_, rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = (*this)(i, j);
  return r;
}

CycMatrix CycMatrix::adjoint() const { return conj().transpose(); }

CycScalar CycMatrix::trace() const {
  CycScalar t(1);
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool CycMatrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

bool CycMatrix::is_scalar(CycScalar* value) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      if (i == j) {
        if (!((*this)(i, i) == (*this)(0, 0))) return false;
      } else if (!(*this)(i, j).is_zero()) {
        return false;
      }
    }
  if (value) *value = rows_ ? (*this)(0, 0) : CycScalar(1);
  return true;
}

std::vector<std::size_t> rref(std::vector<std::vector<CycScalar>>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i)
      if (!rows[i][c].is_zero()) {
        piv = i;
        break;
      }
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const CycScalar inv = rows[r][c].inverse();
    const std::size_t width = rows[r].size();
    for (std::size_t j = c; j < width; ++j)
      if (!rows[r][j].is_zero()) rows[r][j] = rows[r][j] * inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const CycScalar f = rows[i][c];
      for (std::size_t j = c; j < width; ++j)
        if (!rows[r][j].is_zero()) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

CycMatrix CycMatrix::inverse() const {
  if (rows_ != cols_) throw DomainError("CycMatrix: inverse of non-square matrix");
  const std::size_t n = rows_;
  std::vector<std::vector<CycScalar>> aug(n, std::vector<CycScalar>(2 * n, CycScalar(1)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = (*this)(i, j);
    aug[i][n + i] = CycScalar::one(1);
  }
  const auto piv = rref(aug, n);
  if (piv.size() != n) throw DomainError("CycMatrix: singular matrix");
  CycMatrix r(n, n, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.at(i, j) = aug[i][n + j];
  return r;
}

std::size_t CycMatrix::rank() const {
  std::vector<std::vector<CycScalar>> rows(rows_, std::vector<CycScalar>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) rows[i][j] = (*this)(i, j);
  return rref(rows, cols_).size();
}

std::vector<std::vector<CycScalar>> CycMatrix::kernel() const {
  std::vector<std::vector<CycScalar>> rows(rows_, std::vector<CycScalar>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) rows[i][j] = (*this)(i, j);
  const auto piv = rref(rows, cols_);
  std::vector<char> is_pivot(cols_, 0);
  for (auto c : piv) is_pivot[c] = 1;
  std::vector<std::vector<CycScalar>> out;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    std::vector<CycScalar> v(cols_, CycScalar(1));
    v[f] = CycScalar::one(1);
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -rows[k][f];
    out.push_back(std::move(v));
  }
  return out;
}

const CycScalar* CycMatrix::first_nonzero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return &x;
  return nullptr;
}

int CycMatrix::max_conductor() const {
  int c = 1;
  for (const auto& x : data_) c = lcm_int(c, x.conductor());
  return c;
}

}  // namespace heisweil::cyc
