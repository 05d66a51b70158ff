#include "heisweil/forms.hpp"

#include <functional>
#include <set>

#include "heisweil/errors.hpp"

namespace heisweil::forms {

using gf::add_mod;
using gf::mul_mod;
using gf::sub_mod;

// ------------------------------------------------------------ BilinearForm

BilinearForm::BilinearForm(u32 p_, unsigned dim_) : p(p_), dim(dim_), gram(p_, dim_, dim_) {
  gf::validate_prime(p_);
}

BilinearForm::BilinearForm(FpMatrix g) : p(g.p()), dim(static_cast<unsigned>(g.rows())), gram(std::move(g)) {
  gf::validate_prime(p);
  if (gram.rows() != gram.cols()) throw DomainError("Gram matrix must be square");
}

u32 BilinearForm::operator()(const FpVector& v, const FpVector& w) const {
  u64 s = 0;
  for (unsigned i = 0; i < dim; ++i) {
    if (v[i] == 0) continue;
    u64 row = 0;
    for (unsigned j = 0; j < dim; ++j) row += static_cast<u64>(gram(i, j)) * w[j];
    s += (row % p) * v[i];
  }
  return static_cast<u32>(s % p);
}

bool BilinearForm::is_symmetric() const { return gram == gram.transpose(); }

bool BilinearForm::is_alternating() const {
  for (unsigned i = 0; i < dim; ++i) {
    if (gram(i, i) != 0) return false;
    for (unsigned j = i + 1; j < dim; ++j)
      if (add_mod(gram(i, j), gram(j, i), p) != 0) return false;
  }
  return true;
}

bool BilinearForm::is_nondegenerate() const { return gram.rank() == dim; }

BilinearForm BilinearForm::pullback(const FpMatrix& m) const {
  return BilinearForm(m.transpose() * gram * m);
}

// ----------------------------------------------------------- QuadraticForm

QuadraticForm::QuadraticForm(u32 p_, unsigned dim_) : p(p_), dim(dim_), upper(p_, dim_, dim_), diag(dim_, 0) {
  gf::validate_prime(p_);
}

u32 QuadraticForm::operator()(const FpVector& v) const {
  u64 s = 0;
  for (unsigned i = 0; i < dim; ++i) {
    if (v[i] == 0) continue;
    u64 row = static_cast<u64>(diag[i]) * v[i];
    for (unsigned j = i + 1; j < dim; ++j) row += static_cast<u64>(upper(i, j)) * v[j];
    s += (row % p) * v[i];
  }
  return static_cast<u32>(s % p);
}

QuadraticForm QuadraticForm::pullback(const FpMatrix& m) const {
  return from_function(p, dim, [&](const FpVector& v) { return (*this)(m * v); });
}

QuadraticForm QuadraticForm::from_bilinear_diagonal(const BilinearForm& b) {
  QuadraticForm q(b.p, b.dim);
  for (unsigned i = 0; i < b.dim; ++i) {
    q.diag[i] = b.gram(i, i);
    for (unsigned j = i + 1; j < b.dim; ++j) q.upper.set(i, j, b.gram(i, j) + b.gram(j, i));
  }
  return q;
}

std::string to_string(FormKind k) {
  switch (k) {
    case FormKind::split: return "split";
    case FormKind::nonsplit: return "nonsplit";
    case FormKind::degenerate: return "degenerate";
  }
  return "unknown";
}

BilinearForm associated_alternating(const BilinearForm& b) {
  return BilinearForm(b.gram - b.gram.transpose());
}

BilinearForm polar_form(const QuadraticForm& q) {
  BilinearForm b(q.p, q.dim);
  for (unsigned i = 0; i < q.dim; ++i) {
    b.gram.set(i, i, 2 * static_cast<std::int64_t>(q.diag[i]));
    for (unsigned j = i + 1; j < q.dim; ++j) {
      b.gram.set(i, j, q.upper(i, j));
      b.gram.set(j, i, q.upper(i, j));
    }
  }
  return b;
}

// -------------------------------------------------------------- Witt index

namespace {

std::size_t leading(const FpVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  return v.size();
}

struct WittSearch {
  const QuadraticForm& q;
  BilinearForm bq;
  unsigned bound;
  unsigned best = 0;
  std::set<std::vector<u32>> visited;

  // Vectors v that are orthogonal to S, reduced at S's pivots, and zero at
  // every coordinate up to `after` (inclusive when after < dim).
  std::vector<FpVector> candidate_space(const std::vector<FpVector>& s, std::size_t after) const {
    const unsigned dim = q.dim;
    std::vector<FpVector> rows;
    for (const FpVector& b : s) {
      FpVector row(dim);
      for (unsigned j = 0; j < dim; ++j) {
        FpVector e(dim, 0);
        e[j] = 1;
        row[j] = bq(b, e);
      }
      rows.push_back(row);
      FpVector piv(dim, 0);
      piv[leading(b)] = 1;
      rows.push_back(piv);
    }
    if (after < dim)
      for (std::size_t i = 0; i <= after; ++i) {
        FpVector e(dim, 0);
        e[i] = 1;
        rows.push_back(e);
      }
    FpMatrix m(q.p, rows.size(), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (unsigned j = 0; j < dim; ++j) m.set(i, j, rows[i][j]);
    return gf::kernel_basis(m);
  }

  void dfs(const std::vector<FpVector>& s) {
    if (s.size() > best) best = static_cast<unsigned>(s.size());
    if (best >= bound) return;
    const std::size_t last = s.empty() ? q.dim : leading(s.back());
    std::vector<FpVector> basis = candidate_space(s, last);
    const u64 count = gf::space_size(q.p, static_cast<unsigned>(basis.size()), u64{1} << 24);
    for (u64 code = 1; code < count && best < bound; ++code) {
      FpVector coeffs = gf::vector_at(code, static_cast<unsigned>(basis.size()), q.p);
      FpVector v(q.dim, 0);
      for (std::size_t k = 0; k < basis.size(); ++k)
        if (coeffs[k]) v = gf::vadd(v, gf::vscale(basis[k], coeffs[k], q.p), q.p);
      const std::size_t lead = leading(v);
      if (lead == q.dim || v[lead] != 1) continue;
      if (q(v) != 0) continue;
      // Reduce earlier vectors at the new pivot to keep a canonical key.
      std::vector<FpVector> next;
      for (const FpVector& b : s) {
        const u32 c = b[lead];
        next.push_back(c ? gf::vsub(b, gf::vscale(v, c, q.p), q.p) : b);
      }
      next.push_back(v);
      std::vector<u32> key;
      std::vector<FpVector> sorted = gf::span_basis(next, q.p, q.dim);
      for (const FpVector& b : sorted) key.insert(key.end(), b.begin(), b.end());
      if (!visited.insert(key).second) continue;
      dfs(next);
    }
  }
};

}  // namespace

unsigned witt_index(const QuadraticForm& q) {
  if (q.dim > 12) throw ResourceError("witt_index: dimension above 12");
  WittSearch search{q, polar_form(q), 0, 0, {}};
  const unsigned rad = q.dim - static_cast<unsigned>(search.bq.gram.rank());
  search.bound = (q.dim + rad) / 2;
  search.dfs({});
  return search.best;
}

FormClass classify(const QuadraticForm& q) {
  if (q.p == 2 && q.dim % 2 == 1)
    throw DomainError("classify: odd-dimensional quadratic forms in characteristic 2 are unsupported");
  FormClass out;
  out.witt_index = witt_index(q);
  if (!polar_form(q).is_nondegenerate()) {
    out.kind = FormKind::degenerate;
    return out;
  }
  out.kind = out.witt_index == q.dim / 2 ? FormKind::split : FormKind::nonsplit;
  if (q.p == 2)
    check_invariant(out.witt_index + 1 >= q.dim / 2, "classify: Witt index below n-1");
  return out;
}

u64 count_zeros(const QuadraticForm& q) {
  const u64 total = gf::space_size(q.p, q.dim, u64{1} << 24);
  if (q.dim == 0) return 1;
  const BilinearForm bq = polar_form(q);
  const u32 p = q.p;
  std::vector<u32> v(q.dim, 0), lin(q.dim, 0);
  u32 value = 0;
  u64 zeros = 0;
  for (u64 step = 0; step < total; ++step) {
    if (value == 0) ++zeros;
    int i = static_cast<int>(q.dim) - 1;
    while (i >= 0) {
      value = add_mod(value, add_mod(lin[i], q.diag[i], p), p);
      for (unsigned j = 0; j < q.dim; ++j) lin[j] = add_mod(lin[j], bq.gram(i, j), p);
      if (++v[i] < p) break;
      v[i] = 0;
      --i;
    }
  }
  return zeros;
}

// ----------------------------------------------------------- polarization

namespace {

using QFn = std::function<u32(const FpVector&)>;
using BFn = std::function<u32(const FpVector&, const FpVector&)>;

Polarization polarize(u32 p, unsigned dim, const QFn& qf, const BFn& bf) {
  const u64 size = gf::space_size(p, dim, u64{1} << 20);
  std::vector<FpVector> u;
  for (unsigned i = 0; i < dim; ++i) {
    FpVector e(dim, 0);
    e[i] = 1;
    u.push_back(e);
  }
  Polarization out;
  while (!u.empty()) {
    auto first_in_u = [&](auto&& pred) -> std::optional<FpVector> {
      for (u64 idx = 1; idx < size; ++idx) {
        FpVector v = gf::vector_at(idx, dim, p);
        if (!pred(v)) continue;
        if (gf::in_span(u, v, p)) return v;
      }
      return std::nullopt;
    };
    std::optional<FpVector> e = first_in_u([&](const FpVector& v) { return qf(v) == 0; });
    if (!e) break;
    std::optional<FpVector> f = first_in_u([&](const FpVector& v) { return bf(*e, v) == 1; });
    if (!f) throw DomainError("find_polarization: form is degenerate");
    const u32 c = qf(*f);
    FpVector fp = gf::vsub(*f, gf::vscale(*e, c, p), p);
    out.plus.push_back(*e);
    out.minus.push_back(fp);
    // Restrict U to the orthogonal complement of <e, f'>.
    FpMatrix cons(p, 2, u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      cons.set(0, k, bf(*e, u[k]));
      cons.set(1, k, bf(fp, u[k]));
    }
    std::vector<FpVector> ker = gf::kernel_basis(cons);
    std::vector<FpVector> next;
    for (const FpVector& coeff : ker) {
      FpVector w(dim, 0);
      for (std::size_t k = 0; k < u.size(); ++k)
        if (coeff[k]) w = gf::vadd(w, gf::vscale(u[k], coeff[k], p), p);
      next.push_back(w);
    }
    u = gf::span_basis(next, p, dim);
  }
  out.zero = u;
  // The restriction to V0 must be nondegenerate.
  FpMatrix g(p, out.zero.size(), out.zero.size());
  for (std::size_t i = 0; i < out.zero.size(); ++i)
    for (std::size_t j = 0; j < out.zero.size(); ++j) g.set(i, j, bf(out.zero[i], out.zero[j]));
  if (g.rank() != out.zero.size()) throw DomainError("find_polarization: form is degenerate");
  return out;
}

}  // namespace

Polarization find_polarization(const BilinearForm& omega) {
  if (!omega.is_alternating()) throw DomainError("find_polarization: form is not alternating");
  if (!omega.is_nondegenerate()) throw DomainError("find_polarization: form is degenerate");
  return polarize(
      omega.p, omega.dim, [](const FpVector&) { return 0u; },
      [&](const FpVector& a, const FpVector& b) { return omega(a, b); });
}

Polarization find_polarization(const QuadraticForm& q) {
  const BilinearForm bq = polar_form(q);
  if (!bq.is_nondegenerate()) throw DomainError("find_polarization: form is degenerate");
  return polarize(
      q.p, q.dim, [&](const FpVector& v) { return q(v); },
      [&](const FpVector& a, const FpVector& b) { return bq(a, b); });
}

FpMatrix symplectic_basis(const BilinearForm& omega) {
  if (omega.dim % 2 != 0) throw DomainError("symplectic_basis: odd dimension");
  Polarization pol = find_polarization(omega);
  std::vector<FpVector> cols;
  for (std::size_t i = 0; i < pol.plus.size(); ++i) {
    cols.push_back(pol.plus[i]);
    cols.push_back(pol.minus[i]);
  }
  FpMatrix m = FpMatrix::from_columns(omega.p, omega.dim, cols);
  check_invariant(omega.pullback(m) == standard_symplectic(omega.p, omega.dim / 2),
                  "symplectic_basis: result is not standard");
  return m;
}

// ------------------------------------------------------------ model forms

BilinearForm standard_symplectic(u32 p, unsigned n) {
  BilinearForm b(p, 2 * n);
  for (unsigned i = 0; i < n; ++i) {
    b.gram.set(2 * i, 2 * i + 1, 1);
    b.gram.set(2 * i + 1, 2 * i, -1);
  }
  return b;
}

QuadraticForm standard_split(u32 p, unsigned n) {
  QuadraticForm q(p, 2 * n);
  for (unsigned i = 0; i < n; ++i) q.upper.set(2 * i, 2 * i + 1, 1);
  return q;
}

QuadraticForm norm_form(u32 p) {
  auto field = gf::FqField::make(p, 2);
  return QuadraticForm::from_function(p, 2, [&](const FpVector& v) {
    return field->norm_trace(field->from_coeffs({v[0], v[1]}), 1).first;
  });
}

QuadraticForm standard_nonsplit(u32 p, unsigned n) {
  if (n == 0) throw DomainError("standard_nonsplit: requires n >= 1");
  QuadraticForm q = standard_split(p, n);
  QuadraticForm nf = norm_form(p);
  const unsigned a = 2 * n - 2;
  q.upper.set(a, a + 1, nf.upper(0, 1));
  q.diag[a] = nf.diag[0];
  q.diag[a + 1] = nf.diag[1];
  return q;
}

QuadraticForm norm_trace_form(u32 q) {
  unsigned m = 0;
  while ((u32{1} << m) < q) ++m;
  if (q < 2 || (u32{1} << m) != q) throw DomainError("norm_trace_form: q must be a power of 2");
  if (2 * m > 16) throw DomainError("norm_trace_form: q^2 exceeds 2^16");
  auto field = gf::FqField::make(2, 2 * m);
  return QuadraticForm::from_function(2, 2 * m, [&](const FpVector& v) {
    const u32 a = field->from_coeffs(v);
    const u32 nm = field->relative_norm_trace(a, 2 * m, m).first;
    return field->relative_norm_trace(nm, m, 1).second;
  });
}

}  // namespace heisweil::forms
