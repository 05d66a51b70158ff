#include "heisweil/heis.hpp"

#include <sstream>

#include "heisweil/errors.hpp"

namespace heisweil::heis {

std::string to_string(HeisType t) {
  switch (t) {
    case HeisType::odd:
      return "odd";
    case HeisType::positive:
      return "positive";
    case HeisType::negative:
      return "negative";
  }
  return "odd";
}

HeisType parse_type(const std::string& s) {
  if (s == "odd") return HeisType::odd;
  if (s == "positive") return HeisType::positive;
  if (s == "negative") return HeisType::negative;
  throw DomainError("unknown Heisenberg type '" + s + "'");
}

namespace {

std::string vec_text(const FpVector& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "]";
  return os.str();
}

}  // namespace

HeisenbergGroup HeisenbergGroup::build(const BilinearForm& b) {
  gf::validate_prime(b.p);
  if (b.gram.rows() != b.dim || b.gram.cols() != b.dim) throw DomainError("build: gram must be dim x dim");
  HeisenbergGroup g;
  g.b_ = b;
  g.omega_ = forms::associated_alternating(b);
  if (b.dim > 0 && !g.omega_.is_nondegenerate()) {
    const auto ker = gf::kernel_basis(g.omega_.gram);
    throw DomainError("build: omega_B is degenerate; kernel vector " + vec_text(ker.front()));
  }
  g.v_size_ = gf::space_size(b.p, b.dim, u64{1} << 24);
  if (b.p == 2) {
    g.q_ = QuadraticForm::from_bilinear_diagonal(b);
    g.type_ = b.dim == 0 ? HeisType::positive
                         : (forms::classify(*g.q_).kind == forms::FormKind::split ? HeisType::positive
                                                                                  : HeisType::negative);
  } else {
    g.type_ = HeisType::odd;
  }
  return g;
}

HeisenbergGroup HeisenbergGroup::standard_model(u32 p, unsigned n, HeisType type) {
  gf::validate_prime(p);
  if ((p == 2) == (type == HeisType::odd))
    throw DomainError("standard_model: type '" + to_string(type) + "' is incompatible with p = " + std::to_string(p));
  if (type == HeisType::negative && n == 0) throw DomainError("standard_model: negative type needs n >= 1");
  BilinearForm b(p, 2 * n);
  if (p == 2) {
    for (unsigned i = 0; i < n; ++i) b.gram.set(2 * i, 2 * i + 1, 1);
    if (type == HeisType::negative) {
      b.gram.set(2 * n - 2, 2 * n - 2, 1);
      b.gram.set(2 * n - 1, 2 * n - 1, 1);
    }
  } else {
    const u32 half = gf::inv_mod(2, p);
    for (unsigned i = 0; i < n; ++i) {
      b.gram.set(2 * i, 2 * i + 1, half);
      b.gram.set(2 * i + 1, 2 * i, p - half);
    }
  }
  return build(b);
}

HeisElement HeisenbergGroup::mul(const HeisElement& x, const HeisElement& y) const {
  return {gf::add_mod(gf::add_mod(x.a, y.a, p()), b_(x.v, y.v), p()), gf::vadd(x.v, y.v, p())};
}

HeisElement HeisenbergGroup::inv(const HeisElement& x) const {
  // (a, v)^-1 = (B(v, v) - a, -v)
  return {gf::sub_mod(b_(x.v, x.v), x.a, p()), gf::vscale(x.v, p() - 1, p())};
}

HeisElement HeisenbergGroup::commutator(const HeisElement& x, const HeisElement& y) const {
  return mul(mul(x, y), inv(mul(y, x)));
}

HeisElement HeisenbergGroup::pow(const HeisElement& x, u64 k) const {
  HeisElement r = identity();
  for (u64 i = 0; i < k; ++i) r = mul(r, x);
  return r;
}

u64 HeisenbergGroup::index(const HeisElement& x) const { return x.a + p() * gf::vector_index(x.v, p()); }

HeisElement HeisenbergGroup::element(u64 index) const {
  return {static_cast<u32>(index % p()), gf::vector_at(index / p(), dim(), p())};
}

grp::GroupPtr HeisenbergGroup::fin_group() const {
  const u64 n = order();
  if (n > grp::kMaxTableOrder) throw ResourceError("fin_group: order exceeds table bound");
  std::vector<HeisElement> elems;
  elems.reserve(n);
  for (u64 i = 0; i < n; ++i) elems.push_back(element(i));
  // B(v, w) depends only on the vector parts; tabulate it once.
  const u64 vs = v_size_;
  std::vector<u32> bt(vs * vs);
  for (u64 i = 0; i < vs; ++i)
    for (u64 j = 0; j < vs; ++j) bt[i * vs + j] = b_(elems[i * p()].v, elems[j * p()].v);
  std::vector<grp::Elem> table(n * n);
  const u32 pp = p();
  std::vector<u64> vsum(vs * vs);
  for (u64 i = 0; i < vs; ++i)
    for (u64 j = 0; j < vs; ++j) vsum[i * vs + j] = gf::vector_index(gf::vadd(elems[i * pp].v, elems[j * pp].v, pp), pp);
  for (u64 x = 0; x < n; ++x)
    for (u64 y = 0; y < n; ++y) {
      const u64 vi = x / pp, vj = y / pp;
      const u32 a = static_cast<u32>((x % pp + y % pp + bt[vi * vs + vj]) % pp);
      table[x * n + y] = static_cast<grp::Elem>(a + pp * vsum[vi * vs + vj]);
    }
  return std::make_shared<const grp::FinGroup>(n, std::move(table));
}

InducedForms induced_forms(const HeisenbergGroup& g) {
  InducedForms out;
  const unsigned d = g.dim();
  out.omega = BilinearForm(g.p(), d);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) {
      FpVector ei(d, 0), ej(d, 0);
      ei[i] = 1;
      ej[j] = 1;
      const HeisElement c = g.commutator({0, ei}, {0, ej});
      check_invariant(g.is_central(c), "induced_forms: commutator is not central");
      out.omega.gram.set(i, j, c.a);
    }
  check_invariant(out.omega == forms::associated_alternating(g.B()), "induced_forms: omega_P != omega_B");
  if (g.p() == 2) {
    out.q = QuadraticForm::from_function(2, d, [&](const FpVector& v) {
      const HeisElement s = g.mul({0, v}, {0, v});
      check_invariant(g.is_central(s), "induced_forms: square is not central");
      return s.a;
    });
    check_invariant(*out.q == QuadraticForm::from_bilinear_diagonal(g.B()), "induced_forms: Q_P != B(v, v)");
  }
  return out;
}

HeisType classify(const HeisenbergGroup& g) {
  if (g.p() != 2) return HeisType::odd;
  const InducedForms f = induced_forms(g);
  if (g.dim() == 0) return HeisType::positive;
  return forms::classify(*f.q).kind == forms::FormKind::split ? HeisType::positive : HeisType::negative;
}

bool is_isomorphic(const HeisenbergGroup& a, const HeisenbergGroup& b) {
  return a.p() == b.p() && a.n() == b.n() && classify(a) == classify(b);
}

HeisenbergGroup central_product(const HeisenbergGroup& a, const HeisenbergGroup& b) {
  if (a.p() != b.p()) throw DomainError("central_product: groups over different primes");
  const unsigned da = a.dim(), db = b.dim();
  BilinearForm sum(a.p(), da + db);
  for (unsigned i = 0; i < da; ++i)
    for (unsigned j = 0; j < da; ++j) sum.gram.set(i, j, a.B().gram(i, j));
  for (unsigned i = 0; i < db; ++i)
    for (unsigned j = 0; j < db; ++j) sum.gram.set(da + i, da + j, b.B().gram(i, j));
  return HeisenbergGroup::build(sum);
}

u32 splitting_correction(const HeisenbergGroup& g, const std::vector<FpVector>& basis, const FpVector& coords) {
  const u32 p = g.p();
  if (p == 2) {
    u32 f = 0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j)
        if (coords[i] && coords[j]) f ^= g.B()(basis[i], basis[j]);
    return f;
  }
  FpVector w(g.dim(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) w = gf::vadd(w, gf::vscale(basis[i], coords[i], p), p);
  return gf::mul_mod(g.B()(w, w), gf::inv_mod(2, p), p);
}

Splitting splitting(const HeisenbergGroup& g, const std::vector<FpVector>& w_basis) {
  const u32 p = g.p();
  for (const auto& b : w_basis)
    if (b.size() != g.dim()) throw DomainError("splitting: vector length mismatch");
  Splitting s;
  s.basis = gf::span_basis(w_basis, p, g.dim());
  const unsigned k = static_cast<unsigned>(s.basis.size());
  const u64 count = gf::space_size(p, k, u64{1} << 20);
  std::vector<FpVector> vecs;
  for (u64 idx = 0; idx < count; ++idx) {
    const FpVector c = gf::vector_at(idx, k, p);
    FpVector w(g.dim(), 0);
    for (unsigned i = 0; i < k; ++i) w = gf::vadd(w, gf::vscale(s.basis[i], c[i], p), p);
    vecs.push_back(w);
  }
  if (p == 2) {
    for (const auto& w : vecs)
      if ((*g.q())(w) != 0) throw DomainError("splitting: W is not totally singular; Q_P(" + vec_text(w) + ") = 1");
  } else {
    for (const auto& x : s.basis)
      for (const auto& y : s.basis)
        if (g.omega()(x, y) != 0) throw DomainError("splitting: W is not isotropic; witness " + vec_text(x));
  }
  for (u64 idx = 0; idx < count; ++idx) {
    const FpVector c = gf::vector_at(idx, k, p);
    s.elements.push_back({splitting_correction(g, s.basis, c), vecs[idx]});
  }
  for (u64 i = 0; i < count; ++i)
    for (u64 j = 0; j < count; ++j) {
      const FpVector c = gf::vadd(gf::vector_at(i, k, p), gf::vector_at(j, k, p), p);
      check_invariant(g.mul(s.elements[i], s.elements[j]) == s.elements[gf::vector_index(c, p)],
                      "splitting: lift is not closed under multiplication");
    }
  return s;
}

}  // namespace heisweil::heis
