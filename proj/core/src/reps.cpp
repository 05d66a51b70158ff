#include "heisweil/reps.hpp"

#include <numeric>

#include "heisweil/errors.hpp"

namespace heisweil::reps {

using u32 = std::uint32_t;

// ---------------------------------------------------------------------------
// Monomial matrices

MonoMatrix MonoMatrix::identity(std::size_t n, int conductor) {
  MonoMatrix m;
  m.conductor = conductor;
  m.rows.resize(n);
  std::iota(m.rows.begin(), m.rows.end(), u32{0});
  m.exps.assign(n, 0);
  return m;
}

MonoMatrix MonoMatrix::operator*(const MonoMatrix& o) const {
  if (o.conductor != conductor || o.dim() != dim()) throw DomainError("MonoMatrix: incompatible operands");
  MonoMatrix r;
  r.conductor = conductor;
  r.rows.resize(dim());
  r.exps.resize(dim());
  const u32 n = static_cast<u32>(conductor);
  for (std::size_t j = 0; j < dim(); ++j) {
    const u32 mid = o.rows[j];
    r.rows[j] = rows[mid];
    r.exps[j] = (o.exps[j] + exps[mid]) % n;
  }
  return r;
}

MonoMatrix MonoMatrix::inverse() const {
  MonoMatrix r;
  r.conductor = conductor;
  r.rows.resize(dim());
  r.exps.resize(dim());
  const u32 n = static_cast<u32>(conductor);
  for (std::size_t j = 0; j < dim(); ++j) {
    r.rows[rows[j]] = static_cast<u32>(j);
    r.exps[rows[j]] = (n - exps[j]) % n;
  }
  return r;
}

MonoMatrix MonoMatrix::conj() const {
  MonoMatrix r = *this;
  const u32 n = static_cast<u32>(conductor);
  for (auto& e : r.exps) e = (n - e) % n;
  return r;
}

CycScalar MonoMatrix::trace() const {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(conductor), 0);
  for (std::size_t j = 0; j < dim(); ++j)
    if (rows[j] == j) ++counts[exps[j]];
  return CycScalar::from_counts(conductor, counts);
}

CycMatrix MonoMatrix::dense() const {
  CycMatrix m(dim(), dim(), conductor);
  for (std::size_t j = 0; j < dim(); ++j) m.at(rows[j], j) = CycScalar::zeta(conductor, exps[j]);
  return m;
}

bool MonoMatrix::is_scalar(u32* exponent) const {
  for (std::size_t j = 0; j < dim(); ++j)
    if (rows[j] != j || exps[j] != exps[0]) return false;
  if (exponent) *exponent = dim() ? exps[0] : 0;
  return true;
}

DenseRep to_dense(const MonoRep& r) {
  DenseRep d;
  d.group = r.group;
  d.dim = r.dim;
  d.mats.reserve(r.mats.size());
  for (const auto& m : r.mats) d.mats.push_back(m.dense());
  return d;
}

bool is_representation(const MonoRep& r) {
  const grp::FinGroup& g = *r.group;
  if (r.mats.size() != g.order()) return false;
  if (!(r.mats[g.identity()] == MonoMatrix::identity(r.dim, r.conductor))) return false;
  for (Elem a = 0; a < g.order(); ++a)
    for (Elem b = 0; b < g.order(); ++b)
      if (!(r.mats[g.mul(a, b)] == r.mats[a] * r.mats[b])) return false;
  return true;
}

bool is_representation(const DenseRep& r) {
  const grp::FinGroup& g = *r.group;
  if (r.mats.size() != g.order()) return false;
  if (!(r.mats[g.identity()] == CycMatrix::identity(r.dim, 1))) return false;
  for (Elem a = 0; a < g.order(); ++a)
    for (Elem b = 0; b < g.order(); ++b)
      if (!(r.mats[g.mul(a, b)] == r.mats[a] * r.mats[b])) return false;
  return true;
}

Character character(const MonoRep& r) {
  Character c;
  for (const auto& m : r.mats) c.values.push_back(m.trace());
  return c;
}

Character character(const DenseRep& r) {
  Character c;
  for (const auto& m : r.mats) c.values.push_back(m.trace());
  return c;
}

CycScalar inner_product(const grp::FinGroup& g, const Character& a, const Character& b) {
  CycScalar s(1);
  for (Elem x = 0; x < g.order(); ++x) s += a.values[x] * b.values[x].conj();
  return s * CycScalar::rational(1, 1, static_cast<std::int64_t>(g.order()));
}

bool is_irreducible(const MonoRep& r) {
  const Character c = character(r);
  return inner_product(*r.group, c, c) == CycScalar::one(1);
}

bool is_irreducible(const DenseRep& r) {
  const Character c = character(r);
  return inner_product(*r.group, c, c) == CycScalar::one(1);
}

int frobenius_schur(const MonoRep& r) {
  if (!is_irreducible(r)) throw DomainError("frobenius_schur: representation is reducible");
  const grp::FinGroup& g = *r.group;
  CycScalar s(1);
  for (Elem x = 0; x < g.order(); ++x) s += r.mats[g.mul(x, x)].trace();
  s = s * CycScalar::rational(1, 1, static_cast<std::int64_t>(g.order()));
  check_invariant(s.is_rational(), "frobenius_schur: indicator is not rational");
  const auto [num, den] = s.rational_value();
  check_invariant(den == 1 && num >= -1 && num <= 1, "frobenius_schur: indicator out of range");
  return static_cast<int>(num);
}

// ---------------------------------------------------------------------------
// Intertwiners

namespace {

// sum_g zeta^{E2[i] - E1[j]} E_{R2[i], R1[j]}, seeds (i, j) row-major.
template <class Get1, class Get2>
std::optional<CycMatrix> mono_average(std::size_t order, std::size_t d, int n, Get1&& r1, Get2&& r2) {
  std::vector<std::int64_t> counts(d * d * static_cast<std::size_t>(n));
  const u32 un = static_cast<u32>(n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t g = 0; g < order; ++g) {
        const MonoMatrix& m1 = r1(g);
        const MonoMatrix& m2 = r2(g);
        const std::size_t row = m2.rows[i], col = m1.rows[j];
        const u32 e = (m2.exps[i] + un - m1.exps[j]) % un;
        ++counts[(row * d + col) * un + e];
      }
      CycMatrix t(d, d, n);
      bool nonzero = false;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          const auto first = counts.begin() + static_cast<std::ptrdiff_t>((a * d + b) * un);
          if (std::all_of(first, first + n, [](std::int64_t c) { return c == 0; })) continue;
          std::vector<std::int64_t> entry(first, first + n);
          t.at(a, b) = CycScalar::from_counts(n, entry);
          nonzero = nonzero || !t(a, b).is_zero();
        }
      if (!nonzero) continue;
      const CycScalar lead = *t.first_nonzero();
      return t.scaled(lead.inverse());
    }
  return std::nullopt;
}

}  // namespace

std::optional<CycMatrix> intertwiner(const MonoRep& r1, const MonoRep& r2) {
  if (r1.group->order() != r2.group->order() || r1.dim != r2.dim || r1.conductor != r2.conductor)
    throw DomainError("intertwiner: incompatible representations");
  auto t = mono_average(r1.mats.size(), r1.dim, r1.conductor, [&](std::size_t g) -> const MonoMatrix& { return r1.mats[g]; },
                        [&](std::size_t g) -> const MonoMatrix& { return r2.mats[g]; });
  if (t) {
    const auto gens = grp::generators(*r1.group, grp::whole(*r1.group));
    for (Elem g : gens)
      check_invariant(*t * r1.mats[g].dense() == r2.mats[g].dense() * *t, "intertwiner: averaging failed");
  }
  return t;
}

std::optional<CycMatrix> twisted_intertwiner(const MonoRep& r, const std::vector<Elem>& perm) {
  auto t = mono_average(r.mats.size(), r.dim, r.conductor, [&](std::size_t g) -> const MonoMatrix& { return r.mats[g]; },
                        [&](std::size_t g) -> const MonoMatrix& { return r.mats[perm[g]]; });
  return t;
}

std::optional<CycMatrix> intertwiner(const DenseRep& r1, const DenseRep& r2) {
  if (r1.group->order() != r2.group->order()) throw DomainError("intertwiner: different groups");
  const grp::FinGroup& g = *r1.group;
  const std::size_t d1 = r1.dim, d2 = r2.dim;
  for (std::size_t i = 0; i < d2; ++i)
    for (std::size_t j = 0; j < d1; ++j) {
      CycMatrix t(d2, d1, 1);
      for (Elem x = 0; x < g.order(); ++x) {
        const CycMatrix& a = r2.mats[x];
        const CycMatrix& b = r1.mats[g.inv(x)];
        for (std::size_t r = 0; r < d2; ++r) {
          if (a(r, i).is_zero()) continue;
          for (std::size_t c = 0; c < d1; ++c)
            if (!b(j, c).is_zero()) t.at(r, c) += a(r, i) * b(j, c);
        }
      }
      if (t.is_zero()) continue;
      const CycScalar lead = *t.first_nonzero();
      return t.scaled(lead.inverse());
    }
  return std::nullopt;
}

std::optional<RStructure> r_structure(const MonoRep& r) {
  const int fs = frobenius_schur(r);
  if (fs == 0) return std::nullopt;
  MonoRep c = r;
  for (auto& m : c.mats) m = m.conj();
  auto j = intertwiner(c, r);
  check_invariant(j.has_value(), "r_structure: self-dual representation without intertwiner");
  CycScalar s;
  check_invariant((*j * j->conj()).is_scalar(&s) && s.is_rational() && !s.is_zero(),
                  "r_structure: J conj(J) is not a nonzero rational scalar");
  auto [num, den] = s.rational_value();
  const int sign = num > 0 ? 1 : -1;
  check_invariant(sign == fs, "r_structure: sign differs from the indicator");
  if (num < 0) num = -num;
  const CycScalar root = cyc::sqrt_positive_rational(num, den);
  RStructure out;
  out.sign = sign;
  out.j = j->scaled(root.inverse());
  check_invariant(out.j * out.j.conj() == CycMatrix::identity(r.dim, 1).scaled(CycScalar::rational(1, sign)),
                  "r_structure: normalization failed");
  return out;
}

// ---------------------------------------------------------------------------
// Restriction, induction, invariants

MonoRep restrict(const MonoRep& r, const grp::Subgroup& h) {
  const auto sg = grp::as_group(*r.group, h);
  MonoRep out;
  out.group = sg.group;
  out.conductor = r.conductor;
  out.dim = r.dim;
  for (Elem x : sg.embedding) out.mats.push_back(r.mats[x]);
  return out;
}

namespace {

struct Cosets {
  std::vector<Elem> reps;
  std::vector<std::size_t> of;      // element -> coset
  std::vector<Elem> pos_in_h;       // element of H -> index in as_group(H)
};

Cosets left_cosets(const grp::FinGroup& g, const grp::Subgroup& h) {
  Cosets c;
  const std::size_t unset = static_cast<std::size_t>(-1);
  c.of.assign(g.order(), unset);
  c.pos_in_h.assign(g.order(), 0);
  for (std::size_t i = 0; i < h.elems.size(); ++i) c.pos_in_h[h.elems[i]] = static_cast<Elem>(i);
  for (Elem x = 0; x < g.order(); ++x) {
    if (c.of[x] != unset) continue;
    const std::size_t k = c.reps.size();
    c.reps.push_back(x);
    for (Elem y : h.elems) c.of[g.mul(x, y)] = k;
  }
  return c;
}

}  // namespace

MonoRep induce(const grp::FinGroup& g, const grp::Subgroup& h, const MonoRep& rh) {
  const Cosets c = left_cosets(g, h);
  if (c.reps.size() > 512) throw ResourceError("induce: index above 512");
  const std::size_t dh = rh.dim, k = c.reps.size();
  MonoRep out;
  out.conductor = rh.conductor;
  out.dim = dh * k;
  for (Elem x = 0; x < g.order(); ++x) {
    MonoMatrix m;
    m.conductor = rh.conductor;
    m.rows.resize(out.dim);
    m.exps.resize(out.dim);
    for (std::size_t b = 0; b < k; ++b) {
      const Elem xt = g.mul(x, c.reps[b]);
      const std::size_t b2 = c.of[xt];
      const Elem hh = g.mul(g.inv(c.reps[b2]), xt);
      const MonoMatrix& blk = rh.mats[c.pos_in_h[hh]];
      for (std::size_t j = 0; j < dh; ++j) {
        m.rows[b * dh + j] = static_cast<u32>(b2 * dh + blk.rows[j]);
        m.exps[b * dh + j] = blk.exps[j];
      }
    }
    out.mats.push_back(std::move(m));
  }
  // The caller's group pointer for G is not known here; build one sharing the table.
  out.group = std::make_shared<const grp::FinGroup>(g);
  return out;
}

DenseRep induce(const grp::FinGroup& g, const grp::Subgroup& h, const DenseRep& rh) {
  const Cosets c = left_cosets(g, h);
  if (c.reps.size() > 512) throw ResourceError("induce: index above 512");
  const std::size_t dh = rh.dim, k = c.reps.size();
  DenseRep out;
  out.dim = dh * k;
  for (Elem x = 0; x < g.order(); ++x) {
    CycMatrix m(out.dim, out.dim, 1);
    for (std::size_t b = 0; b < k; ++b) {
      const Elem xt = g.mul(x, c.reps[b]);
      const std::size_t b2 = c.of[xt];
      const Elem hh = g.mul(g.inv(c.reps[b2]), xt);
      const CycMatrix& blk = rh.mats[c.pos_in_h[hh]];
      for (std::size_t i = 0; i < dh; ++i)
        for (std::size_t j = 0; j < dh; ++j) m.at(b2 * dh + i, b * dh + j) = blk(i, j);
    }
    out.mats.push_back(std::move(m));
  }
  out.group = std::make_shared<const grp::FinGroup>(g);
  return out;
}

std::vector<std::vector<CycScalar>> invariants(const DenseRep& r, const grp::Subgroup& h) {
  const auto gens = grp::generators(*r.group, h);
  const std::size_t d = r.dim;
  CycMatrix stacked(std::max<std::size_t>(gens.size(), 1) * d, d, 1);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        stacked.at(k * d + i, j) = r.mats[gens[k]](i, j) - (i == j ? CycScalar::one(1) : CycScalar(1));
  auto ker = stacked.kernel();
  cyc::rref(ker, d);
  return ker;
}

// ---------------------------------------------------------------------------
// Heisenberg representations

int heisenberg_conductor(u32 p) { return static_cast<int>(std::lcm(p, 4u)); }

namespace {

std::vector<gf::FpVector> linear_combinations(const std::vector<gf::FpVector>& basis, unsigned dim, u32 p) {
  const unsigned k = static_cast<unsigned>(basis.size());
  const auto count = gf::space_size(p, k, gf::u64{1} << 20);
  std::vector<gf::FpVector> out;
  for (gf::u64 idx = 0; idx < count; ++idx) {
    const auto c = gf::vector_at(idx, k, p);
    gf::FpVector v(dim, 0);
    for (unsigned i = 0; i < k; ++i) v = gf::vadd(v, gf::vscale(basis[i], c[i], p), p);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

HeisenbergRep heisenberg_rep(const heis::HeisenbergGroup& g, u32 psi) {
  const u32 p = g.p();
  if (psi % p == 0) throw DomainError("heisenberg_rep: psi must be a nontrivial character of Z(P)");
  const int n = heisenberg_conductor(p);
  const u32 un = static_cast<u32>(n);
  const u32 unit = un / p;
  auto psi_exp = [&](u32 a) { return (unit * gf::mul_mod(psi % p, a % p, p)) % un; };
  const unsigned d = g.dim();

  HeisenbergRep out{g, psi % p, {}, {}, {}};
  if (d > 0) out.polarization = p == 2 ? forms::find_polarization(*g.q()) : forms::find_polarization(g.omega());
  const auto& plus = out.polarization.plus;
  const auto& zero = out.polarization.zero;
  const auto& minus = out.polarization.minus;
  const unsigned k = static_cast<unsigned>(plus.size());
  const unsigned z = static_cast<unsigned>(zero.size());
  check_invariant(z == 0 || (p == 2 && z == 2), "heisenberg_rep: unexpected anisotropic part");

  std::vector<gf::FpVector> cols;
  cols.insert(cols.end(), plus.begin(), plus.end());
  cols.insert(cols.end(), zero.begin(), zero.end());
  cols.insert(cols.end(), minus.begin(), minus.end());
  const gf::FpMatrix cinv = d > 0 ? gf::FpMatrix::from_columns(p, d, cols).inverse() : gf::FpMatrix();
  auto coords = [&](const gf::FpVector& v) { return d > 0 ? cinv * v : gf::FpVector{}; };

  out.coset_reps = linear_combinations(minus, d, p);
  const std::size_t ncos = out.coset_reps.size();
  const std::size_t d0 = z == 0 ? 1 : 2;

  // omega_{0,psi} on P0 = preimage of V0.
  const u32 b12 = z == 2 ? g.B()(zero[0], zero[1]) : 0;
  MonoMatrix mi, mj;
  mi.conductor = mj.conductor = n;
  mi.rows = {0, 1};
  mi.exps = {un / 4, 3 * un / 4};
  mj.rows = {1, 0};
  mj.exps = {un / 2, 0};
  auto rho0 = [&](u32 a, const gf::FpVector& c0) {
    MonoMatrix m = MonoMatrix::identity(d0, n);
    u32 a2 = a;
    if (z == 2) {
      if (c0[0]) m = m * mi;
      if (c0[1]) m = m * mj;
      a2 = gf::sub_mod(a, gf::mul_mod(gf::mul_mod(c0[0], c0[1], p), b12, p), p);
    }
    for (auto& e : m.exps) e = (e + psi_exp(a2)) % un;
    return m;
  };

  out.rep.group = g.fin_group();
  out.rep.conductor = n;
  out.rep.dim = ncos * d0;
  const gf::u64 order = g.order();
  out.rep.mats.reserve(order);
  for (gf::u64 idx = 0; idx < order; ++idx) {
    const heis::HeisElement x = g.element(idx);
    MonoMatrix m;
    m.conductor = n;
    m.rows.resize(out.rep.dim);
    m.exps.resize(out.rep.dim);
    for (std::size_t b = 0; b < ncos; ++b) {
      const heis::HeisElement t{0, out.coset_reps[b]};
      const heis::HeisElement xt = g.mul(x, t);
      const auto cx = coords(xt.v);
      gf::FpVector mc(cx.begin() + k + z, cx.end());
      const std::size_t b2 = gf::vector_index(mc, p);
      const heis::HeisElement h = g.mul(g.inv({0, out.coset_reps[b2]}), xt);
      const auto ch = coords(h.v);
      for (unsigned i = 0; i < k; ++i) check_invariant(ch[k + z + i] == 0, "heisenberg_rep: coset decomposition failed");
      const gf::FpVector cu(ch.begin(), ch.begin() + k);
      const gf::FpVector c0(ch.begin() + k, ch.begin() + k + z);
      gf::FpVector u(d, 0), v0(d, 0);
      for (unsigned i = 0; i < k; ++i) u = gf::vadd(u, gf::vscale(plus[i], cu[i], p), p);
      for (unsigned i = 0; i < z; ++i) v0 = gf::vadd(v0, gf::vscale(zero[i], c0[i], p), p);
      const u32 fu = heis::splitting_correction(g, plus, cu);
      const u32 a2 = gf::sub_mod(gf::sub_mod(h.a, fu, p), g.B()(u, v0), p);
      const MonoMatrix blk = rho0(a2, c0);
      for (std::size_t j = 0; j < d0; ++j) {
        m.rows[b * d0 + j] = static_cast<u32>(b2 * d0 + blk.rows[j]);
        m.exps[b * d0 + j] = blk.exps[j];
      }
    }
    out.rep.mats.push_back(std::move(m));
  }
  check_invariant(is_representation(out.rep), "heisenberg_rep: induced matrices are not multiplicative");
  for (u32 a = 0; a < p; ++a) {
    u32 e = 0;
    check_invariant(out.rep.mats[a].is_scalar(&e) && e == psi_exp(a), "heisenberg_rep: wrong central character");
  }
  return out;
}

bool StoneVonNeumannReport::ok() const {
  return irreducible && central_character && restriction_isotypic && count_identity && dimension == expected_dimension &&
         conjugacy_classes == expected_classes;
}

StoneVonNeumannReport verify_stone_von_neumann(const heis::HeisenbergGroup& g, u32 psi) {
  StoneVonNeumannReport r;
  const HeisenbergRep hr = heisenberg_rep(g, psi);
  const grp::FinGroup& fg = *hr.rep.group;
  const u32 p = g.p();
  r.order = g.order();
  r.conjugacy_classes = grp::conjugacy_classes(fg).size();
  r.expected_classes = static_cast<std::size_t>(g.v_size() + p - 1);
  r.linear_characters = grp::abelianization_order(fg);
  r.dimension = hr.rep.dim;
  std::size_t root = 1;
  while (root * root < g.v_size()) ++root;
  r.expected_dimension = root * root == g.v_size() ? root : 0;
  r.irreducible = is_irreducible(hr.rep);
  const int n = hr.rep.conductor;
  r.central_character = true;
  r.restriction_isotypic = true;
  for (u32 a = 0; a < p; ++a) {
    u32 e = 0;
    const u32 want = (static_cast<u32>(n) / p * gf::mul_mod(hr.psi, a, p)) % static_cast<u32>(n);
    r.central_character = r.central_character && hr.rep.mats[a].is_scalar(&e) && e == want;
    r.restriction_isotypic =
        r.restriction_isotypic &&
        hr.rep.mats[a].trace() == CycScalar::zeta(n, want) * CycScalar::rational(n, static_cast<std::int64_t>(r.dimension));
  }
  r.count_identity = g.v_size() + (p - 1) * r.dimension * r.dimension == r.order;
  return r;
}

InvariantsCheck partial_polarization_invariants(const heis::HeisenbergGroup& g, u32 psi,
                                                const std::vector<gf::FpVector>& plus,
                                                const std::vector<gf::FpVector>& minus) {
  const u32 p = g.p();
  const unsigned d = g.dim();
  if (plus.size() != minus.size()) throw DomainError("partial_polarization_invariants: |V+| != |V-|");
  for (std::size_t i = 0; i < plus.size(); ++i)
    for (std::size_t j = 0; j < minus.size(); ++j)
      if (g.omega()(plus[i], minus[j]) != (i == j ? 1u : 0u))
        throw DomainError("partial_polarization_invariants: V+ and V- are not dual");
  const heis::Splitting lift = heis::splitting(g, plus);
  // V0 = (V+ + V-)^perp
  gf::FpMatrix cons(p, plus.size() * 2, d);
  std::size_t row = 0;
  for (const auto* set : {&plus, &minus})
    for (const auto& x : *set) {
      for (unsigned j = 0; j < d; ++j) {
        gf::FpVector e(d, 0);
        e[j] = 1;
        cons.set(row, j, g.omega()(x, e));
      }
      ++row;
    }
  const auto v0 = gf::kernel_basis(cons);
  forms::BilinearForm b0(p, static_cast<unsigned>(v0.size()));
  for (std::size_t i = 0; i < v0.size(); ++i)
    for (std::size_t j = 0; j < v0.size(); ++j) b0.gram.set(i, j, g.B()(v0[i], v0[j]));
  const heis::HeisenbergGroup p0 = heis::HeisenbergGroup::build(b0);
  const HeisenbergRep base = heisenberg_rep(p0, psi);
  const HeisenbergRep full = heisenberg_rep(g, psi);
  const DenseRep dense = to_dense(full.rep);

  std::vector<Elem> lift_elems;
  for (const auto& x : lift.elements) lift_elems.push_back(static_cast<Elem>(g.index(x)));
  const auto h = grp::make_subset(*full.rep.group, lift_elems);
  const auto inv = invariants(dense, h);

  InvariantsCheck out;
  out.invariant_dim = inv.size();
  out.base_dim = base.rep.dim;
  std::vector<std::size_t> piv;
  for (const auto& s : inv)
    for (std::size_t c = 0; c < s.size(); ++c)
      if (!s[c].is_zero()) {
        piv.push_back(c);
        break;
      }
  out.equivalent = out.invariant_dim == out.base_dim;
  for (gf::u64 idx = 0; idx < p0.order() && out.equivalent; ++idx) {
    const heis::HeisElement x0 = p0.element(idx);
    gf::FpVector v(d, 0);
    for (std::size_t i = 0; i < v0.size(); ++i) v = gf::vadd(v, gf::vscale(v0[i], x0.v[i], p), p);
    const CycMatrix& m = dense.mats[g.index({x0.a, v})];
    CycScalar tr(1);
    for (std::size_t k = 0; k < inv.size(); ++k) {
      CycScalar coord(1);
      for (std::size_t c = 0; c < d; ++c) coord += m(piv[k], c) * inv[k][c];
      tr += coord;
    }
    out.equivalent = tr == base.rep.mats[idx].trace();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clifford theory

namespace {

using Vec = std::vector<CycScalar>;

std::vector<std::size_t> pivots_of(const std::vector<Vec>& basis) {
  std::vector<std::size_t> piv;
  for (const auto& s : basis)
    for (std::size_t c = 0; c < s.size(); ++c)
      if (!s[c].is_zero()) {
        piv.push_back(c);
        break;
      }
  return piv;
}

Vec apply(const CycMatrix& m, const Vec& v) {
  Vec out(m.rows(), CycScalar(1));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!v[j].is_zero() && !m(i, j).is_zero()) out[i] += m(i, j) * v[j];
  return out;
}

// Smallest invariant subspace containing `start`, as reduced echelon rows.
std::vector<Vec> spin(const std::vector<CycMatrix>& gens, std::vector<Vec> start, std::size_t dim) {
  cyc::rref(start, dim);
  while (!start.empty() && std::all_of(start.back().begin(), start.back().end(), [](const CycScalar& x) { return x.is_zero(); }))
    start.pop_back();
  for (;;) {
    std::vector<Vec> next = start;
    for (const auto& m : gens)
      for (const auto& s : start) next.push_back(apply(m, s));
    const auto piv = cyc::rref(next, dim);
    next.resize(piv.size());
    if (next.size() == start.size()) return next;
    start = std::move(next);
  }
}

// Matrices of the action on an invariant subspace with echelon basis.
std::vector<CycMatrix> restricted(const std::vector<CycMatrix>& mats, const std::vector<Vec>& basis) {
  const auto piv = pivots_of(basis);
  const std::size_t k = basis.size();
  std::vector<CycMatrix> out;
  for (const auto& m : mats) {
    CycMatrix r(k, k, 1);
    for (std::size_t j = 0; j < k; ++j) {
      const Vec img = apply(m, basis[j]);
      for (std::size_t i = 0; i < k; ++i) r.at(i, j) = img[piv[i]];
    }
    out.push_back(std::move(r));
  }
  return out;
}

CycScalar norm_sq(const grp::FinGroup& g, const std::vector<CycMatrix>& mats) {
  Character c;
  for (const auto& m : mats) c.values.push_back(m.trace());
  return inner_product(g, c, c);
}

std::vector<Vec> to_ambient(const std::vector<Vec>& coords, const std::vector<Vec>& basis, std::size_t dim) {
  std::vector<Vec> out;
  for (const auto& c : coords) {
    Vec v(dim, CycScalar(1));
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (!c[k].is_zero())
        for (std::size_t i = 0; i < dim; ++i) v[i] += c[k] * basis[k][i];
    out.push_back(std::move(v));
  }
  cyc::rref(out, dim);
  return out;
}

// Decomposes the module given by `mats` (all group elements) into irreducible
// submodules, returned as echelon bases in the module's own coordinates.
void decompose(const grp::FinGroup& g, const std::vector<Elem>& gens, const std::vector<CycMatrix>& mats, int conductor,
               std::vector<std::vector<CycMatrix>>& pieces) {
  const std::size_t w = mats.front().rows();
  if (w == 0) return;
  if (norm_sq(g, mats) == CycScalar::one(1)) {
    pieces.push_back(mats);
    return;
  }
  std::vector<CycMatrix> gen_mats;
  for (Elem x : gens) gen_mats.push_back(mats[x]);
  std::optional<std::vector<Vec>> sub;
  for (Elem x = 0; x < g.order() && !sub; ++x) {
    if (x == g.identity()) continue;
    for (int e = 0; e < conductor && !sub; ++e) {
      CycMatrix shifted = mats[x];
      for (std::size_t i = 0; i < w; ++i) shifted.at(i, i) -= CycScalar::zeta(conductor, e);
      for (const auto& v : shifted.kernel()) {
        auto s = spin(gen_mats, {v}, w);
        if (s.size() < w) {
          sub = std::move(s);
          break;
        }
      }
    }
  }
  if (!sub) throw ResourceError("clifford_decompose: no proper submodule found");
  // Shrink to an irreducible submodule.
  for (;;) {
    const auto inner = restricted(mats, *sub);
    if (norm_sq(g, inner) == CycScalar::one(1)) break;
    std::vector<CycMatrix> inner_gens;
    for (Elem x : gens) inner_gens.push_back(inner[x]);
    std::optional<std::vector<Vec>> smaller;
    for (Elem x = 0; x < g.order() && !smaller; ++x) {
      if (x == g.identity()) continue;
      for (int e = 0; e < conductor && !smaller; ++e) {
        CycMatrix shifted = inner[x];
        for (std::size_t i = 0; i < sub->size(); ++i) shifted.at(i, i) -= CycScalar::zeta(conductor, e);
        for (const auto& v : shifted.kernel()) {
          auto s = spin(inner_gens, {v}, sub->size());
          if (s.size() < sub->size()) {
            smaller = std::move(s);
            break;
          }
        }
      }
    }
    if (!smaller) throw ResourceError("clifford_decompose: no proper submodule found");
    sub = to_ambient(*smaller, *sub, w);
  }
  const auto irr = restricted(mats, *sub);
  pieces.push_back(irr);
  // Equivariant projection onto sub along a complement; its kernel is stable.
  const auto piv = pivots_of(*sub);
  CycMatrix p0(w, w, 1);
  for (std::size_t k = 0; k < sub->size(); ++k)
    for (std::size_t i = 0; i < w; ++i) p0.at(i, piv[k]) = (*sub)[k][i];
  CycMatrix avg(w, w, 1);
  for (Elem x = 0; x < g.order(); ++x) avg = avg + mats[x] * p0 * mats[g.inv(x)];
  auto comp = avg.kernel();
  cyc::rref(comp, w);
  check_invariant(comp.size() + sub->size() == w, "clifford_decompose: complement has wrong dimension");
  decompose(g, gens, restricted(mats, comp), conductor, pieces);
}

std::vector<CycMatrix> commutant(const std::vector<CycMatrix>& gens, std::size_t d) {
  CycMatrix sys(std::max<std::size_t>(gens.size(), 1) * d * d, d * d, 1);
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const CycMatrix& m = gens[gi];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const std::size_t row = gi * d * d + i * d + j;
        // (X M - M X)_{ij}
        for (std::size_t k = 0; k < d; ++k) {
          sys.at(row, i * d + k) += m(k, j);
          sys.at(row, k * d + j) -= m(i, k);
        }
      }
  }
  std::vector<CycMatrix> out;
  for (const auto& v : sys.kernel()) {
    CycMatrix x(d, d, 1);
    for (std::size_t i = 0; i < d * d; ++i) x.at(i / d, i % d) = v[i];
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

CliffordResult clifford_decompose(const grp::FinGroup& b, const grp::Subgroup& c, const DenseRep& rho) {
  if (!grp::is_subgroup(b, c) || !grp::is_normal(b, c)) throw DomainError("clifford_decompose: C is not normal in B");
  if (b.order() / c.order() > 64) throw ResourceError("clifford_decompose: index above 64");
  if (!is_irreducible(rho)) throw DomainError("clifford_decompose: rho is reducible");
  const DenseRep ind = induce(b, c, rho);
  CliffordResult out;
  out.induced_dim = ind.dim;
  int conductor = static_cast<int>(grp::exponent(b));
  for (const auto& m : rho.mats) conductor = std::lcm(conductor, m.max_conductor());
  const auto gens = grp::generators(b, grp::whole(b));
  std::vector<CycMatrix> gen_mats;
  for (Elem x : gens) gen_mats.push_back(ind.mats[x]);
  const auto end = commutant(gen_mats, ind.dim);
  out.end_dim = end.size();
  {
    std::vector<CycMatrix> both = gen_mats;
    both.insert(both.end(), end.begin(), end.end());
    out.end_center_dim = commutant(both, ind.dim).size();
  }
  std::vector<std::vector<CycMatrix>> pieces;
  decompose(b, gens, ind.mats, conductor, pieces);
  auto group = std::make_shared<const grp::FinGroup>(b);
  std::vector<Character> chars;
  for (auto& piece : pieces) {
    Character ch;
    for (const auto& m : piece) ch.values.push_back(m.trace());
    bool merged = false;
    for (std::size_t k = 0; k < chars.size(); ++k)
      if (chars[k].values == ch.values) {
        ++out.components[k].multiplicity;
        merged = true;
        break;
      }
    if (merged) continue;
    chars.push_back(ch);
    DenseRep sigma;
    sigma.group = group;
    sigma.dim = piece.front().rows();
    sigma.mats = std::move(piece);
    out.components.push_back({std::move(sigma), 1});
  }
  std::size_t sum_sq = 0, sum_dim = 0;
  for (const auto& comp : out.components) {
    sum_sq += comp.multiplicity * comp.multiplicity;
    sum_dim += comp.multiplicity * comp.sigma.dim;
  }
  out.verified = out.components.size() == out.end_center_dim && sum_sq == out.end_dim && sum_dim == out.induced_dim;
  return out;
}

}  // namespace heisweil::reps
