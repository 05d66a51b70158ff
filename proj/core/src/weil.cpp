#include "heisweil/weil.hpp"

#include <numeric>

#include "heisweil/errors.hpp"
#include "heisweil/zmod.hpp"

namespace heisweil::weil {

namespace {

using i64 = std::int64_t;

CycMatrix promote(const CycMatrix& m, int conductor) {
  CycMatrix out(m.rows(), m.cols(), conductor);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m(i, j).to_conductor(conductor);
  return out;
}

std::pair<std::size_t, std::size_t> first_nonzero_position(const CycMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return {i, j};
  throw InvariantError("zero matrix where an invertible one was expected");
}

CycScalar product_entry(const CycMatrix& a, const CycMatrix& b, std::size_t i, std::size_t j) {
  CycScalar s(a(0, 0).conductor());
  for (std::size_t k = 0; k < a.cols(); ++k)
    if (!a(i, k).is_zero() && !b(k, j).is_zero()) s += a(i, k) * b(k, j);
  return s;
}

i64 exponent_in(const CycScalar& s, int modulus) {
  const i64 e = s.to_conductor(modulus).root_of_unity_exponent();
  check_invariant(e >= 0, "expected a root of unity of order dividing " + std::to_string(modulus));
  return e;
}

std::vector<Elem> generators_of(const grp::FinGroup& g) { return grp::generators(g, grp::whole(g)); }

std::vector<Elem> heis_generators(const heis::HeisenbergGroup& g) {
  std::vector<Elem> out{static_cast<Elem>(g.index({1, gf::FpVector(g.dim(), 0)}))};
  for (unsigned i = 0; i < g.dim(); ++i) {
    gf::FpVector e(g.dim(), 0);
    e[i] = 1;
    out.push_back(static_cast<Elem>(g.index({0, e})));
  }
  return out;
}

int exponent_of_abelianization(const grp::FinGroup& a) {
  const grp::Quotient q = grp::quotient(a, grp::derived_subgroup(a));
  return static_cast<int>(grp::exponent(*q.group));
}

}  // namespace

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::complex:
      return "complex";
    case Flavor::real:
      return "real";
    case Flavor::quaternionic:
      return "quaternionic";
  }
  return "complex";
}

std::vector<Elem> element_permutation(const heis::HeisenbergGroup& g, const CentralAutomorphism& f) {
  std::vector<Elem> perm(g.order());
  for (gf::u64 i = 0; i < g.order(); ++i) perm[i] = static_cast<Elem>(g.index(f.apply(g.element(i))));
  return perm;
}

ProjectiveWeil projective_weil(const reps::HeisenbergRep& rep, const AutGroup& a) {
  const heis::HeisenbergGroup& g = rep.group;
  require(a.heis && *a.heis == g, "projective_weil: automorphisms act on a different Heisenberg group");
  require(a.elements.size() <= 2048, "projective_weil: |A| exceeds 2048");
  ProjectiveWeil pw{rep, a, rep.rep.conductor, {}, {}};
  const std::size_t na = a.elements.size();
  const auto pgens = heis_generators(g);

  std::vector<CycMatrix> t(na);
  std::vector<std::pair<i64, i64>> norms(na);
  int k = rep.rep.conductor;
  for (std::size_t i = 0; i < na; ++i) {
    const auto perm = element_permutation(g, a.elements[i]);
    auto ti = reps::twisted_intertwiner(rep.rep, perm);
    check_invariant(ti.has_value(), "projective_weil: no intertwiner for an automorphism");
    for (Elem x : pgens)
      check_invariant(*ti * rep.rep.mats[x].dense() == rep.rep.mats[perm[x]].dense() * *ti,
                      "projective_weil: intertwiner relation fails");
    CycScalar s;
    const bool scalar = (*ti * ti->adjoint()).is_scalar(&s);
    check_invariant(scalar, "projective_weil: T T^* is not scalar");
    if (!s.is_rational()) throw ResourceError("projective_weil: T T^* is an irrational scalar");
    norms[i] = s.rational_value();
    k = std::lcm(k, cyc::sqrt_conductor(norms[i].first, norms[i].second));
    t[i] = std::move(*ti);
  }
  if (k > 4096) throw ResourceError("projective_weil: conductor exceeds 4096");
  pw.conductor = k;
  pw.u.resize(na);
  for (std::size_t i = 0; i < na; ++i) {
    const CycScalar inv_root = cyc::sqrt_positive_rational(norms[i].first, norms[i].second).inverse();
    pw.u[i] = promote(t[i].scaled(inv_root), k);
  }

  const int m = std::lcm(k, 2);
  const grp::FinGroup& ag = *a.group;
  pw.c.group = a.group;
  pw.c.modulus = m;
  pw.c.values.assign(na * na, 0);
  std::vector<std::pair<std::size_t, std::size_t>> pos(na);
  std::vector<CycScalar> lead_inv(na);
  for (std::size_t i = 0; i < na; ++i) {
    pos[i] = first_nonzero_position(pw.u[i]);
    lead_inv[i] = pw.u[i](pos[i].first, pos[i].second).inverse();
  }
  for (Elem x = 0; x < na; ++x)
    for (Elem y = 0; y < na; ++y) {
      const Elem xy = ag.mul(x, y);
      const auto [r, col] = pos[xy];
      const CycScalar ratio = product_entry(pw.u[x], pw.u[y], r, col) * lead_inv[xy];
      pw.c.values[static_cast<std::size_t>(x) * na + y] = exponent_in(ratio, m);
    }
  for (Elem x = 0; x < na; ++x)
    for (Elem y : generators_of(ag))
      check_invariant(pw.u[x] * pw.u[y] == pw.u[ag.mul(x, y)].scaled(CycScalar::zeta(m, pw.c(x, y))),
                      "projective_weil: U_a U_b is not a scalar multiple of U_ab");
  check_invariant(!pw.c.violation(), "projective_weil: cocycle identity fails");
  return pw;
}

bool verify_linearization(const ProjectiveWeil& pw, const WeilLinearization& lin) {
  const heis::HeisenbergGroup& g = pw.heis.group;
  const grp::FinGroup& ag = *pw.a.group;
  if (lin.w.size() != ag.order()) return false;
  if (!(lin.w[ag.identity()] == CycMatrix::identity(pw.heis.rep.dim, 1))) return false;
  const auto pgens = heis_generators(g);
  for (std::size_t i = 0; i < ag.order(); ++i) {
    const auto perm = element_permutation(g, pw.a.elements[i]);
    for (Elem x : pgens)
      if (!(lin.w[i] * pw.heis.rep.mats[x].dense() == pw.heis.rep.mats[perm[x]].dense() * lin.w[i])) return false;
  }
  for (Elem x = 0; x < ag.order(); ++x)
    for (Elem y : generators_of(ag))
      if (!(lin.w[x] * lin.w[y] == lin.w[ag.mul(x, y)])) return false;
  return true;
}

LinearizeResult linearize(const ProjectiveWeil& pw) {
  LinearizeResult out;
  const grp::FinGroup& ag = *pw.a.group;
  const i64 e = exponent_of_abelianization(ag);
  const i64 n = pw.c.modulus * e;
  if (n > 4096) throw ResourceError("linearize: scalar modulus exceeds 4096");
  out.modulus = n;
  grp::Cocycle2 cn{pw.c.group, n, pw.c.values};
  for (auto& v : cn.values) v *= e;
  out.certificate = grp::coboundary_solve(cn);
  if (!out.certificate.solvable) return out;
  WeilLinearization lin;
  lin.conductor = std::lcm(pw.conductor, static_cast<int>(n));
  for (std::size_t a = 0; a < ag.order(); ++a)
    lin.w.push_back(promote(pw.u[a], lin.conductor).scaled(CycScalar::zeta(static_cast<int>(n), -out.certificate.cochain[a])));
  check_invariant(verify_linearization(pw, lin), "linearize: rescaled intertwiners are not a representation");
  out.linearization = std::move(lin);
  return out;
}

bool TwistCharacter::trivial() const {
  for (i64 x : exponents)
    if (zmod::mod_norm(x, modulus) != 0) return false;
  return true;
}

std::optional<TwistCharacter> twist_between(const ProjectiveWeil& pw, const WeilLinearization& w1,
                                            const WeilLinearization& w2) {
  const grp::FinGroup& ag = *pw.a.group;
  TwistCharacter chi;
  chi.modulus = std::lcm(std::lcm(w1.conductor, w2.conductor), 2);
  for (std::size_t a = 0; a < ag.order(); ++a) {
    const auto [i, j] = first_nonzero_position(w1.w[a]);
    if (w2.w[a](i, j).is_zero()) return std::nullopt;
    const CycScalar r = w2.w[a](i, j) / w1.w[a](i, j);
    if (!(w1.w[a].scaled(r) == w2.w[a])) return std::nullopt;
    const i64 e = r.to_conductor(static_cast<int>(chi.modulus)).root_of_unity_exponent();
    if (e < 0) return std::nullopt;
    chi.exponents.push_back(e);
  }
  for (Elem x = 0; x < ag.order(); ++x)
    for (Elem y : generators_of(ag))
      if (zmod::mod_norm(chi.exponents[x] + chi.exponents[y] - chi.exponents[ag.mul(x, y)], chi.modulus) != 0)
        return std::nullopt;
  return chi;
}

heis::Splitting polarization_lift(const reps::HeisenbergRep& rep) {
  const heis::HeisenbergGroup& g = rep.group;
  const std::uint32_t p = g.p();
  heis::Splitting s;
  s.basis = rep.polarization.plus;
  const unsigned k = static_cast<unsigned>(s.basis.size());
  const gf::u64 count = gf::space_size(p, k, gf::u64{1} << 20);
  for (gf::u64 idx = 0; idx < count; ++idx) {
    const gf::FpVector c = gf::vector_at(idx, k, p);
    gf::FpVector w(g.dim(), 0);
    for (unsigned i = 0; i < k; ++i) w = gf::vadd(w, gf::vscale(s.basis[i], c[i], p), p);
    s.elements.push_back({heis::splitting_correction(g, s.basis, c), w});
  }
  return s;
}

AutGroup polarization_stabilizer(const reps::HeisenbergRep& rep) {
  const auto g = autz::share(rep.group);
  const auto lift = polarization_lift(rep);
  const AutGroup full = autz::full_automorphism_group(g);
  std::vector<CentralAutomorphism> members;
  for (const auto& f : full.elements)
    if (autz::stabilizer_membership(f, lift, rep.polarization.zero).member) members.push_back(f);
  AutGroup out = autz::generate(g, members);
  check_invariant(out.elements.size() == members.size(), "polarization stabilizer is not closed");
  return out;
}

PolarizationResult linearize_via_polarization(const ProjectiveWeil& pw) {
  PolarizationResult out;
  const reps::HeisenbergRep& hr = pw.heis;
  const heis::HeisenbergGroup& g = hr.group;
  const heis::Splitting lift = polarization_lift(hr);
  for (std::size_t i = 0; i < pw.a.elements.size(); ++i) {
    out.membership = autz::stabilizer_membership(pw.a.elements[i], lift, hr.polarization.zero);
    if (!out.membership.member) {
      out.violating = static_cast<Elem>(i);
      return out;
    }
  }
  const std::size_t dim = hr.rep.dim;
  const std::size_t ncos = hr.coset_reps.size();
  const std::size_t d0 = dim / ncos;
  const int cond = hr.rep.conductor;
  WeilLinearization lin;
  lin.conductor = cond;
  for (const auto& f : pw.a.elements) {
    reps::MonoMatrix w;
    w.conductor = cond;
    w.rows.resize(dim);
    w.exps.resize(dim);
    for (std::size_t b = 0; b < ncos; ++b) {
      const heis::HeisElement t{0, hr.coset_reps[b]};
      const reps::MonoMatrix& back = hr.rep.mats[g.index(g.inv(t))];
      const reps::MonoMatrix& fwd = hr.rep.mats[g.index(f.apply(t))];
      for (std::size_t j = b * d0; j < (b + 1) * d0; ++j) {
        const std::uint32_t r1 = back.rows[j];
        check_invariant(r1 < d0, "linearize_via_polarization: coset block does not return to the base block");
        w.rows[j] = fwd.rows[r1];
        w.exps[j] = (back.exps[j] + fwd.exps[r1]) % static_cast<std::uint32_t>(cond);
      }
    }
    lin.w.push_back(w.dense());
  }
  check_invariant(verify_linearization(pw, lin), "linearize_via_polarization: induced action is not a linearization");
  out.linearization = std::move(lin);
  return out;
}

RLinearization r_linearize(const ProjectiveWeil& pw) {
  require(pw.heis.group.p() == 2, "r_linearize: requires p = 2");
  const LinearizeResult lr = linearize(pw);
  require(lr.linearization.has_value(), "r_linearize: the projective Weil representation is not linearizable on A");
  const WeilLinearization& base = *lr.linearization;
  const auto rs = reps::r_structure(pw.heis.rep);
  check_invariant(rs.has_value(), "r_linearize: Heisenberg representation has no R-structure");
  const grp::FinGroup& ag = *pw.a.group;
  const int l = std::lcm(std::lcm(base.conductor, rs->j.max_conductor()), 2);
  const CycMatrix jinv = rs->j.inverse();

  std::vector<i64> mu(ag.order());
  for (std::size_t a = 0; a < ag.order(); ++a) {
    const CycMatrix x = rs->j * base.w[a].conj() * jinv;
    const auto [i, j] = first_nonzero_position(base.w[a]);
    const CycScalar s = x(i, j) / base.w[a](i, j);
    check_invariant(base.w[a].scaled(s) == x, "r_linearize: J conj(W) J^-1 is not a multiple of W");
    mu[a] = exponent_in(s, l);
  }
  const i64 two_l = 2 * static_cast<i64>(l);
  if (two_l > 4096) throw ResourceError("r_linearize: conductor exceeds 4096");
  std::optional<std::vector<i64>> lambda;
  std::size_t found = 0;
  for (const auto& h : grp::homomorphisms_to_cyclic(ag, two_l)) {
    bool ok = true;
    for (std::size_t a = 0; a < ag.order() && ok; ++a) ok = zmod::mod_norm(2 * h[a] - 2 * mu[a], two_l) == 0;
    if (!ok) continue;
    ++found;
    if (!lambda) lambda = h;
  }
  require(lambda.has_value(), "r_linearize: no R-linearization exists on A");

  RLinearization out;
  out.j = *rs;
  out.lin.flavor = rs->sign > 0 ? Flavor::real : Flavor::quaternionic;
  out.lin.conductor = static_cast<int>(two_l);
  for (std::size_t a = 0; a < ag.order(); ++a)
    out.lin.w.push_back(promote(base.w[a], out.lin.conductor).scaled(CycScalar::zeta(out.lin.conductor, (*lambda)[a])));
  for (const auto& w : out.lin.w)
    check_invariant(w * rs->j == rs->j * w.conj(), "r_linearize: rescaled intertwiner does not commute with J");
  check_invariant(verify_linearization(pw, out.lin), "r_linearize: result is not a linearization");
  out.order_two_characters = grp::homomorphisms_to_cyclic(ag, 2).size();
  out.solutions_found = found;
  check_invariant(found == out.order_two_characters, "r_linearize: R-linearizations do not form one orbit of order-two characters");
  out.unique = out.order_two_characters == 1;
  return out;
}

GerardinResult gerardin_weil(std::uint32_t p, unsigned n, const std::vector<gf::FpMatrix>& sp_gens, std::uint32_t psi) {
  require(p != 2, "gerardin_weil: requires p odd");
  const autz::HeisPtr h = autz::share(heis::HeisenbergGroup::standard_model(p, n, heis::HeisType::odd));
  std::vector<CentralAutomorphism> gens;
  for (const auto& m : sp_gens) gens.push_back(autz::section_odd(h, m));
  const AutGroup a = autz::generate(h, gens, 2048);
  const ProjectiveWeil pw = projective_weil(reps::heisenberg_rep(*h, psi), a);
  const LinearizeResult lr = linearize(pw);
  check_invariant(lr.linearization.has_value(), "gerardin_weil: sectioned subgroup is not linearizable");
  GerardinResult out;
  out.character_modulus = exponent_of_abelianization(*a.group);
  out.characters = grp::homomorphisms_to_cyclic(*a.group, out.character_modulus);
  for (const auto& chi : out.characters) {
    WeilLinearization w;
    w.conductor = std::lcm(lr.linearization->conductor, static_cast<int>(out.character_modulus));
    for (std::size_t x = 0; x < a.elements.size(); ++x)
      w.w.push_back(promote(lr.linearization->w[x], w.conductor)
                        .scaled(CycScalar::zeta(static_cast<int>(out.character_modulus), chi[x])));
    check_invariant(verify_linearization(pw, w), "gerardin_weil: twisted linearization fails");
    out.linearizations.push_back(std::move(w));
  }
  out.count = out.linearizations.size();
  return out;
}

std::size_t count_linearizations(const ProjectiveWeil& pw) {
  const LinearizeResult lr = linearize(pw);
  if (!lr.linearization) return 0;
  const grp::FinGroup& ag = *pw.a.group;
  return grp::homomorphisms_to_cyclic(ag, exponent_of_abelianization(ag)).size();
}

namespace {

void check_special_hom(const AutGroup& a, const heis::HeisenbergGroup& target, const SpecialIsoHom& f,
                       const std::string& name) {
  const heis::HeisenbergGroup& g = *a.heis;
  require(f.phi.size() == g.order(), name + ": table size differs from |P|");
  std::vector<char> seen(target.order(), 0);
  for (gf::u64 i = 0; i < g.order(); ++i) {
    const heis::HeisElement x = g.element(i);
    require(f.phi[i].v.size() == target.dim() && f.phi[i].a < target.p(), name + ": malformed image");
    require(f.phi[i].v == x.v, name + ": induced map on V is not the identity");
    const auto t = target.index(f.phi[i]);
    require(!seen[t], name + ": not injective");
    seen[t] = 1;
  }
  const auto gens = heis_generators(g);
  for (gf::u64 i = 0; i < g.order(); ++i)
    for (Elem y : gens) {
      const heis::HeisElement xy = g.mul(g.element(i), g.element(y));
      require(f.phi[g.index(xy)] == target.mul(f.phi[i], f.phi[y]), name + ": not a homomorphism on P");
    }
  for (const auto& aut : a.elements)
    for (Elem x : gens) {
      const heis::HeisElement img = f.phi[g.index(aut.apply(g.element(x)))];
      const heis::HeisElement expect{f.phi[x].a, aut.m * f.phi[x].v};
      require(img == expect, name + ": not equivariant for the projection of A");
    }
}

}  // namespace

SpecialIsoCheck special_iso_uniqueness_check(const AutGroup& a, const heis::HeisenbergGroup& target,
                                             const SpecialIsoHom& f1, const SpecialIsoHom& f2) {
  const heis::HeisenbergGroup& g = *a.heis;
  require(g.p() != 2, "special_iso_uniqueness_check: requires p odd");
  require(g.dim() > 0, "special_iso_uniqueness_check: requires dim V > 0");
  require(target.p() == g.p() && target.omega() == g.omega(), "special_iso_uniqueness_check: target has a different omega");
  check_special_hom(a, target, f1, "f1");
  check_special_hom(a, target, f2, "f2");
  const auto pgens = heis_generators(g);
  const auto agens = generators_of(*a.group);
  SpecialIsoCheck out;
  for (gf::u64 hi = 0; hi < g.order(); ++hi) {
    ++out.candidates_tested;
    const heis::HeisElement h = g.element(hi);
    const heis::HeisElement hinv = g.inv(h);
    bool ok = true;
    for (Elem x : pgens) {
      const heis::HeisElement c = g.mul(g.mul(h, g.element(x)), hinv);
      if (!(f2.phi[x] == f1.phi[g.index(c)])) {
        ok = false;
        break;
      }
    }
    for (std::size_t k = 0; k < agens.size() && ok; ++k) ok = a.elements[agens[k]].apply(h) == h;
    if (ok) {
      out.h = h;
      return out;
    }
  }
  return out;
}

}  // namespace heisweil::weil
