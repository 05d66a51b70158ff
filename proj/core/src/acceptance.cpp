#include "heisweil/acceptance.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "heisweil/autz.hpp"
#include "heisweil/errors.hpp"
#include "heisweil/forms.hpp"
#include "heisweil/grp.hpp"
#include "heisweil/heis.hpp"
#include "heisweil/reps.hpp"
#include "heisweil/rootdata.hpp"
#include "heisweil/weil.hpp"

namespace heisweil::acceptance {

namespace {

using heis::HeisenbergGroup;
using heis::HeisType;
using gf::u32;
using gf::u64;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

// Symmetries of a square on vertices 0..3.
grp::GroupPtr dihedral8() {
  using P = std::array<std::uint8_t, 4>;
  struct H {
    std::size_t operator()(const P& p) const { return p[0] | p[1] << 2 | p[2] << 4 | p[3] << 6; }
  };
  auto mul = [](const P& a, const P& b) {
    P c{};
    for (int i = 0; i < 4; ++i) c[i] = a[b[i]];
    return c;
  };
  return grp::materialize<P, decltype(mul)&, H>({P{1, 2, 3, 0}, P{0, 3, 2, 1}}, P{0, 1, 2, 3}, mul).group;
}

// Unit quaternions +-1, +-i, +-j, +-k encoded as sign * 4 + unit.
grp::GroupPtr quaternion8() {
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<grp::Elem> table(64);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int ua = a % 4, ub = b % 4;
      const int s = (a / 4 + b / 4 + sign[ua][ub]) % 2;
      table[a * 8 + b] = static_cast<grp::Elem>(s * 4 + unit[ua][ub]);
    }
  return std::make_shared<const grp::FinGroup>(8, table);
}

std::string yes(bool b) { return b ? "yes" : "no"; }

Outcome heisenberg_dichotomy() {
  Outcome o;
  for (unsigned n = 1; n <= 3; ++n)
    for (HeisType t : {HeisType::positive, HeisType::negative}) {
      const auto g = HeisenbergGroup::standard_model(2, n, t);
      o.expect(heis::classify(g) == t, "classify(2," + std::to_string(n) + "," + heis::to_string(t) + ")");
    }
  const auto d8 = HeisenbergGroup::standard_model(2, 1, HeisType::positive);
  const auto q8 = HeisenbergGroup::standard_model(2, 1, HeisType::negative);
  const bool d8_iso = grp::find_isomorphism(*d8.fin_group(), *dihedral8()).has_value();
  const bool q8_iso = grp::find_isomorphism(*q8.fin_group(), *quaternion8()).has_value();
  const bool crossed = grp::find_isomorphism(*d8.fin_group(), *quaternion8()).has_value();
  o.expect(d8_iso, "positive order-8 model ~ D8");
  o.expect(q8_iso, "negative order-8 model ~ Q8");
  o.expect(!crossed, "D8 and Q8 distinguished");
  const auto dd = heis::central_product(d8, d8);
  const auto qq = heis::central_product(q8, q8);
  const bool same = grp::find_isomorphism(*dd.fin_group(), *qq.fin_group()).has_value();
  o.expect(same, "D8*D8 ~ Q8*Q8");
  o.expect(heis::classify(dd) == HeisType::positive && heis::classify(qq) == HeisType::positive,
           "both central products positive");
  o.detail << "6 models classified; D8 iso " << yes(d8_iso) << ", Q8 iso " << yes(q8_iso) << ", D8*D8 ~ Q8*Q8 "
           << yes(same);
  return o;
}

struct Model {
  std::uint32_t p;
  unsigned n;
  HeisType type;
};

std::vector<Model> model_grid() {
  std::vector<Model> out;
  for (unsigned n = 1; n <= 4; ++n) {
    out.push_back({2, n, HeisType::positive});
    out.push_back({2, n, HeisType::negative});
  }
  for (unsigned n = 1; n <= 2; ++n) out.push_back({3, n, HeisType::odd});
  out.push_back({5, 1, HeisType::odd});
  return out;
}

Outcome stone_von_neumann() {
  Outcome o;
  std::size_t checked = 0;
  for (const Model& m : model_grid()) {
    const auto g = HeisenbergGroup::standard_model(m.p, m.n, m.type);
    for (std::uint32_t psi = 1; psi < m.p; ++psi) {
      const auto r = reps::verify_stone_von_neumann(g, psi);
      o.expect(r.ok(), "SvN p=" + std::to_string(m.p) + " n=" + std::to_string(m.n) + " psi=" + std::to_string(psi));
      ++checked;
    }
  }
  o.detail << checked << " (model, psi) pairs";
  return o;
}

Outcome frobenius_schur_table() {
  Outcome o;
  std::size_t checked = 0;
  for (const Model& m : model_grid()) {
    const auto g = HeisenbergGroup::standard_model(m.p, m.n, m.type);
    for (std::uint32_t psi = 1; psi < m.p; ++psi) {
      const auto rep = reps::heisenberg_rep(g, psi);
      const int expected = m.type == HeisType::positive ? 1 : m.type == HeisType::negative ? -1 : 0;
      const std::string tag = "p=" + std::to_string(m.p) + " n=" + std::to_string(m.n) + " psi=" + std::to_string(psi);
      o.expect(reps::frobenius_schur(rep.rep) == expected, "indicator " + tag);
      const auto j = reps::r_structure(rep.rep);
      if (expected == 0) {
        o.expect(!j.has_value(), "no J for " + tag);
      } else {
        o.expect(j.has_value(), "J exists for " + tag);
      }
      if (expected != 0 && j) {
        const auto id = cyc::CycMatrix::identity(rep.rep.dim, 1);
        o.expect(j->j * j->j.conj() == id.scaled(cyc::CycScalar::rational(1, expected)), "J conj(J) for " + tag);
        for (grp::Elem x : grp::generators(*rep.rep.group, grp::whole(*rep.rep.group))) {
          const auto rho = rep.rep.mats[x].dense();
          o.expect(rho * j->j == j->j * rho.conj(), "J intertwines for " + tag);
        }
      }
      ++checked;
    }
  }
  o.detail << checked << " (model, psi) pairs";
  return o;
}

Outcome aut_structure() {
  Outcome o;
  const auto d8 = HeisenbergGroup::standard_model(2, 1, HeisType::positive);
  const auto q8 = HeisenbergGroup::standard_model(2, 1, HeisType::negative);
  const auto rd = autz::exact_sequence_report(d8);
  const auto rq = autz::exact_sequence_report(q8);
  o.expect(rd.aut_order == 8 && rd.splits == std::optional<bool>(true), "Aut_Z(D8) order 8 and split");
  o.expect(rq.aut_order == 24 && rq.splits == std::optional<bool>(true), "Aut_Z(Q8) order 24 and split");
  o.detail << "|Aut_Z(D8)|=" << rd.aut_order << " |Aut_Z(Q8)|=" << rq.aut_order;
  for (HeisType t : {HeisType::positive, HeisType::negative}) {
    const auto g = HeisenbergGroup::standard_model(2, 2, t);
    const auto r = autz::exact_sequence_report(g);
    const u64 expected = t == HeisType::positive ? 72 : 120;
    const std::string tag = heis::to_string(t);
    o.expect(r.kernel_order == 16 && r.kernel_is_inner, "kernel V of order 16 (" + tag + ")");
    o.expect(r.image_order == expected && r.image_is_full, "image order " + std::to_string(expected) + " (" + tag + ")");
    o.expect(r.splits.has_value(), "splits flag computed (" + tag + ")");
    o.detail << "; " << tag << " 32: kernel " << r.kernel_order << ", image " << r.image_name << " " << r.image_order
             << ", splits " << (r.splits ? yes(*r.splits) : "?") << " (dimension rule predicts "
             << yes(r.fact_predicts_split) << ", rank rule predicts " << yes(r.intro_predicts_split) << ")";
  }
  return o;
}

Outcome inner_obstruction() {
  Outcome o;
  for (unsigned n : {1u, 2u})
    for (HeisType t : {HeisType::positive, HeisType::negative}) {
      const auto g = autz::share(HeisenbergGroup::standard_model(2, n, t));
      const auto a = autz::inner_subgroup(g);
      const auto pw = weil::projective_weil(reps::heisenberg_rep(*g, 1), a);
      const auto solve = grp::coboundary_solve(pw.c);
      const auto lin = weil::linearize(pw);
      const std::string tag = "order " + std::to_string(g->order()) + " " + heis::to_string(t);
      o.expect(a.elements.size() == g->v_size(), "inner subgroup has order |V| (" + tag + ")");
      o.expect(!solve.solvable && !lin.certificate.solvable, "cocycle is not a coboundary (" + tag + ")");
      o.detail << tag << ": class nontrivial " << yes(!lin.certificate.solvable) << ", asymmetric witness "
               << yes(lin.certificate.asymmetric_pair.has_value()) << "; ";
    }
  return o;
}

Outcome constructive_extension() {
  Outcome o;
  const auto g = autz::share(HeisenbergGroup::standard_model(2, 2, HeisType::positive));
  const auto rep = reps::heisenberg_rep(*g, 1);
  const auto p_group = weil::polarization_stabilizer(rep);
  const grp::Subgroup s2 = grp::sylow(*p_group.group, 2);
  std::vector<autz::CentralAutomorphism> gens;
  for (grp::Elem x : grp::generators(*p_group.group, s2)) gens.push_back(p_group.elements[x]);
  const auto a = autz::generate(g, gens);
  o.expect(a.elements.size() > 1, "A is nontrivial");
  const auto pw = weil::projective_weil(rep, a);
  const auto pol = weil::linearize_via_polarization(pw);
  o.expect(pol.linearization.has_value(), "polarization path succeeds");
  const auto lin = weil::linearize(pw);
  o.expect(lin.linearization.has_value(), "cocycle path succeeds");
  if (pol.linearization) o.expect(weil::verify_linearization(pw, *pol.linearization), "restriction to P is the Heisenberg representation");
  std::optional<weil::TwistCharacter> tw;
  if (pol.linearization && lin.linearization) tw = weil::twist_between(pw, *lin.linearization, *pol.linearization);
  o.expect(tw.has_value(), "paths agree up to a character of A");
  o.detail << "|stabilizer|=" << p_group.elements.size() << ", |A|=" << a.elements.size() << ", twist "
           << (tw ? (tw->trivial() ? "trivial" : "nontrivial") : "none");
  return o;
}

Outcome gerardin_count() {
  Outcome o;
  for (std::uint32_t p : {3u, 5u}) {
    const gf::FpMatrix s(p, 2, 2, {1, 1, 0, 1}), l(p, 2, 2, {1, 0, 1, 1});
    const auto r = weil::gerardin_weil(p, 1, {s, l});
    const std::size_t expected = p == 3 ? 3 : 1;
    o.expect(r.count == expected, "Sp2(F" + std::to_string(p) + ") count " + std::to_string(expected));
    o.detail << "Sp2(F" << p << "): " << r.count << " linearizations; ";
  }
  return o;
}

Outcome zero_counts() {
  Outcome o;
  for (std::uint32_t q : {2u, 4u, 8u}) {
    unsigned m = 0;
    while ((1u << m) < q) ++m;
    const auto form = forms::norm_trace_form(q);
    const u64 zeros = forms::count_zeros(form);
    const u64 formula = (q / 2 - 1) * (q + 1) + 1;
    const u64 nonsplit = (u64{1} << (2 * m - 1)) - (u64{1} << (m - 1));
    o.expect(zeros == formula && zeros == nonsplit, "q=" + std::to_string(q) + " count");
    o.expect(forms::classify(form).kind == forms::FormKind::nonsplit, "q=" + std::to_string(q) + " nonsplit");
    o.detail << "q=" << q << ": " << zeros << "; ";
  }
  return o;
}

Outcome appendix_d() {
  Outcome o;
  const auto r = rootdata::appendix_d_report();
  o.expect(r.weyl_order == 192, "|W(D4)| = 192");
  o.expect(r.stabilizer_order == 32 && !r.stabilizer_abelian && r.stabilizer_normal, "stabilizer order 32, nonabelian, normal");
  o.expect(r.equals_sign_klein_subgroup && r.semidirect_isomorphic, "stabilizer ~ (Z/2)^3 |x (Z/2)^2");
  o.expect(r.ge1 && !r.ge2, "GE1 holds, GE2 fails");
  o.detail << "|W|=" << r.weyl_order << " |stab|=" << r.stabilizer_order << " normal " << yes(r.stabilizer_normal)
           << " GE1 " << yes(r.ge1) << " GE2 " << yes(r.ge2);
  return o;
}

Outcome torsion() {
  Outcome o;
  const std::vector<std::pair<std::string, std::set<u32>>> table = {
      {"A_n", {}}, {"B_n", {2}}, {"C_n", {}}, {"D_n", {2}}, {"G_2", {2}},
      {"F_4", {2, 3}}, {"E_6", {2, 3}}, {"E_7", {2, 3}}, {"E_8", {2, 3, 5}}};
  const auto rows = rootdata::torsion_table();
  o.expect(rows.size() == table.size(), "table size");
  for (std::size_t i = 0; i < rows.size() && i < table.size(); ++i)
    o.expect(rows[i].family == table[i].first && rows[i].primes == table[i].second, "row " + table[i].first);
  o.expect(rootdata::torsion_primes("E8").size() == 3, "E8");
  o.expect(rootdata::torsion_primes("A3", 4) == std::set<u32>{2}, "PGL4");
  o.expect(rootdata::torsion_primes("A5").empty(), "A_n trivial pi1");
  std::size_t subsystems = 0;
  for (const char* label : {"A1", "A2", "A3", "A4", "B3", "B4", "C2", "C3", "C4", "D4", "G2", "F4"}) {
    const auto r = rootdata::make_root_system(label);
    const auto ambient = rootdata::torsion_primes(r.label);
    for (unsigned mask = 1; mask < (1u << r.rank); ++mask) {
      std::vector<unsigned> subset;
      for (unsigned i = 0; i < r.rank; ++i)
        if (mask >> i & 1u) subset.push_back(i);
      const auto levi = rootdata::torsion_primes(rootdata::levi_label(r, subset));
      bool inside = true;
      for (u32 p : levi) inside = inside && ambient.count(p);
      o.expect(inside, std::string("Levi monotonicity in ") + label);
      ++subsystems;
    }
  }
  o.detail << "9 table rows; " << subsystems << " Levi subsystems";
  return o;
}

Outcome appendix_c() {
  Outcome o;
  using rootdata::MatrixGroupType;
  for (MatrixGroupType t : {MatrixGroupType::sl2, MatrixGroupType::sl3, MatrixGroupType::sp4})
    for (u32 q : {4u, 5u, 7u})
      o.expect(rootdata::unipotent_commutator_check(t, q).holds,
               rootdata::to_string(t) + "(F" + std::to_string(q) + ") U in [P,U]");
  for (u32 q : {2u, 3u})
    o.expect(!rootdata::unipotent_commutator_check(MatrixGroupType::sl2, q).holds,
             "SL2(F" + std::to_string(q) + ") inclusion fails");
  const auto ab4 = rootdata::abelianization_order_check(MatrixGroupType::sl2, 4);
  const auto ab2 = rootdata::abelianization_order_check(MatrixGroupType::sl2, 2);
  o.expect(ab4 == 1, "SL2(F4) perfect");
  o.expect(ab2 == 2, "SL2(F2)^ab of order 2");
  const auto s = rootdata::scalar_restriction_suite(0, 100);
  o.expect(s.instances == 100 && s.passed(), "scalar restriction suite");
  o.detail << "commutator grid ok " << yes(o.ok) << "; |SL2(F4)^ab|=" << ab4 << " |SL2(F2)^ab|=" << ab2 << "; suite "
           << s.instances << " instances, " << s.hypothesis_holds << " with U in [P,U], " << s.violations
           << " violations";
  return o;
}

struct Criterion {
  const char* name;
  double budget;
  Outcome (*run)();
};

const std::array<Criterion, 11> kCriteria{{
    {"Heisenberg dichotomy", 10, heisenberg_dichotomy},
    {"Stone-von Neumann", 60, stone_von_neumann},
    {"Frobenius-Schur table", 60, frobenius_schur_table},
    {"Aut_Z structure", 300, aut_structure},
    {"Linearization obstruction", 120, inner_obstruction},
    {"Constructive extension", 120, constructive_extension},
    {"Gerardin count", 300, gerardin_count},
    {"Zero-count formula", 10, zero_counts},
    {"Spin8 Weyl stabilizer", 30, appendix_d},
    {"Torsion primes", 5, torsion},
    {"Commutator spot-checks", 300, appendix_c},
}};

}  // namespace

CriterionResult run_criterion(int id) {
  require(id >= 1 && id <= static_cast<int>(kCriteria.size()), "acceptance criterion id must be in 1..11");
  const Criterion& crit = kCriteria[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.name = crit.name;
  r.budget_seconds = crit.budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = crit.run();
    r.checks_passed = o.ok;
    r.detail = o.detail.str();
    while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) r.detail.pop_back();
  } catch (const std::exception& e) {
    r.checks_passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(kCriteria.size()); ++id) {
    out.push_back(run_criterion(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.2f s / %.0f s", r.seconds, r.budget_seconds);
  std::ostringstream os;
  os << (r.passed() ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " (" << timing << ")";
  if (r.checks_passed && !r.passed()) os << " over budget";
  if (!r.detail.empty()) os << ": " << r.detail;
  return os.str();
}

}  // namespace heisweil::acceptance
