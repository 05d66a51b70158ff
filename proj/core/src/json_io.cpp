#include "heisweil/json_io.hpp"

#include <numeric>

#include "heisweil/errors.hpp"

namespace heisweil::json_io {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("JSON: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("JSON: field '") + key + "' has the wrong type");
  }
}

}  // namespace

json encode(const gf::FpMatrix& m) {
  return {{"p", m.p()}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

gf::FpMatrix decode_fp_matrix(const json& j) {
  const auto p = field<gf::u32>(j, "p");
  gf::validate_prime(p);
  const auto rows = field<std::size_t>(j, "rows"), cols = field<std::size_t>(j, "cols");
  auto data = field<std::vector<gf::u32>>(j, "data");
  require(data.size() == rows * cols, "JSON: matrix data has the wrong length");
  for (gf::u32 x : data) require(x < p, "JSON: matrix entry out of range");
  return gf::FpMatrix(p, rows, cols, std::move(data));
}

json encode(const forms::BilinearForm& b) {
  return {{"p", b.p}, {"dim", b.dim}, {"gram", b.gram.data()}};
}

forms::BilinearForm decode_bilinear(const json& j) {
  const auto p = field<gf::u32>(j, "p");
  const auto dim = field<unsigned>(j, "dim");
  gf::validate_prime(p);
  auto gram = field<std::vector<gf::u32>>(j, "gram");
  require(gram.size() == std::size_t{dim} * dim, "JSON: gram has the wrong length");
  for (gf::u32 x : gram) require(x < p, "JSON: gram entry out of range");
  return forms::BilinearForm(gf::FpMatrix(p, dim, dim, std::move(gram)));
}

json encode(const forms::QuadraticForm& q) {
  return {{"p", q.p}, {"dim", q.dim}, {"upper", q.upper.data()}, {"diag", q.diag}};
}

forms::QuadraticForm decode_quadratic(const json& j) {
  const auto p = field<gf::u32>(j, "p");
  const auto dim = field<unsigned>(j, "dim");
  gf::validate_prime(p);
  forms::QuadraticForm q(p, dim);
  const auto upper = field<std::vector<gf::u32>>(j, "upper");
  const auto diag = field<std::vector<gf::u32>>(j, "diag");
  require(upper.size() == std::size_t{dim} * dim && diag.size() == dim, "JSON: quadratic form has the wrong shape");
  for (unsigned r = 0; r < dim; ++r) {
    require(diag[r] < p, "JSON: diagonal entry out of range");
    q.diag[r] = diag[r];
    for (unsigned c = 0; c < dim; ++c) {
      const gf::u32 x = upper[r * dim + c];
      require(x < p, "JSON: cross term out of range");
      require(c > r || x == 0, "JSON: cross terms must be strictly upper triangular");
      q.upper.set(r, c, x);
    }
  }
  return q;
}

json encode(const forms::FormClass& c) {
  return {{"kind", forms::to_string(c.kind)}, {"witt_index", c.witt_index}};
}

forms::FormClass decode_form_class(const json& j) {
  forms::FormClass c;
  const auto kind = field<std::string>(j, "kind");
  if (kind == "split") c.kind = forms::FormKind::split;
  else if (kind == "nonsplit") c.kind = forms::FormKind::nonsplit;
  else if (kind == "degenerate") c.kind = forms::FormKind::degenerate;
  else throw DomainError("JSON: unknown form kind '" + kind + "'");
  c.witt_index = field<unsigned>(j, "witt_index");
  return c;
}

json encode(const grp::FinGroup& g) { return {{"order", g.order()}, {"table", g.table()}}; }

grp::FinGroup decode_group(const json& j) {
  const auto order = field<std::size_t>(j, "order");
  require(order >= 1 && order <= grp::kMaxTableOrder, "JSON: group order out of range");
  auto table = field<std::vector<grp::Elem>>(j, "table");
  require(table.size() == order * order, "JSON: group table has the wrong length");
  return grp::FinGroup(order, std::move(table));
}

json encode(const grp::Subgroup& h) { return json(h.elems); }

grp::Subgroup decode_subgroup(const grp::FinGroup& g, const json& j) {
  require(j.is_array(), "JSON: subgroup must be an index list");
  auto elems = j.get<std::vector<grp::Elem>>();
  for (grp::Elem x : elems) require(x < g.order(), "JSON: subgroup index out of range");
  return grp::make_subset(g, std::move(elems));
}

json encode(const grp::Cocycle2& c) { return {{"modulus", c.modulus}, {"values", c.values}}; }

grp::Cocycle2 decode_cocycle(grp::GroupPtr g, const json& j) {
  grp::Cocycle2 c;
  c.group = std::move(g);
  c.modulus = field<std::int64_t>(j, "modulus");
  c.values = field<std::vector<std::int64_t>>(j, "values");
  require(c.modulus >= 1, "JSON: cocycle modulus must be positive");
  require(c.values.size() == c.group->order() * c.group->order(), "JSON: cocycle table has the wrong length");
  return c;
}

json encode(const heis::HeisenbergGroup& g) {
  return {{"p", g.p()}, {"n", g.n()}, {"gram", g.B().gram.data()}, {"type", heis::to_string(g.type())},
          {"order", g.order()}};
}

heis::HeisenbergGroup decode_heisenberg(const json& j) {
  const auto p = field<gf::u32>(j, "p");
  const auto n = field<unsigned>(j, "n");
  json bj = {{"p", p}, {"dim", 2 * n}, {"gram", j.at("gram")}};
  auto g = heis::HeisenbergGroup::build(decode_bilinear(bj));
  if (j.contains("type"))
    require(heis::parse_type(field<std::string>(j, "type")) == g.type(), "JSON: recorded type does not match the form");
  return g;
}

json encode(const heis::HeisElement& x) { return {{"a", x.a}, {"v", x.v}}; }

heis::HeisElement decode_heis_element(const json& j) {
  return {field<gf::u32>(j, "a"), field<std::vector<gf::u32>>(j, "v")};
}

json encode(const cyc::CycScalar& s) {
  json coeffs = json::array();
  for (cyc::i64 num : s.numerators()) {
    const cyc::i64 g = std::gcd(num, s.denominator());
    coeffs.push_back({num / (g == 0 ? 1 : g), s.denominator() / (g == 0 ? 1 : g)});
  }
  return {{"N", s.conductor()}, {"coeffs", coeffs}};
}

cyc::CycScalar decode_cyc_scalar(const json& j) {
  const int n = field<int>(j, "N");
  require(n >= 1, "JSON: conductor must be positive");
  const auto pairs = field<std::vector<std::pair<cyc::i64, cyc::i64>>>(j, "coeffs");
  cyc::i64 den = 1;
  for (const auto& [num, d] : pairs) {
    require(d > 0, "JSON: denominators must be positive");
    den = std::lcm(den, d);
  }
  std::vector<cyc::i64> num;
  for (const auto& [a, d] : pairs) num.push_back(a * (den / d));
  return cyc::CycScalar::from_coefficients(n, std::move(num), den);
}

json encode(const cyc::CycMatrix& m) {
  json entries = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) entries.push_back(encode(m(r, c)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

cyc::CycMatrix decode_cyc_matrix(const json& j) {
  const auto rows = field<std::size_t>(j, "rows"), cols = field<std::size_t>(j, "cols");
  const json& entries = j.at("entries");
  require(entries.is_array() && entries.size() == rows * cols, "JSON: matrix entries have the wrong length");
  int cond = 1;
  std::vector<cyc::CycScalar> vals;
  for (const json& e : entries) {
    vals.push_back(decode_cyc_scalar(e));
    cond = std::lcm(cond, vals.back().conductor());
  }
  cyc::CycMatrix m(rows, cols, cond);
  for (std::size_t k = 0; k < vals.size(); ++k) m.at(k / std::max<std::size_t>(cols, 1), k % std::max<std::size_t>(cols, 1)) = vals[k];
  return m;
}

json encode(const reps::MonoMatrix& m) {
  return {{"N", m.conductor}, {"rows", m.rows}, {"exps", m.exps}};
}

reps::MonoMatrix decode_mono_matrix(const json& j) {
  reps::MonoMatrix m;
  m.conductor = field<int>(j, "N");
  m.rows = field<std::vector<std::uint32_t>>(j, "rows");
  m.exps = field<std::vector<std::uint32_t>>(j, "exps");
  require(m.conductor >= 1 && m.rows.size() == m.exps.size(), "JSON: malformed monomial matrix");
  std::vector<char> hit(m.rows.size(), 0);
  for (std::size_t k = 0; k < m.rows.size(); ++k) {
    require(m.rows[k] < m.rows.size() && !hit[m.rows[k]], "JSON: monomial matrix rows are not a permutation");
    hit[m.rows[k]] = 1;
    require(m.exps[k] < static_cast<std::uint32_t>(m.conductor), "JSON: exponent out of range");
  }
  return m;
}

json encode(const reps::MonoRep& r) {
  const auto gens = grp::generators(*r.group, grp::whole(*r.group));
  json images = json::array();
  for (grp::Elem g : gens) images.push_back(encode(r.mats[g]));
  return {{"group", encode(*r.group)}, {"conductor", r.conductor}, {"dim", r.dim}, {"generators", gens},
          {"images", images}};
}

reps::MonoRep decode_mono_rep(const json& j) {
  reps::MonoRep r;
  r.group = std::make_shared<const grp::FinGroup>(decode_group(j.at("group")));
  r.conductor = field<int>(j, "conductor");
  r.dim = field<std::size_t>(j, "dim");
  const auto gens = field<std::vector<grp::Elem>>(j, "generators");
  const json& imgs = j.at("images");
  require(imgs.is_array() && imgs.size() == gens.size(), "JSON: one image per generator expected");
  std::vector<reps::MonoMatrix> gen_mats;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    require(gens[k] < r.group->order(), "JSON: generator index out of range");
    gen_mats.push_back(decode_mono_matrix(imgs[k]));
    require(gen_mats.back().dim() == r.dim && gen_mats.back().conductor == r.conductor,
            "JSON: generator image has the wrong shape");
  }
  const grp::FinGroup& g = *r.group;
  std::vector<char> set(g.order(), 0);
  r.mats.assign(g.order(), reps::MonoMatrix::identity(r.dim, r.conductor));
  set[g.identity()] = 1;
  std::vector<grp::Elem> queue{g.identity()};
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const grp::Elem y = g.mul(queue[q], gens[k]);
      reps::MonoMatrix m = r.mats[queue[q]] * gen_mats[k];
      if (!set[y]) {
        set[y] = 1;
        r.mats[y] = std::move(m);
        queue.push_back(y);
      } else {
        require(r.mats[y] == m, "JSON: generator images do not define a representation");
      }
    }
  require(queue.size() == g.order(), "JSON: generators do not generate the group");
  return r;
}

json encode(const autz::CentralAutomorphism& f) { return {{"M", encode(f.m)}, {"mu", f.mu}}; }

autz::CentralAutomorphism decode_automorphism(autz::HeisPtr g, const json& j) {
  autz::CentralAutomorphism f;
  f.group = g;
  f.m = decode_fp_matrix(j.at("M"));
  f.mu = field<std::vector<gf::u32>>(j, "mu");
  require(f.m.p() == g->p() && f.m.rows() == g->dim() && f.m.cols() == g->dim(), "JSON: automorphism matrix has the wrong shape");
  require(f.mu.size() == g->v_size(), "JSON: mu table has the wrong length");
  require(!autz::automorphism_violation(f).has_value(), "JSON: not an automorphism fixing the center");
  return f;
}

json encode(const weil::WeilLinearization& w, const autz::AutGroup& a) {
  json mats = json::array();
  json gens = json::array();
  for (grp::Elem g : a.generator_indices) {
    gens.push_back(encode(a.elements[g]));
    mats.push_back(encode(w.w[g]));
  }
  return {{"flavor", weil::to_string(w.flavor)}, {"N", w.conductor}, {"generators", gens}, {"matrices", mats},
          {"group_order", a.elements.size()}};
}

json encode(const reps::StoneVonNeumannReport& r) {
  return {{"order", r.order},
          {"conjugacy_classes", r.conjugacy_classes},
          {"expected_classes", r.expected_classes},
          {"linear_characters", r.linear_characters},
          {"dimension", r.dimension},
          {"expected_dimension", r.expected_dimension},
          {"irreducible", r.irreducible},
          {"central_character", r.central_character},
          {"restriction_isotypic", r.restriction_isotypic},
          {"count_identity", r.count_identity},
          {"ok", r.ok()}};
}

json encode(const autz::ExactSequenceReport& r) {
  json j = {{"kernel_order", r.kernel_order},
            {"image_order", r.image_order},
            {"aut_order", r.aut_order},
            {"materialized", r.materialized},
            {"kernel_is_inner", r.kernel_is_inner},
            {"image_is_full", r.image_is_full},
            {"image", r.image_name},
            {"split_predicted_by_dimension_rule", r.fact_predicts_split},
            {"split_predicted_by_rank_rule", r.intro_predicts_split}};
  j["splits"] = r.splits ? json(*r.splits) : json(nullptr);
  j["cohomology_splits"] = r.cohomology_splits ? json(*r.cohomology_splits) : json(nullptr);
  j["predictions_disagree"] = r.fact_predicts_split != r.intro_predicts_split;
  return j;
}

json encode(const grp::CoboundaryResult& r) {
  json j = {{"solvable", r.solvable}, {"kernel_rank", r.kernel.size()}, {"sylow2_order", r.sylow2_order}};
  if (r.asymmetric_pair) j["asymmetric_pair"] = {r.asymmetric_pair->first, r.asymmetric_pair->second};
  j["sylow2_solvable"] = r.sylow2_solvable ? json(*r.sylow2_solvable) : json(nullptr);
  return j;
}

json encode(const rootdata::AppendixDReport& r) {
  return {{"weyl_order", r.weyl_order},
          {"stabilizer_order", r.stabilizer_order},
          {"stabilizer_abelian", r.stabilizer_abelian},
          {"stabilizer_normal", r.stabilizer_normal},
          {"equals_sign_klein_subgroup", r.equals_sign_klein_subgroup},
          {"semidirect_isomorphic", r.semidirect_isomorphic},
          {"sum_in_twice_lattice", r.sum_in_twice_lattice},
          {"w_prime_order", r.w_prime_order},
          {"quotient_is_2_group", r.quotient_is_2_group},
          {"ge1", r.ge1},
          {"ge2", r.ge2}};
}

json encode(const rootdata::CommutatorCheck& r) {
  return {{"holds", r.holds},
          {"borel_order", r.borel_order},
          {"unipotent_order", r.unipotent_order},
          {"commutator_order", r.commutator_order}};
}

json encode(const rootdata::CentralizerResult& r) {
  return {{"centralizer_order", r.centralizer.order()},
          {"w_prime_order", r.w_prime.order()},
          {"w_h_order", r.w_h.order()},
          {"quotient_order", r.quotient_order},
          {"is_p_group", r.is_p_group},
          {"ge2", r.ge2}};
}

json encode(const rootdata::ScalarRestrictionSummary& r) {
  return {{"instances", r.instances},
          {"hypothesis_holds", r.hypothesis_holds},
          {"extensions_found", r.extensions_found},
          {"extensions_checked", r.extensions_checked},
          {"violations", r.violations},
          {"control_nontrivial", r.control_nontrivial},
          {"passed", r.passed()}};
}

}  // namespace heisweil::json_io
