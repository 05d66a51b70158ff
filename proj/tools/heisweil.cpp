#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "heisweil/acceptance.hpp"
#include "heisweil/autz.hpp"
#include "heisweil/errors.hpp"
#include "heisweil/forms.hpp"
#include "heisweil/heis.hpp"
#include "heisweil/json_io.hpp"
#include "heisweil/reps.hpp"
#include "heisweil/rootdata.hpp"
#include "heisweil/weil.hpp"

namespace {

using nlohmann::json;
using namespace heisweil;

constexpr int kExitDomain = 2;
constexpr int kExitResource = 3;
constexpr int kExitUsage = 64;

struct ModelOptions {
  std::uint32_t p = 2;
  unsigned n = 1;
  std::string type;
  std::uint32_t psi = 1;

  heis::HeisType resolved_type() const {
    if (!type.empty()) return heis::parse_type(type);
    return p == 2 ? heis::HeisType::positive : heis::HeisType::odd;
  }
  heis::HeisenbergGroup group() const { return heis::HeisenbergGroup::standard_model(p, n, resolved_type()); }
};

void add_model(CLI::App* cmd, ModelOptions& m, bool with_psi) {
  cmd->add_option("--p", m.p, "prime")->capture_default_str();
  cmd->add_option("--n", m.n, "half the dimension of V")->capture_default_str();
  cmd->add_option("--type", m.type, "odd, positive or negative (default: positive for p = 2, odd otherwise)");
  if (with_psi) cmd->add_option("--psi", m.psi, "central character exponent")->capture_default_str();
}

std::vector<std::vector<int>> parse_rows(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<int> r;
    std::stringstream rs(row);
    std::string item;
    while (std::getline(rs, item, ',')) {
      try {
        r.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw DomainError("cannot parse integer '" + item + "'");
      }
    }
    if (!r.empty()) rows.push_back(r);
  }
  return rows;
}

gf::FpMatrix parse_matrix(const std::string& text, std::uint32_t p) {
  const auto rows = parse_rows(text);
  require(!rows.empty(), "empty matrix");
  gf::FpMatrix m(p, rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == rows[0].size(), "matrix rows have different lengths");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

autz::AutGroup select_subgroup(const reps::HeisenbergRep& rep, const std::string& which, const std::string& matrix) {
  const auto g = autz::share(rep.group);
  if (which == "inner") return autz::inner_subgroup(g);
  if (which == "full") return autz::full_automorphism_group(g);
  if (which == "polarization") return weil::polarization_stabilizer(rep);
  if (which == "polarization-sylow2") {
    const auto st = weil::polarization_stabilizer(rep);
    std::vector<autz::CentralAutomorphism> gens;
    for (grp::Elem x : grp::generators(*st.group, grp::sylow(*st.group, 2))) gens.push_back(st.elements[x]);
    return autz::generate(g, gens);
  }
  if (which == "isometry") {
    require(!matrix.empty(), "--subgroup isometry needs --matrix");
    return autz::generate(g, {autz::lift_pointwise(g, parse_matrix(matrix, g->p()))});
  }
  throw DomainError("unknown subgroup '" + which + "' (inner, full, polarization, polarization-sylow2, isometry)");
}

json schema(const std::string& title, const std::vector<std::pair<std::string, std::string>>& fields) {
  json props = json::object();
  json required = json::array();
  for (const auto& [name, type] : fields) {
    props[name] = {{"type", type}};
    required.push_back(name);
  }
  return {{"$schema", "http://json-schema.org/draft-07/schema#"},
          {"title", title},
          {"type", "object"},
          {"properties", props},
          {"required", required}};
}

struct Command {
  json output_schema;
  std::function<json()> run;
  int exit_code_on_false = 0;   // nonzero: a false "passed" field sets this exit code
};


}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg groups, Weil representations and root data"};
  app.require_subcommand(1);
  std::string output_path;
  bool want_schema = false;
  std::uint64_t seed = 0;
  app.add_option("-o,--output", output_path, "write JSON here instead of stdout");
  app.add_flag("--schema", want_schema, "print the JSON schema of the selected subcommand");
  app.add_option("--seed", seed, "seed for randomized checks")->capture_default_str();

  std::map<CLI::App*, Command> commands;
  ModelOptions model;
  std::string subgroup = "polarization", matrix;

  // heis
  auto* heis_cmd = app.add_subcommand("heis", "Heisenberg groups");
  heis_cmd->require_subcommand(1);
  {
    auto* c = heis_cmd->add_subcommand("build", "build a standard model");
    add_model(c, model, false);
    commands[c] = {schema("heis build", {{"group", "object"}, {"order", "integer"}, {"type", "string"}}), [&] {
                     const auto g = model.group();
                     return json{{"group", json_io::encode(g)}, {"order", g.order()}, {"type", heis::to_string(g.type())}};
                   }};
  }
  std::string input_path;
  {
    auto* c = heis_cmd->add_subcommand("classify", "classify a model or a group read from JSON");
    add_model(c, model, false);
    c->add_option("--input", input_path, "JSON produced by 'heis build'");
    commands[c] = {schema("heis classify", {{"type", "string"}, {"order", "integer"}, {"omega_nondegenerate", "boolean"}}),
                   [&] {
                     std::optional<heis::HeisenbergGroup> g;
                     if (!input_path.empty()) {
                       std::ifstream in(input_path);
                       require(in.good(), "cannot read " + input_path);
                       json j;
                       try {
                         in >> j;
                       } catch (const json::exception& e) {
                         throw DomainError(std::string("invalid JSON: ") + e.what());
                       }
                       g = json_io::decode_heisenberg(j.contains("group") ? j["group"] : j);
                     } else {
                       g = model.group();
                     }
                     const auto forms = heis::induced_forms(*g);
                     json out = {{"type", heis::to_string(heis::classify(*g))},
                                 {"order", g->order()},
                                 {"omega_nondegenerate", forms.omega.is_nondegenerate()}};
                     if (forms.q) out["squaring_form"] = json_io::encode(forms::classify(*forms.q));
                     return out;
                   }};
  }
  ModelOptions second;
  {
    auto* c = heis_cmd->add_subcommand("central-product", "central product of two standard models over the same p");
    add_model(c, model, false);
    c->add_option("--n2", second.n, "half-dimension of the second factor")->capture_default_str();
    c->add_option("--type2", second.type, "type of the second factor");
    commands[c] = {schema("heis central-product", {{"group", "object"}, {"order", "integer"}, {"type", "string"}}), [&] {
                     second.p = model.p;
                     const auto g = heis::central_product(model.group(), second.group());
                     return json{{"group", json_io::encode(g)}, {"order", g.order()}, {"type", heis::to_string(heis::classify(g))}};
                   }};
  }

  // rep
  auto* rep_cmd = app.add_subcommand("rep", "Heisenberg representations");
  rep_cmd->require_subcommand(1);
  bool emit_rep = false;
  {
    auto* c = rep_cmd->add_subcommand("heisenberg", "construct the Heisenberg representation");
    add_model(c, model, true);
    c->add_flag("--emit-rep", emit_rep, "include the group table and generator images");
    commands[c] = {schema("rep heisenberg", {{"dimension", "integer"}, {"conductor", "integer"}, {"order", "integer"}}), [&] {
                     const auto r = reps::heisenberg_rep(model.group(), model.psi);
                     json out = {{"dimension", r.rep.dim}, {"conductor", r.rep.conductor}, {"order", r.group.order()}};
                     if (emit_rep) out["rep"] = json_io::encode(r.rep);
                     return out;
                   }};
  }
  {
    auto* c = rep_cmd->add_subcommand("fs", "Frobenius-Schur indicator and R-structure");
    add_model(c, model, true);
    commands[c] = {schema("rep fs", {{"indicator", "integer"}, {"flavor", "string"}}), [&] {
                     const auto r = reps::heisenberg_rep(model.group(), model.psi);
                     const int fs = reps::frobenius_schur(r.rep);
                     json out = {{"indicator", fs}, {"flavor", fs > 0 ? "real" : fs < 0 ? "quaternionic" : "complex"}};
                     if (const auto j = reps::r_structure(r.rep)) {
                       out["j_sign"] = j->sign;
                       out["j"] = json_io::encode(j->j);
                     }
                     return out;
                   }};
  }
  {
    auto* c = rep_cmd->add_subcommand("svn", "Stone-von Neumann checks");
    add_model(c, model, true);
    commands[c] = {schema("rep svn", {{"ok", "boolean"}, {"dimension", "integer"}, {"irreducible", "boolean"}}),
                   [&] { return json_io::encode(reps::verify_stone_von_neumann(model.group(), model.psi)); }};
  }

  // autz
  auto* autz_cmd = app.add_subcommand("autz", "automorphisms fixing the center");
  autz_cmd->require_subcommand(1);
  {
    auto* c = autz_cmd->add_subcommand("report", "the exact sequence V -> Aut_Z(P) -> O or Sp");
    add_model(c, model, false);
    commands[c] = {schema("autz report", {{"kernel_order", "integer"}, {"image_order", "integer"}, {"aut_order", "integer"}}),
                   [&] { return json_io::encode(autz::exact_sequence_report(model.group())); }};
  }
  {
    auto* c = autz_cmd->add_subcommand("splits", "whether the exact sequence splits");
    add_model(c, model, false);
    commands[c] = {schema("autz splits", {{"splits", "boolean"}, {"predictions_disagree", "boolean"}}), [&] {
                     const auto r = json_io::encode(autz::exact_sequence_report(model.group()));
                     return json{{"splits", r["splits"]},
                                 {"cohomology_splits", r["cohomology_splits"]},
                                 {"split_predicted_by_dimension_rule", r["split_predicted_by_dimension_rule"]},
                                 {"split_predicted_by_rank_rule", r["split_predicted_by_rank_rule"]},
                                 {"predictions_disagree", r["predictions_disagree"]}};
                   }};
  }

  // weil
  auto* weil_cmd = app.add_subcommand("weil", "Weil representations");
  weil_cmd->require_subcommand(1);
  auto add_subgroup = [&](CLI::App* c) {
    add_model(c, model, true);
    c->add_option("--subgroup", subgroup, "inner, full, polarization, polarization-sylow2 or isometry")->capture_default_str();
    c->add_option("--matrix", matrix, "isometry for --subgroup isometry, rows separated by ';'");
  };
  {
    auto* c = weil_cmd->add_subcommand("linearize", "linearize the projective Weil representation");
    add_subgroup(c);
    commands[c] = {schema("weil linearize", {{"solvable", "boolean"}, {"group_order", "integer"}, {"modulus", "integer"}}), [&] {
                     const auto rep = reps::heisenberg_rep(model.group(), model.psi);
                     const auto a = select_subgroup(rep, subgroup, matrix);
                     const auto pw = weil::projective_weil(rep, a);
                     const auto lr = weil::linearize(pw);
                     json out = {{"solvable", lr.certificate.solvable},
                                 {"group_order", a.elements.size()},
                                 {"modulus", lr.modulus},
                                 {"certificate", json_io::encode(lr.certificate)}};
                     if (lr.linearization) out["linearization"] = json_io::encode(*lr.linearization, a);
                     if (subgroup == "polarization" || subgroup == "polarization-sylow2") {
                       const auto pol = weil::linearize_via_polarization(pw);
                       out["polarization_path"] = pol.linearization.has_value();
                       if (pol.linearization && lr.linearization)
                         if (const auto tw = weil::twist_between(pw, *lr.linearization, *pol.linearization))
                           out["twist"] = {{"modulus", tw->modulus}, {"exponents", tw->exponents}, {"trivial", tw->trivial()}};
                     }
                     return out;
                   }};
  }
  {
    auto* c = weil_cmd->add_subcommand("r-linearize", "linearization preserving the R-structure (p = 2)");
    add_subgroup(c);
    commands[c] = {schema("weil r-linearize", {{"flavor", "string"}, {"order_two_characters", "integer"}, {"unique", "boolean"}}), [&] {
                     const auto rep = reps::heisenberg_rep(model.group(), model.psi);
                     const auto a = select_subgroup(rep, subgroup, matrix);
                     const auto r = weil::r_linearize(weil::projective_weil(rep, a));
                     return json{{"flavor", weil::to_string(r.lin.flavor)},
                                 {"order_two_characters", r.order_two_characters},
                                 {"solutions_found", r.solutions_found},
                                 {"unique", r.unique},
                                 {"j_sign", r.j.sign},
                                 {"linearization", json_io::encode(r.lin, a)}};
                   }};
  }
  std::string sp_matrices;
  {
    auto* c = weil_cmd->add_subcommand("gerardin", "linearizations for a subgroup of Sp_2n(F_p), p odd");
    c->add_option("--p", model.p, "odd prime")->required();
    c->add_option("--n", model.n, "half the dimension")->capture_default_str();
    c->add_option("--psi", model.psi, "central character exponent")->capture_default_str();
    c->add_option("--generators", sp_matrices,
                  "symplectic generators separated by '|', rows by ';' (default: the two elementary "
                  "transvections of Sp_2)");
    commands[c] = {schema("weil gerardin", {{"count", "integer"}, {"character_modulus", "integer"}}), [&] {
                     std::vector<gf::FpMatrix> gens;
                     if (sp_matrices.empty()) {
                       require(model.n == 1, "default generators are only defined for n = 1");
                       gens = {gf::FpMatrix(model.p, 2, 2, {1, 1, 0, 1}), gf::FpMatrix(model.p, 2, 2, {1, 0, 1, 1})};
                     } else {
                       std::stringstream ss(sp_matrices);
                       std::string one;
                       while (std::getline(ss, one, '|')) gens.push_back(parse_matrix(one, model.p));
                     }
                     const auto r = weil::gerardin_weil(model.p, model.n, gens, model.psi);
                     return json{{"count", r.count}, {"character_modulus", r.character_modulus}, {"characters", r.characters}};
                   }};
  }
  {
    auto* c = weil_cmd->add_subcommand("count", "number of linearizations");
    add_subgroup(c);
    commands[c] = {schema("weil count", {{"count", "integer"}, {"group_order", "integer"}}), [&] {
                     const auto rep = reps::heisenberg_rep(model.group(), model.psi);
                     const auto a = select_subgroup(rep, subgroup, matrix);
                     return json{{"count", weil::count_linearizations(weil::projective_weil(rep, a))},
                                 {"group_order", a.elements.size()}};
                   }};
  }

  // forms
  auto* forms_cmd = app.add_subcommand("forms", "quadratic forms");
  forms_cmd->require_subcommand(1);
  std::string form_model = "split";
  std::uint32_t q = 2;
  auto build_form = [&]() -> forms::QuadraticForm {
    if (form_model == "split") return forms::standard_split(model.p, model.n);
    if (form_model == "nonsplit") return forms::standard_nonsplit(model.p, model.n);
    if (form_model == "norm") return forms::norm_form(model.p);
    if (form_model == "norm-trace") return forms::norm_trace_form(q);
    throw DomainError("unknown form model '" + form_model + "' (split, nonsplit, norm, norm-trace)");
  };
  auto add_form = [&](CLI::App* c) {
    c->add_option("--model", form_model, "split, nonsplit, norm or norm-trace")->capture_default_str();
    c->add_option("--p", model.p, "prime")->capture_default_str();
    c->add_option("--n", model.n, "half the dimension")->capture_default_str();
    c->add_option("--q", q, "field size for norm-trace (a power of 2)")->capture_default_str();
  };
  {
    auto* c = forms_cmd->add_subcommand("classify", "split/nonsplit and Witt index");
    add_form(c);
    commands[c] = {schema("forms classify", {{"kind", "string"}, {"witt_index", "integer"}}), [&] {
                     const auto f = build_form();
                     json out = json_io::encode(forms::classify(f));
                     out["form"] = json_io::encode(f);
                     return out;
                   }};
  }
  {
    auto* c = forms_cmd->add_subcommand("count-zeros", "number of nonzero isotropic vectors");
    add_form(c);
    commands[c] = {schema("forms count-zeros", {{"count", "integer"}}),
                   [&] { return json{{"count", forms::count_zeros(build_form())}}; }};
  }

  // rootdata
  auto* root_cmd = app.add_subcommand("rootdata", "root systems and Weyl groups");
  root_cmd->require_subcommand(1);
  std::string root_type = "A1";
  std::uint64_t pi1 = 1;
  {
    auto* c = root_cmd->add_subcommand("torsion", "torsion primes");
    c->add_option("--type", root_type, "root system label, e.g. E8 or A1+B3")->capture_default_str();
    c->add_option("--pi1", pi1, "order of the torsion of the fundamental group")->capture_default_str();
    commands[c] = {schema("rootdata torsion", {{"type", "string"}, {"primes", "array"}}), [&] {
                     return json{{"type", rootdata::normalize_label(root_type)}, {"primes", rootdata::torsion_primes(root_type, pi1)}};
                   }};
  }
  std::string weights, phi_h;
  {
    auto* c = root_cmd->add_subcommand("centralizer", "Weyl centralizer of a residue functional");
    c->add_option("--type", root_type, "root system label")->capture_default_str();
    c->add_option("--p", model.p, "prime")->capture_default_str();
    c->add_option("--weights", weights, "one weight per symbol, ambient coordinates, separated by ';'")->required();
    c->add_option("--phi-h", phi_h, "root indices of the subsystem, comma separated");
    commands[c] = {schema("rootdata centralizer", {{"centralizer_order", "integer"}, {"ge1", "boolean"}, {"ge2", "boolean"}}), [&] {
                     const auto r = rootdata::make_root_system(root_type);
                     const auto w = rootdata::weyl_group(r);
                     std::vector<rootdata::IntVector> ws;
                     for (auto row : parse_rows(weights)) {
                       for (int& x : row) x *= r.denominator;
                       ws.push_back(row);
                     }
                     std::vector<std::size_t> h;
                     for (const auto& row : parse_rows(phi_h))
                       for (int x : row) {
                         require(x >= 0, "root indices are nonnegative");
                         h.push_back(static_cast<std::size_t>(x));
                       }
                     const auto x = rootdata::functional_from_weights(r, model.p, ws);
                     json out = json_io::encode(rootdata::weyl_centralizer(w, x, h));
                     const auto ge1 = rootdata::ge1_check(r, x, h);
                     out["ge1"] = ge1.holds;
                     if (ge1.witness) out["ge1_witness_root"] = r.roots[*ge1.witness];
                     out["weyl_order"] = w.elements.size();
                     out["type"] = r.label;
                     return out;
                   }};
  }
  {
    auto* c = root_cmd->add_subcommand("appendix-d", "the Spin_8 stabilizer example");
    commands[c] = {schema("rootdata appendix-d", {{"weyl_order", "integer"}, {"stabilizer_order", "integer"}}),
                   [&] { return json_io::encode(rootdata::appendix_d_report()); }};
  }
  std::string group_type = "SL2";
  {
    auto* c = root_cmd->add_subcommand("commutator-check", "U(F_q) inside [P(F_q), U(F_q)]");
    c->add_option("--group", group_type, "SL2, SL3 or Sp4")->capture_default_str();
    c->add_option("--q", q, "field size, at most 8")->capture_default_str();
    commands[c] = {schema("rootdata commutator-check", {{"holds", "boolean"}, {"unipotent_order", "integer"}}), [&] {
                     const auto t = rootdata::parse_matrix_group(group_type);
                     json out = json_io::encode(rootdata::unipotent_commutator_check(t, q));
                     out["group"] = rootdata::to_string(t);
                     out["q"] = q;
                     if (t != rootdata::MatrixGroupType::sp4 && !(t == rootdata::MatrixGroupType::sl3 && q > 2))
                       out["abelianization_order"] = rootdata::abelianization_order_check(t, q);
                     return out;
                   }};
  }

  std::size_t instances = 100;
  {
    auto* c = root_cmd->add_subcommand("scalar-restriction", "random extensions of Weil cocycles restricted to U");
    c->add_option("--instances", instances, "number of random instances")->capture_default_str();
    commands[c] = {schema("rootdata scalar-restriction", {{"instances", "integer"}, {"violations", "integer"}}),
                   [&] { return json_io::encode(rootdata::scalar_restriction_suite(seed, instances)); }};
  }

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "acceptance suite");
  verify_cmd->require_subcommand(1);
  {
    auto* c = verify_cmd->add_subcommand("all", "run every acceptance criterion");
    Command cmd;
    cmd.output_schema = schema("verify all", {{"criteria", "array"}, {"passed", "boolean"}});
    cmd.exit_code_on_false = 1;
    cmd.run = [&] {
      json list = json::array();
      bool all = true;
      for (const auto& r : acceptance::run_all()) {
        all = all && r.passed();
        list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed()}, {"detail", r.detail},
                        {"budget_seconds", r.budget_seconds}});
      }
      return json{{"criteria", list}, {"passed", all}};
    };
    commands[c] = cmd;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const char* threads = std::getenv("HEISWEIL_THREADS");
  if (threads != nullptr) {
    char* end = nullptr;
    const long t = std::strtol(threads, &end, 10);
    if (end == threads || *end != '\0' || t < 1) {
      std::cerr << "HEISWEIL_THREADS must be a positive integer\n";
      return kExitUsage;
    }
  }

  const Command* selected = nullptr;
  for (const auto& [sub, cmd] : commands)
    if (sub->parsed()) selected = &cmd;
  if (selected == nullptr) {
    std::cerr << "unknown subcommand\n";
    return kExitUsage;
  }

  json doc;
  int code = 0;
  try {
    if (want_schema) {
      doc = selected->output_schema;
    } else {
      doc = selected->run();
      if (selected->exit_code_on_false != 0 && doc.contains("passed") && !doc["passed"].get<bool>())
        code = selected->exit_code_on_false;
    }
  } catch (const DomainError& e) {
    doc = {{"error", {{"kind", "domain"}, {"message", e.what()}}}};
    code = kExitDomain;
  } catch (const ResourceError& e) {
    doc = {{"error", {{"kind", "resource"}, {"message", e.what()}}}};
    code = kExitResource;
  }

  const std::string text = doc.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path);
    if (!out) {
      std::cerr << "cannot write " << output_path << "\n";
      return kExitDomain;
    }
    out << text;
  }
  return code;
}
