#include <doctest.h>

#include "heisweil/errors.hpp"
#include "heisweil/json_io.hpp"
#include "small_groups.hpp"

using namespace heisweil;
using namespace heisweil::json_io;
using heis::HeisenbergGroup;
using heis::HeisType;

namespace {

template <class T, class Decode>
void round_trip(const T& value, Decode&& decode) {
  const json j = encode(value);
  const T back = decode(j);
  CHECK(back == value);
  CHECK(encode(back).dump() == j.dump());
}

}  // namespace

TEST_CASE("finite field and form values") {
  round_trip(gf::FpMatrix(5, 2, 3, {1, 2, 3, 4, 0, 1}), decode_fp_matrix);
  round_trip(forms::standard_symplectic(3, 2), decode_bilinear);
  round_trip(forms::standard_nonsplit(2, 2), decode_quadratic);
  round_trip(forms::norm_trace_form(8), decode_quadratic);
  round_trip(forms::classify(forms::standard_split(2, 3)), decode_form_class);
  CHECK_THROWS_AS(decode_fp_matrix(json{{"p", 4}, {"rows", 1}, {"cols", 1}, {"data", {1}}}), DomainError);
  CHECK_THROWS_AS(decode_fp_matrix(json{{"p", 2}, {"rows", 2}, {"cols", 1}, {"data", {1}}}), DomainError);
  CHECK_THROWS_AS(decode_quadratic(json::array()), DomainError);
}

TEST_CASE("groups, subgroups and cocycles") {
  const auto q8 = testing::quaternion();
  round_trip(*q8, decode_group);
  const auto z = grp::center(*q8);
  CHECK(decode_subgroup(*q8, encode(z)) == z);

  const auto v4 = std::make_shared<const grp::FinGroup>(*testing::direct_product(*testing::cyclic(2), *testing::cyclic(2)));
  grp::Cocycle2 c{v4, 2, std::vector<std::int64_t>(16)};
  for (grp::Elem a = 0; a < 4; ++a)
    for (grp::Elem b = 0; b < 4; ++b) c.values[a * 4 + b] = (a / 2) * (b % 2);
  const auto back = decode_cocycle(v4, encode(c));
  CHECK(back.modulus == c.modulus);
  CHECK(back.values == c.values);

  json broken = encode(*q8);
  broken["table"][0] = 7;
  CHECK_THROWS(decode_group(broken));
}

TEST_CASE("Heisenberg groups and elements") {
  for (const auto& g : {HeisenbergGroup::standard_model(2, 2, HeisType::negative),
                        HeisenbergGroup::standard_model(3, 1, HeisType::odd)}) {
    round_trip(g, decode_heisenberg);
    for (std::uint64_t i = 0; i < g.order(); i += 5) round_trip(g.element(i), decode_heis_element);
  }
  json lie = encode(HeisenbergGroup::standard_model(2, 1, HeisType::positive));
  lie["type"] = "negative";
  CHECK_THROWS_AS(decode_heisenberg(lie), DomainError);
}

TEST_CASE("cyclotomic values") {
  const auto s = cyc::CycScalar::zeta(8, 1) + cyc::CycScalar::rational(8, 3, 2);
  round_trip(s, decode_cyc_scalar);
  round_trip(cyc::sqrt_positive_rational(1, 2), decode_cyc_scalar);
  cyc::CycMatrix m(2, 2, 12);
  m.at(0, 1) = cyc::CycScalar::zeta(12, 5);
  m.at(1, 0) = cyc::CycScalar::rational(12, -1, 3);
  round_trip(m, decode_cyc_matrix);
}

TEST_CASE("representations") {
  const auto r = reps::heisenberg_rep(HeisenbergGroup::standard_model(2, 2, HeisType::positive), 1);
  round_trip(r.rep.mats[5], decode_mono_matrix);
  const json j = encode(r.rep);
  const auto back = decode_mono_rep(j);
  CHECK(back.dim == r.rep.dim);
  CHECK(back.conductor == r.rep.conductor);
  CHECK(*back.group == *r.rep.group);
  CHECK(back.mats == r.rep.mats);
  CHECK(encode(back).dump() == j.dump());
}

TEST_CASE("central automorphisms") {
  const auto g = autz::share(HeisenbergGroup::standard_model(2, 1, HeisType::negative));
  for (const auto& f : autz::full_automorphism_group(g).elements) CHECK(decode_automorphism(g, encode(f)) == f);
  json bad = encode(autz::inner(g, {1, 0}));
  bad["mu"][1] = 1 - bad["mu"][1].get<int>();
  CHECK_THROWS_AS(decode_automorphism(g, bad), DomainError);
}

TEST_CASE("reports serialize deterministically") {
  const auto a = encode(rootdata::appendix_d_report()).dump(2);
  CHECK(a == encode(rootdata::appendix_d_report()).dump(2));
  CHECK(a.find("\"weyl_order\": 192") != std::string::npos);
  const auto e = encode(autz::exact_sequence_report(HeisenbergGroup::standard_model(2, 2, HeisType::positive)));
  CHECK(e.contains("predictions_disagree"));
  CHECK(e["kernel_order"] == 16);
}
