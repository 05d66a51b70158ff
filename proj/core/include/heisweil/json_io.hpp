#pragma once

/// @file json_io.hpp
/// JSON encodings. Values that round-trip have a matching decoder; reports
/// are encode-only. Object keys are emitted in sorted order so equal values
/// serialize to identical bytes.

#include <json.hpp>

#include "heisweil/autz.hpp"
#include "heisweil/cyc.hpp"
#include "heisweil/forms.hpp"
#include "heisweil/grp.hpp"
#include "heisweil/heis.hpp"
#include "heisweil/reps.hpp"
#include "heisweil/rootdata.hpp"
#include "heisweil/weil.hpp"

namespace heisweil::json_io {

using nlohmann::json;

json encode(const gf::FpMatrix& m);
gf::FpMatrix decode_fp_matrix(const json& j);

json encode(const forms::BilinearForm& b);
forms::BilinearForm decode_bilinear(const json& j);
json encode(const forms::QuadraticForm& q);
forms::QuadraticForm decode_quadratic(const json& j);
json encode(const forms::FormClass& c);
forms::FormClass decode_form_class(const json& j);

json encode(const grp::FinGroup& g);
grp::FinGroup decode_group(const json& j);
json encode(const grp::Subgroup& h);
grp::Subgroup decode_subgroup(const grp::FinGroup& g, const json& j);
/// The group itself is not embedded.
json encode(const grp::Cocycle2& c);
grp::Cocycle2 decode_cocycle(grp::GroupPtr g, const json& j);

json encode(const heis::HeisenbergGroup& g);
heis::HeisenbergGroup decode_heisenberg(const json& j);
json encode(const heis::HeisElement& x);
heis::HeisElement decode_heis_element(const json& j);

json encode(const cyc::CycScalar& s);
cyc::CycScalar decode_cyc_scalar(const json& j);
json encode(const cyc::CycMatrix& m);
cyc::CycMatrix decode_cyc_matrix(const json& j);

json encode(const reps::MonoMatrix& m);
reps::MonoMatrix decode_mono_matrix(const json& j);
/// {group, conductor, dim, generators, images}; the remaining matrices are
/// recovered along the Cayley graph of the generators.
json encode(const reps::MonoRep& r);
reps::MonoRep decode_mono_rep(const json& j);

json encode(const autz::CentralAutomorphism& f);
autz::CentralAutomorphism decode_automorphism(autz::HeisPtr g, const json& j);

/// {flavor, N, generators, matrices}: images of the generators of A only.
json encode(const weil::WeilLinearization& w, const autz::AutGroup& a);

// Reports.
json encode(const reps::StoneVonNeumannReport& r);
json encode(const autz::ExactSequenceReport& r);
json encode(const grp::CoboundaryResult& r);
json encode(const rootdata::AppendixDReport& r);
json encode(const rootdata::CommutatorCheck& r);
json encode(const rootdata::CentralizerResult& r);
json encode(const rootdata::ScalarRestrictionSummary& r);

}  // namespace heisweil::json_io
