#include "heisweil/autz.hpp"

#include <functional>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "heisweil/errors.hpp"

namespace heisweil::autz {

namespace {

std::string vec_text(const FpVector& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "]";
  return os.str();
}

FpVector basis_vector(unsigned dim, unsigned i) {
  FpVector e(dim, 0);
  e[i] = 1;
  return e;
}

struct AutHash {
  std::size_t operator()(const CentralAutomorphism& f) const {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](u32 x) { h = (h ^ x) * 1099511628211ull; };
    for (u32 x : f.m.data()) mix(x);
    for (u32 x : f.mu) mix(x);
    return h;
  }
};

void same_group(const CentralAutomorphism& f, const CentralAutomorphism& g) {
  if (f.group != g.group && !(*f.group == *g.group))
    throw DomainError("automorphisms of different Heisenberg groups");
}

// D(v, w) = B(Mv, Mw) - B(v, w) on basis vectors.
FpMatrix defect(const HeisenbergGroup& g, const FpMatrix& m) {
  const u32 p = g.p();
  const unsigned d = g.dim();
  FpMatrix out(p, d, d);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) {
      const FpVector ei = basis_vector(d, i), ej = basis_vector(d, j);
      out.set(i, j, static_cast<std::int64_t>(g.B()(m * ei, m * ej)) - g.B()(ei, ej));
    }
  return out;
}

struct IsometrySearch {
  const HeisenbergGroup& g;
  u32 p;
  unsigned d;
  u64 size;
  std::vector<FpVector> vecs;
  std::vector<u32> qvals;
  std::vector<u32> target_q;
  std::vector<std::uint8_t> omega_table;  // empty when |V| is large
  std::vector<u64> chosen;
  u64 nodes = 0;
  u64 node_limit;

  IsometrySearch(const HeisenbergGroup& grp_, u64 limit) : g(grp_), p(grp_.p()), d(grp_.dim()), node_limit(limit) {
    size = gf::space_size(p, d, 4096);
    for (u64 i = 0; i < size; ++i) vecs.push_back(gf::vector_at(i, d, p));
    if (p == 2) {
      for (const auto& v : vecs) qvals.push_back((*g.q())(v));
      for (unsigned i = 0; i < d; ++i) target_q.push_back((*g.q())(basis_vector(d, i)));
    }
    if (size <= 1024) {
      omega_table.resize(size * size);
      for (u64 a = 0; a < size; ++a)
        for (u64 b = 0; b < size; ++b) omega_table[a * size + b] = static_cast<std::uint8_t>(g.omega()(vecs[a], vecs[b]));
    }
  }

  u32 omega(u64 a, u64 b) const {
    return omega_table.empty() ? g.omega()(vecs[a], vecs[b]) : omega_table[a * size + b];
  }

  bool admissible(unsigned k, u64 c) const {
    if (p == 2 && qvals[c] != target_q[k]) return false;
    for (unsigned j = 0; j < k; ++j)
      if (omega(chosen[j], c) != g.omega().gram(j, k)) return false;
    return true;
  }

  template <class Leaf>
  void run(unsigned k, Leaf&& leaf) {
    if (++nodes > node_limit) throw ResourceError("isometry search exceeded its node limit");
    if (k == d) {
      leaf();
      return;
    }
    for (u64 c = 1; c < size; ++c) {
      if (!admissible(k, c)) continue;
      chosen.push_back(c);
      run(k + 1, leaf);
      chosen.pop_back();
    }
  }

  FpMatrix current() const {
    std::vector<FpVector> cols;
    for (u64 c : chosen) cols.push_back(vecs[c]);
    return FpMatrix::from_columns(p, d, cols);
  }
};

}  // namespace

HeisPtr share(const HeisenbergGroup& g) { return std::make_shared<const HeisenbergGroup>(g); }

CentralAutomorphism CentralAutomorphism::identity(HeisPtr g) {
  CentralAutomorphism f;
  f.m = FpMatrix::identity(g->p(), g->dim());
  f.mu.assign(g->v_size(), 0);
  f.group = std::move(g);
  return f;
}

HeisElement CentralAutomorphism::apply(const HeisElement& x) const {
  const u32 p = group->p();
  return {gf::add_mod(x.a, mu_at(x.v), p), m * x.v};
}

CentralAutomorphism compose(const CentralAutomorphism& f, const CentralAutomorphism& g) {
  same_group(f, g);
  const HeisenbergGroup& h = *f.group;
  const u32 p = h.p();
  CentralAutomorphism out;
  out.group = f.group;
  out.m = f.m * g.m;
  out.mu.resize(h.v_size());
  for (u64 i = 0; i < h.v_size(); ++i) {
    const FpVector v = gf::vector_at(i, h.dim(), p);
    out.mu[i] = gf::add_mod(g.mu[i], f.mu_at(g.m * v), p);
  }
  return out;
}

CentralAutomorphism invert(const CentralAutomorphism& f) {
  const HeisenbergGroup& h = *f.group;
  const u32 p = h.p();
  CentralAutomorphism out;
  out.group = f.group;
  out.m = f.m.inverse();
  out.mu.resize(h.v_size());
  for (u64 i = 0; i < h.v_size(); ++i) {
    const FpVector v = gf::vector_at(i, h.dim(), p);
    out.mu[i] = gf::neg_mod(f.mu_at(out.m * v), p);
  }
  return out;
}

CentralAutomorphism inner(HeisPtr g, const FpVector& u) {
  require(u.size() == g->dim(), "inner: vector length mismatch");
  CentralAutomorphism f = CentralAutomorphism::identity(g);
  for (u64 i = 0; i < g->v_size(); ++i) f.mu[i] = g->omega()(u, gf::vector_at(i, g->dim(), g->p()));
  return f;
}

CentralAutomorphism section_odd(HeisPtr g, const FpMatrix& m) {
  const u32 p = g->p();
  require(p != 2, "section_odd: requires p odd");
  const u32 half = gf::inv_mod(2, p);
  for (unsigned i = 0; i < g->dim(); ++i)
    for (unsigned j = 0; j < g->dim(); ++j)
      require(g->B().gram(i, j) == gf::mul_mod(g->omega().gram(i, j), half, p),
              "section_odd: requires B = omega / 2");
  require(m.rows() == g->dim() && m.cols() == g->dim(), "section_odd: matrix size mismatch");
  require(is_isometry(*g, m), "section_odd: matrix is not symplectic");
  CentralAutomorphism f = CentralAutomorphism::identity(g);
  f.m = m;
  return f;
}

bool is_isometry(const HeisenbergGroup& g, const FpMatrix& m) {
  if (m.rows() != g.dim() || m.cols() != g.dim()) return false;
  if (!(g.omega().pullback(m) == g.omega())) return false;
  if (g.p() == 2 && !(g.q()->pullback(m) == *g.q())) return false;
  return true;
}

CentralAutomorphism lift_pointwise(HeisPtr g, const FpMatrix& m) {
  const u32 p = g->p();
  const unsigned d = g->dim();
  require(m.rows() == d && m.cols() == d, "lift_pointwise: matrix size mismatch");
  if (p == 2) {
    for (u64 i = 0; i < g->v_size(); ++i) {
      const FpVector v = gf::vector_at(i, d, p);
      if ((*g->q())(m * v) != (*g->q())(v))
        throw DomainError("lift_pointwise: M does not preserve Q_P; witness " + vec_text(v));
    }
  } else {
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) {
        const FpVector ei = basis_vector(d, i), ej = basis_vector(d, j);
        if (g->omega()(m * ei, m * ej) != g->omega()(ei, ej))
          throw DomainError("lift_pointwise: M does not preserve omega_P; witness " + vec_text(ei) + ", " + vec_text(ej));
      }
  }
  const FpMatrix dm = defect(*g, m);
  CentralAutomorphism f = CentralAutomorphism::identity(g);
  f.m = m;
  const u32 half = p == 2 ? 0 : gf::inv_mod(2, p);
  for (u64 idx = 0; idx < g->v_size(); ++idx) {
    const FpVector v = gf::vector_at(idx, d, p);
    std::int64_t s = 0;
    if (p == 2) {
      for (unsigned i = 0; i < d; ++i)
        for (unsigned j = i + 1; j < d; ++j) s += v[i] * v[j] * dm(i, j);
    } else {
      // D(v, v)/2 - sum v_i D_ii / 2
      std::int64_t quad = 0;
      for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) quad += static_cast<std::int64_t>(v[i]) * v[j] % p * dm(i, j) % p;
      for (unsigned i = 0; i < d; ++i) quad -= static_cast<std::int64_t>(v[i]) * dm(i, i);
      s = static_cast<std::int64_t>(gf::mul_mod(gf::reduce_mod(quad, p), half, p));
    }
    f.mu[idx] = gf::reduce_mod(s, p);
  }
  check_invariant(!automorphism_violation(f), "lift_pointwise: lift is not an automorphism");
  return f;
}

std::optional<std::pair<FpVector, FpVector>> automorphism_violation(const CentralAutomorphism& f) {
  const HeisenbergGroup& g = *f.group;
  const u32 p = g.p();
  const unsigned d = g.dim();
  if (f.mu.size() != g.v_size() || f.m.rows() != d || f.m.cols() != d) return std::make_pair(FpVector{}, FpVector{});
  if (f.mu[0] != 0) return std::make_pair(FpVector(d, 0), FpVector(d, 0));
  std::vector<FpVector> vecs;
  for (u64 i = 0; i < g.v_size(); ++i) vecs.push_back(gf::vector_at(i, d, p));
  auto check = [&](const FpVector& v, const FpVector& w) {
    const u32 lhs = gf::sub_mod(gf::sub_mod(f.mu_at(gf::vadd(v, w, p)), f.mu_at(v), p), f.mu_at(w), p);
    const u32 rhs = gf::sub_mod(g.B()(f.m * v, f.m * w), g.B()(v, w), p);
    return lhs == rhs;
  };
  if (d <= 8 && g.v_size() <= 4096) {
    for (const auto& v : vecs)
      for (const auto& w : vecs)
        if (!check(v, w)) return std::make_pair(v, w);
  } else {
    for (const auto& v : vecs)
      for (unsigned j = 0; j < d; ++j)
        if (!check(v, basis_vector(d, j))) return std::make_pair(v, basis_vector(d, j));
  }
  if (f.m.rank() != d) return std::make_pair(FpVector(d, 0), FpVector(d, 0));
  return std::nullopt;
}

std::vector<FpMatrix> enumerate_isometries(const HeisenbergGroup& g, std::size_t limit) {
  IsometrySearch s(g, u64{1} << 28);
  std::vector<FpMatrix> out;
  s.run(0, [&] {
    if (out.size() >= limit) throw ResourceError("enumerate_isometries: more than " + std::to_string(limit) + " isometries");
    out.push_back(s.current());
  });
  return out;
}

u64 count_isometries(const HeisenbergGroup& g, u64 node_limit) {
  IsometrySearch s(g, node_limit);
  u64 count = 0;
  s.run(0, [&] { ++count; });
  return count;
}

OrthSymplGroup isometry_group(const HeisenbergGroup& g) {
  OrthSymplGroup out;
  out.elements = enumerate_isometries(g);
  const std::size_t n = out.elements.size();
  std::unordered_map<std::string, Elem> index;
  auto key = [](const FpMatrix& m) { return std::string(reinterpret_cast<const char*>(m.data().data()), m.data().size() * sizeof(u32)); };
  for (std::size_t i = 0; i < n; ++i) index.emplace(key(out.elements[i]), static_cast<Elem>(i));
  std::vector<Elem> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = index.at(key(out.elements[i] * out.elements[j]));
  out.group = std::make_shared<const grp::FinGroup>(n, std::move(table));
  return out;
}

std::optional<Elem> AutGroup::find(const CentralAutomorphism& f) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == f) return static_cast<Elem>(i);
  return std::nullopt;
}

AutGroup generate(HeisPtr g, const std::vector<CentralAutomorphism>& gens, std::size_t max_order) {
  for (const auto& f : gens) same_group(f, CentralAutomorphism::identity(g));
  using Mul = std::function<CentralAutomorphism(const CentralAutomorphism&, const CentralAutomorphism&)>;
  auto m2 = grp::materialize<CentralAutomorphism, Mul, AutHash>(
      gens, CentralAutomorphism::identity(g),
      [](const CentralAutomorphism& a, const CentralAutomorphism& b) { return compose(a, b); }, max_order);
  return {std::move(g), std::move(m2.elements), std::move(m2.group), std::move(m2.generator_indices)};
}

AutGroup inner_subgroup(HeisPtr g) {
  std::vector<CentralAutomorphism> gens;
  for (unsigned i = 0; i < g->dim(); ++i) gens.push_back(inner(g, basis_vector(g->dim(), i)));
  return generate(g, gens);
}

AutGroup full_automorphism_group(HeisPtr g) {
  const OrthSymplGroup iso = isometry_group(*g);
  const u64 total = g->v_size() * iso.elements.size();
  if (total > grp::kMaxTableOrder)
    throw ResourceError("full_automorphism_group: order " + std::to_string(total) + " exceeds the table bound");
  std::vector<CentralAutomorphism> gens;
  for (unsigned i = 0; i < g->dim(); ++i) gens.push_back(inner(g, basis_vector(g->dim(), i)));
  for (Elem x : grp::generators(*iso.group, grp::whole(*iso.group))) gens.push_back(lift_pointwise(g, iso.elements[x]));
  return generate(g, gens);
}

namespace {

u64 checked_mul(u64 a, u64 b) {
  const unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  if (r > std::numeric_limits<u64>::max()) throw ResourceError("isometry group order overflows 64 bits");
  return static_cast<u64>(r);
}

}  // namespace

u64 isometry_order_formula(u32 p, unsigned n, heis::HeisType type) {
  const u64 q = p;
  u64 prod = 1;
  if (type == heis::HeisType::odd) {
    for (unsigned i = 0; i < n * n; ++i) prod = checked_mul(prod, q);
    for (unsigned i = 1; i <= n; ++i) prod = checked_mul(prod, gf::ipow(q, 2 * i) - 1);
    return prod;
  }
  if (n == 0) return 1;
  prod = 2;
  for (unsigned i = 0; i < n * (n - 1); ++i) prod = checked_mul(prod, q);
  prod = checked_mul(prod, type == heis::HeisType::positive ? gf::ipow(q, n) - 1 : gf::ipow(q, n) + 1);
  for (unsigned i = 1; i < n; ++i) prod = checked_mul(prod, gf::ipow(q, 2 * i) - 1);
  return prod;
}

ExactSequenceReport exact_sequence_report(const HeisenbergGroup& g) {
  ExactSequenceReport r;
  const u32 p = g.p();
  r.kernel_order = g.v_size();
  r.image_name = p != 2 ? "Sp" : (g.type() == heis::HeisType::positive ? "O+" : "O-");
  r.fact_predicts_split = p != 2 || g.dim() <= 2;
  r.intro_predicts_split = p != 2 || g.n() < 3;
  if (g.dim() <= 6 && g.v_size() <= 1024) {
    r.image_order = count_isometries(g);
  } else {
    r.image_order = isometry_order_formula(p, g.n(), g.type());
  }
  r.aut_order = checked_mul(r.kernel_order, r.image_order);
  if (g.dim() > 4 || r.aut_order > grp::kMaxTableOrder) return r;

  const HeisPtr h = share(g);
  const AutGroup aut = full_automorphism_group(h);
  r.materialized = true;
  r.aut_order = aut.elements.size();
  std::vector<Elem> kernel;
  for (std::size_t i = 0; i < aut.elements.size(); ++i)
    if (aut.elements[i].m.is_identity()) kernel.push_back(static_cast<Elem>(i));
  bool inner_ok = kernel.size() == g.v_size();
  for (u64 i = 0; i < g.v_size() && inner_ok; ++i)
    inner_ok = aut.find(inner(h, gf::vector_at(i, g.dim(), p))).has_value();
  r.kernel_is_inner = inner_ok;

  std::unordered_map<std::string, int> images;
  for (const auto& f : aut.elements)
    images[std::string(reinterpret_cast<const char*>(f.m.data().data()), f.m.data().size() * sizeof(u32))] = 1;
  r.image_is_full = images.size() == r.image_order;
  check_invariant(r.aut_order == r.kernel_order * images.size(), "exact_sequence_report: |Aut| != |V| |image|");

  const grp::Subgroup n = grp::make_subset(*aut.group, kernel);
  const grp::ComplementResult c = grp::complement_exists(*aut.group, n);
  r.splits = c.complement.has_value();
  r.cohomology_splits = c.cohomology_splits;
  return r;
}

MembershipResult stabilizer_membership(const CentralAutomorphism& f, const heis::Splitting& vplus,
                                       const std::vector<FpVector>& v0_basis) {
  const HeisenbergGroup& g = *f.group;
  const u32 p = g.p();
  const unsigned d = g.dim();
  for (const auto& w : v0_basis) require(w.size() == d, "stabilizer_membership: vector length mismatch");
  const auto v0 = gf::span_basis(v0_basis, p, d);
  for (const auto& a : vplus.basis)
    for (const auto& b : v0)
      if (g.omega()(a, b) != 0) throw DomainError("stabilizer_membership: V0 is not orthogonal to V+; witness " + vec_text(b));
  {
    std::vector<FpVector> both = vplus.basis;
    both.insert(both.end(), v0.begin(), v0.end());
    require(gf::span_basis(both, p, d).size() == both.size(), "stabilizer_membership: V+ and V0 intersect");
    FpMatrix gram(p, v0.size(), v0.size());
    for (std::size_t i = 0; i < v0.size(); ++i)
      for (std::size_t j = 0; j < v0.size(); ++j) gram.set(i, j, g.omega()(v0[i], v0[j]));
    require(gram.rank() == v0.size(), "stabilizer_membership: omega_P is degenerate on V0");
  }
  for (const auto& x : vplus.elements)
    require(gf::in_span(vplus.basis, x.v, p) || gf::is_zero(x.v), "stabilizer_membership: malformed splitting");

  std::unordered_map<u64, u32> lift;
  for (const auto& x : vplus.elements) lift.emplace(gf::vector_index(x.v, p), x.a);
  auto in_lift = [&](const HeisElement& x) {
    auto it = lift.find(gf::vector_index(x.v, p));
    return it != lift.end() && it->second == x.a;
  };

  MembershipResult r;
  for (const auto& y : vplus.elements) {
    if (!in_lift(f.apply(y))) {
      r.failed_condition = 1;
      r.witness = y;
      return r;
    }
  }
  const u64 n0 = gf::space_size(p, static_cast<unsigned>(v0.size()), u64{1} << 20);
  for (const auto& y : vplus.elements)
    for (u64 k = 0; k < n0; ++k) {
      const FpVector c = gf::vector_at(k, static_cast<unsigned>(v0.size()), p);
      FpVector w = y.v;
      for (std::size_t i = 0; i < v0.size(); ++i) w = gf::vadd(w, gf::vscale(v0[i], c[i], p), p);
      for (u32 a = 0; a < p; ++a) {
        const HeisElement x{a, w};
        if (!in_lift(g.mul(f.apply(x), g.inv(x)))) {
          r.failed_condition = 2;
          r.witness = x;
          return r;
        }
      }
    }
  r.member = true;
  return r;
}

std::string to_string(const CentralAutomorphism& f) {
  std::ostringstream os;
  os << "M = " << gf::to_string(f.m) << ", mu = [";
  for (std::size_t i = 0; i < f.mu.size(); ++i) os << (i ? "," : "") << f.mu[i];
  os << "]";
  return os.str();
}

}  // namespace heisweil::autz
