#pragma once

/// @file heis.hpp
/// Heisenberg F_p-groups V#_B: the set F_p x V with
///   (a, v)(b, w) = (a + b + B(v, w), v + w)
/// for a bilinear form B whose associated alternating form is
/// nondegenerate. Elements are indexed as a + p * vector_index(v).

#include <optional>
#include <string>
#include <vector>

#include "heisweil/forms.hpp"
#include "heisweil/grp.hpp"

namespace heisweil::heis {

using forms::BilinearForm;
using forms::QuadraticForm;
using gf::FpVector;
using gf::u32;
using gf::u64;

enum class HeisType { odd, positive, negative };
std::string to_string(HeisType t);
/// Accepts "odd", "positive", "negative"; throws DomainError otherwise.
HeisType parse_type(const std::string& s);

struct HeisElement {
  u32 a = 0;
  FpVector v;
  bool operator==(const HeisElement& o) const = default;
};

class HeisenbergGroup {
 public:
  /// Throws DomainError (naming a kernel vector) when omega_B is degenerate.
  static HeisenbergGroup build(const BilinearForm& b);
  static HeisenbergGroup standard_model(u32 p, unsigned n, HeisType type);

  u32 p() const { return b_.p; }
  unsigned dim() const { return b_.dim; }
  unsigned n() const { return b_.dim / 2; }
  const BilinearForm& B() const { return b_; }
  const BilinearForm& omega() const { return omega_; }
  /// Q_P(v) = B(v, v); present only for p = 2.
  const std::optional<QuadraticForm>& q() const { return q_; }
  HeisType type() const { return type_; }

  u64 v_size() const { return v_size_; }
  u64 order() const { return v_size_ * p(); }

  HeisElement identity() const { return {0, FpVector(dim(), 0)}; }
  HeisElement mul(const HeisElement& x, const HeisElement& y) const;
  HeisElement inv(const HeisElement& x) const;
  HeisElement commutator(const HeisElement& x, const HeisElement& y) const;
  HeisElement pow(const HeisElement& x, u64 k) const;
  bool is_central(const HeisElement& x) const { return gf::is_zero(x.v); }

  u64 index(const HeisElement& x) const;
  HeisElement element(u64 index) const;

  /// The full multiplication table (order <= 4096).
  grp::GroupPtr fin_group() const;

  bool operator==(const HeisenbergGroup& o) const { return b_ == o.b_; }

 private:
  HeisenbergGroup() = default;
  BilinearForm b_;
  BilinearForm omega_;
  std::optional<QuadraticForm> q_;
  HeisType type_ = HeisType::odd;
  u64 v_size_ = 1;
};

struct InducedForms {
  BilinearForm omega;
  std::optional<QuadraticForm> q;
};

/// omega_P from commutators of lifts and, for p = 2, Q_P from squares.
InducedForms induced_forms(const HeisenbergGroup& g);

HeisType classify(const HeisenbergGroup& g);
bool is_isomorphic(const HeisenbergGroup& a, const HeisenbergGroup& b);
/// Orthogonal sum of the defining forms.
HeisenbergGroup central_product(const HeisenbergGroup& a, const HeisenbergGroup& b);

struct Splitting {
  std::vector<FpVector> basis;          // basis of W
  std::vector<HeisElement> elements;    // lift of sum c_i basis_i, c in lexicographic order
};

/// A subgroup mapping isomorphically onto span(w_basis). Throws DomainError
/// with a witness vector when W is not isotropic (omega_P for odd p, Q_P
/// for p = 2).
Splitting splitting(const HeisenbergGroup& g, const std::vector<FpVector>& w_basis);

/// Central correction f(w) making w -> (f(w), w) a homomorphism on an
/// isotropic W with the given basis; `coords` are coordinates in it.
u32 splitting_correction(const HeisenbergGroup& g, const std::vector<FpVector>& basis, const FpVector& coords);

}  // namespace heisweil::heis
