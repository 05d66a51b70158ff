#pragma once

/// @file forms.hpp
/// Bilinear, alternating and quadratic forms over F_p, with the
/// characteristic-2 conventions: a quadratic form is stored as
/// (upper, diag) so that Q(v) = sum diag_i v_i^2 + sum_{i<j} upper_ij v_i v_j.

#include <optional>
#include <string>
#include <vector>

#include "heisweil/gf.hpp"

namespace heisweil::forms {

using gf::FpMatrix;
using gf::FpVector;
using gf::u32;
using gf::u64;

struct BilinearForm {
  u32 p = 2;
  unsigned dim = 0;
  FpMatrix gram;  // gram(i, j) = B(e_i, e_j)

  BilinearForm() = default;
  BilinearForm(u32 p, unsigned dim);
  BilinearForm(FpMatrix g);

  u32 operator()(const FpVector& v, const FpVector& w) const;
  bool is_symmetric() const;
  bool is_alternating() const;
  bool is_nondegenerate() const;
  /// Pullback v, w -> B(Mv, Mw).
  BilinearForm pullback(const FpMatrix& m) const;
  bool operator==(const BilinearForm& o) const { return p == o.p && dim == o.dim && gram == o.gram; }
};

struct QuadraticForm {
  u32 p = 2;
  unsigned dim = 0;
  FpMatrix upper;  // strictly upper triangular cross terms
  std::vector<u32> diag;

  QuadraticForm() = default;
  QuadraticForm(u32 p, unsigned dim);

  u32 operator()(const FpVector& v) const;
  /// Pullback v -> Q(Mv).
  QuadraticForm pullback(const FpMatrix& m) const;
  /// Form v -> B(v, v) for an arbitrary bilinear B.
  static QuadraticForm from_bilinear_diagonal(const BilinearForm& b);
  /// Builds the stored representation of any function that is a quadratic
  /// form, from its values on e_i and e_i + e_j.
  template <class F>
  static QuadraticForm from_function(u32 p, unsigned dim, F&& q);
  bool operator==(const QuadraticForm& o) const {
    return p == o.p && dim == o.dim && upper == o.upper && diag == o.diag;
  }
};

enum class FormKind { split, nonsplit, degenerate };
std::string to_string(FormKind k);

struct FormClass {
  FormKind kind = FormKind::degenerate;
  unsigned witt_index = 0;
  bool operator==(const FormClass& o) const = default;
};

/// omega_B = B - B^T.
BilinearForm associated_alternating(const BilinearForm& b);

/// B_Q(v, w) = Q(v + w) - Q(v) - Q(w).
BilinearForm polar_form(const QuadraticForm& q);

/// Dimension of a maximal totally singular subspace, by exhaustive
/// backtracking over reduced echelon bases (dim <= 12).
unsigned witt_index(const QuadraticForm& q);

/// Split/nonsplit classification. Odd dimension with p = 2 is rejected.
FormClass classify(const QuadraticForm& q);

/// Exact number of zeros of Q by enumeration (p^dim <= 2^24).
u64 count_zeros(const QuadraticForm& q);

struct Polarization {
  std::vector<FpVector> plus;
  std::vector<FpVector> zero;
  std::vector<FpVector> minus;  // minus[i] pairs with plus[i]
};

/// V = V+ (+) V0 (+) V-; hyperbolic pairs chosen by lexicographically
/// least isotropic vector first.
Polarization find_polarization(const BilinearForm& omega);
Polarization find_polarization(const QuadraticForm& q);

/// Matrix M whose columns e_1, f_1, e_2, f_2, ... satisfy
/// omega(e_i, f_i) = 1 and all other pairings zero, so M^T G M is the
/// standard block form.
FpMatrix symplectic_basis(const BilinearForm& omega);

/// Standard alternating form with omega(e_{2i}, e_{2i+1}) = 1 (0-based).
BilinearForm standard_symplectic(u32 p, unsigned n);
/// sum_i x_{2i} x_{2i+1}.
QuadraticForm standard_split(u32 p, unsigned n);
/// Split form on 2(n-1) coordinates plus the norm form of F_{p^2}/F_p on
/// the last two.
QuadraticForm standard_nonsplit(u32 p, unsigned n);
/// Norm form of F_{p^2}/F_p in the fixed basis {1, x}.
QuadraticForm norm_form(u32 p);
/// a -> Tr_{F_q/F_2}(Nm_{F_{q^2}/F_q}(a)) on F_{q^2}, viewed as a form over
/// F_2 in the coefficient basis; q = 2^m.
QuadraticForm norm_trace_form(u32 q);

template <class F>
QuadraticForm QuadraticForm::from_function(u32 p, unsigned dim, F&& qf) {
  QuadraticForm out(p, dim);
  std::vector<u32> vals(dim);
  for (unsigned i = 0; i < dim; ++i) {
    FpVector e(dim, 0);
    e[i] = 1;
    vals[i] = qf(e) % p;
    out.diag[i] = vals[i];
  }
  for (unsigned i = 0; i < dim; ++i)
    for (unsigned j = i + 1; j < dim; ++j) {
      FpVector e(dim, 0);
      e[i] = 1;
      e[j] = 1;
      const u32 s = qf(e) % p;
      out.upper.set(i, j, static_cast<std::int64_t>(s) - vals[i] - vals[j]);
    }
  return out;
}

}  // namespace heisweil::forms
