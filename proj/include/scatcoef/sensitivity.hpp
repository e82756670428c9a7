#pragma once

#include <variant>
#include <vector>

#include "scatcoef/forward.hpp"
#include "scatcoef/medium.hpp"

namespace scatcoef {

struct RadialPerturbation {
  RadialField d_eps;
  RadialField d_inv_mu;
};

struct GridPerturbation {
  std::vector<double> d_eps;  // nx * nx, zero outside the disk
};

struct Perturbation {
  std::variant<RadialPerturbation, GridPerturbation> field;
};

// spec + t * pert, exact in t for both representations.
MediumSpec apply_perturbation(const MediumSpec& spec, const Perturbation& pert, double t);
ContrastNorm perturbation_norm(const MediumSpec& spec, const Perturbation& pert);

enum class SensitivityForm {
  // pairs u_m with the field excited by conj(u0_n): exact first-order derivative
  Adjoint,
  // pairs u_m with conj(u_n) literally; matches Adjoint only for a homogeneous base
  Conjugate,
};

ScatteringMatrix born_sensitivity(const MediumSpec& spec, double k, int N, const Perturbation& pert,
                                  SensitivityForm form = SensitivityForm::Adjoint);

struct QuadraticIdentity {
  double boundary = 0.0;  // 2 pi R (lambda_2 - lambda_1)
  double volume = 0.0;    // int (1/mu1 - 1/mu2) grad.grad - omega^2 int (eps1 - eps2) u1 u2
  double residual = 0.0;  // |boundary - volume| / max(|boundary|, |volume|)
};

QuadraticIdentity quadratic_identity(const MediumSpec& spec1, const MediumSpec& spec2, double k, int n);
double quadratic_identity_check(const MediumSpec& spec1, const MediumSpec& spec2, double k, int n);

// max_n |lambda_int_n(spec1) - lambda_int_n(spec2)| for n = 0..N
double ntd_difference(const MediumSpec& spec1, const MediumSpec& spec2, double k, int N);

}  // namespace scatcoef
