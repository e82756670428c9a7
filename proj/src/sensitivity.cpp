#include "scatcoef/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scatcoef/errors.hpp"
#include "scatcoef/parallel.hpp"

namespace scatcoef {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const RadialPerturbation& radial_pert(const Perturbation& p) {
  if (!std::holds_alternative<RadialPerturbation>(p.field))
    throw ValidationError("perturbation: radial medium needs a radial perturbation");
  return std::get<RadialPerturbation>(p.field);
}

const GridPerturbation& grid_pert(const MediumSpec& spec, const Perturbation& p) {
  if (!std::holds_alternative<GridPerturbation>(p.field))
    throw ValidationError("perturbation: grid medium needs a grid perturbation");
  const auto& g = std::get<GridPerturbation>(p.field);
  const int nx = spec.grid().nx;
  if (g.d_eps.size() != static_cast<std::size_t>(nx) * nx)
    throw ValidationError("perturbation: grid size does not match the medium");
  return g;
}

// Spec whose knot set contains the knots of `other` (added with weight zero).
MediumSpec with_knots_of(const MediumSpec& spec, const RadialField& e, const RadialField& im) {
  RadialProfile p = spec.radial();
  p.eps = p.eps.plus(e, 0.0);
  p.inv_mu = p.inv_mu.plus(im, 0.0);
  p.serializable = false;
  return MediumSpec{spec.background, spec.R, std::move(p)};
}

ScatteringMatrix sensitivity_radial(const MediumSpec& spec, double k, int N, const RadialPerturbation& pert,
                                    SensitivityForm form) {
  const double mu0 = spec.background.mu0;
  const double w = spec.background.omega(k);
  const quad::Rule rule = radial_rule(with_knots_of(spec, pert.d_eps, pert.d_inv_mu), k);
  const RadialProfile& prof = spec.radial();
  std::vector<cplx> diag(static_cast<std::size_t>(N) + 1);
  parallel_for(diag.size(), [&](std::size_t i) {
    const int n = static_cast<int>(i);
    const RadialModeSolution s = solve_radial_mode(spec, k, n, rule.nodes);
    const cplx A = match_mode(spec, k, n, s.u_R, s.flux_R).A;
    const cplx amp = form == SensitivityForm::Adjoint ? A * A : cplx(std::norm(A));
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double r = rule.nodes[q];
      const double de = pert.d_eps(r), dm = pert.d_inv_mu(r);
      if (de == 0.0 && dm == 0.0) continue;
      const double du = s.flux[q] / prof.inv_mu(r);
      const double v = s.u[q];
      acc += rule.weights[q] * r * (mu0 * dm * (du * du + n * n * v * v / (r * r)) - w * w * mu0 * de * v * v);
    }
    diag[i] = kTwoPi * amp * acc;
  });
  ScatteringMatrix W(N, k);
  for (int n = -N; n <= N; ++n) W(n, n) = diag[static_cast<std::size_t>(std::abs(n))];
  return W;
}

ScatteringMatrix sensitivity_grid(const MediumSpec& spec, double k, int N, const GridPerturbation& pert,
                                  SensitivityForm form) {
  const LsSolver solver(spec, k);
  const auto& cells = solver.cells();
  const auto nc = static_cast<Eigen::Index>(cells.size());
  const int modes = 2 * N + 1;
  Eigen::MatrixXcd U(nc, modes);
  for (int c = 0; c < modes; ++c) {
    const FieldSolution f = solver.solve_mode(c - N);
    U.col(c) = Eigen::Map<const Eigen::VectorXcd>(f.u.data(), nc);
  }
  Eigen::MatrixXcd V(nc, modes);  // V.col(n) pairs with u_m
  for (int n = -N; n <= N; ++n) {
    if (form == SensitivityForm::Adjoint) V.col(n + N) = ((n % 2 == 0) ? 1.0 : -1.0) * U.col(-n + N);
    else V.col(n + N) = U.col(n + N).conjugate();
  }
  Eigen::VectorXcd d(nc);
  for (Eigen::Index i = 0; i < nc; ++i) d[i] = pert.d_eps[static_cast<std::size_t>(cells[static_cast<std::size_t>(i)])];
  const double h = solver.spacing();
  const double w = spec.background.omega(k);
  ScatteringMatrix W(N, k);
  W.w = -(w * w * spec.background.mu0 * h * h) * (V.transpose() * d.asDiagonal() * U);
  return W;
}

}  // namespace

MediumSpec apply_perturbation(const MediumSpec& spec, const Perturbation& pert, double t) {
  if (spec.is_radial()) {
    const auto& rp = radial_pert(pert);
    RadialProfile p = spec.radial();
    p.eps = p.eps.plus(rp.d_eps, t);
    p.inv_mu = p.inv_mu.plus(rp.d_inv_mu, t);
    p.serializable = false;
    MediumSpec out{spec.background, spec.R, std::move(p)};
    const auto& q = out.radial();
    std::vector<double> pts = q.eps.knots();
    const auto more = q.inv_mu.knots();
    pts.insert(pts.end(), more.begin(), more.end());
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double mid = 0.5 * (pts[i] + pts[i + 1]);
      for (double x : {pts[i], mid, pts[i + 1]})
        if (!(q.eps.eval_on(x, mid) > 0.0) || !(q.inv_mu.eval_on(x, mid) > 0.0))
          throw ValidationError("apply_perturbation: perturbed medium is not positive");
    }
    return out;
  }
  if (spec.is_grid()) {
    const auto& gp = grid_pert(spec, pert);
    std::vector<double> v = spec.grid().eps;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += t * gp.d_eps[i];
    return make_grid(spec.background, spec.R, spec.grid().nx, v);
  }
  throw ValidationError("apply_perturbation: angular media are not supported");
}

ContrastNorm perturbation_norm(const MediumSpec& spec, const Perturbation& pert) {
  ContrastNorm c;
  if (spec.is_grid()) {
    for (double v : grid_pert(spec, pert).d_eps) c.d_eps = std::max(c.d_eps, std::abs(v));
  } else {
    const auto& rp = radial_pert(pert);
    std::vector<double> pts = rp.d_eps.knots();
    const auto more = rp.d_inv_mu.knots();
    pts.insert(pts.end(), more.begin(), more.end());
    pts.push_back(0.0);
    pts.push_back(spec.R);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double mid = 0.5 * (pts[i] + pts[i + 1]);
      for (int s = 0; s <= 8; ++s) {
        const double x = pts[i] + (pts[i + 1] - pts[i]) * s / 8.0;
        c.d_eps = std::max(c.d_eps, std::abs(rp.d_eps.eval_on(x, mid)));
        c.d_inv_mu = std::max(c.d_inv_mu, std::abs(rp.d_inv_mu.eval_on(x, mid)));
      }
    }
  }
  c.eps_hat = std::hypot(c.d_eps, c.d_inv_mu);
  return c;
}

ScatteringMatrix born_sensitivity(const MediumSpec& spec, double k, int N, const Perturbation& pert,
                                  SensitivityForm form) {
  if (N < 0) throw ValidationError("born_sensitivity: negative order");
  if (spec.is_radial()) return sensitivity_radial(spec, k, N, radial_pert(pert), form);
  if (spec.is_grid()) return sensitivity_grid(spec, k, N, grid_pert(spec, pert), form);
  throw ValidationError("born_sensitivity: angular media are not supported");
}

QuadraticIdentity quadratic_identity(const MediumSpec& spec1, const MediumSpec& spec2, double k, int n) {
  const auto& p1 = spec1.radial();
  const auto& p2 = spec2.radial();
  if (std::abs(spec1.R - spec2.R) > 1e-14 * spec1.R ||
      spec1.background.eps0 != spec2.background.eps0 || spec1.background.mu0 != spec2.background.mu0)
    throw ValidationError("quadratic_identity: media must share R and background");
  const quad::Rule rule = radial_rule(with_knots_of(spec1, p2.eps, p2.inv_mu), k);
  const RadialModeSolution s1 = solve_radial_mode(spec1, k, n, rule.nodes);
  const RadialModeSolution s2 = solve_radial_mode(spec2, k, n, rule.nodes);
  const double w = spec1.background.omega(k);
  QuadraticIdentity q;
  // unit boundary flux: v = u / flux(R), lambda = v(R)
  const double f1 = 1.0 / s1.flux_R, f2 = 1.0 / s2.flux_R;
  q.boundary = kTwoPi * spec1.R * (s2.u_R * f2 - s1.u_R * f1);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    const double v1 = s1.u[i] * f1, v2 = s2.u[i] * f2;
    const double d1 = s1.flux[i] * f1 / p1.inv_mu(r), d2 = s2.flux[i] * f2 / p2.inv_mu(r);
    const double dim = p1.inv_mu(r) - p2.inv_mu(r);
    const double de = p1.eps(r) - p2.eps(r);
    acc += rule.weights[i] * r * (dim * (d1 * d2 + n * n * v1 * v2 / (r * r)) - w * w * de * v1 * v2);
  }
  q.volume = kTwoPi * acc;
  const double den = std::max(std::abs(q.boundary), std::abs(q.volume));
  q.residual = den > 0.0 ? std::abs(q.boundary - q.volume) / den : 0.0;
  return q;
}

double quadratic_identity_check(const MediumSpec& spec1, const MediumSpec& spec2, double k, int n) {
  return quadratic_identity(spec1, spec2, k, n).residual;
}

double ntd_difference(const MediumSpec& spec1, const MediumSpec& spec2, double k, int N) {
  const NtDSpectrum a = ntd_spectrum(spec1, k, N);
  const NtDSpectrum b = ntd_spectrum(spec2, k, N);
  double d = 0.0;
  for (int n = 0; n <= N; ++n) d = std::max(d, std::abs(a.lambda_int[n] - b.lambda_int[n]));
  return d;
}

}  // namespace scatcoef
