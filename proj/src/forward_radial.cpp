#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "scatcoef/errors.hpp"
#include "scatcoef/forward.hpp"
#include "scatcoef/parallel.hpp"

namespace scatcoef {

namespace {

constexpr double kRtol = 1e-12;
constexpr double kResonanceTol = 1e-12;

using State = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct ModeRhs {
  const RadialProfile* p;
  double w2;  // omega^2
  double n2;
  double mid;  // selects the profile piece for the current interval

  State operator()(double r, const State& y) const {
    const double eps = p->eps.eval_on(r, mid);
    const double im = p->inv_mu.eval_on(r, mid);
    return {y[1] / (im * r), (n2 * im / r - w2 * eps * r) * y[0]};
  }
};

// J_{n+1}(x)/J_n(x) by the backward continued fraction, for small x.
double bessel_ratio(int n, double x) {
  double t = 0.0;
  for (int j = 60; j >= 1; --j) t = x / (2.0 * (n + j) - x * t);
  return t;
}

std::vector<double> integration_breaks(const MediumSpec& spec) {
  const auto& p = spec.radial();
  std::vector<double> b = p.eps.knots();
  const auto more = p.inv_mu.knots();
  b.insert(b.end(), more.begin(), more.end());
  b.push_back(0.0);
  b.push_back(spec.R);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  while (!b.empty() && b.back() > spec.R) b.pop_back();
  return b;
}

double max_local_wavenumber(const MediumSpec& spec, double k) {
  const auto& p = spec.radial();
  const double w = spec.background.omega(k);
  double best = k;
  for (double r : integration_breaks(spec)) {
    const double e = std::max(p.eps.eval_on(r, std::max(r - 1e-12, 0.0)), p.eps.eval_on(r, r));
    const double im = std::min(p.inv_mu.eval_on(r, std::max(r - 1e-12, 0.0)), p.inv_mu.eval_on(r, r));
    best = std::max(best, w * std::sqrt(std::max(e, 0.0) / im));
  }
  return best;
}

}  // namespace

double relative_difference(const ScatteringMatrix& a, const ScatteringMatrix& ref) {
  if (a.N != ref.N) throw ValidationError("relative_difference: orders differ");
  const double den = ref.norm();
  const double num = (a.w - ref.w).norm();
  return den > 0.0 ? num / den : num;
}

quad::Rule radial_rule(const MediumSpec& spec, double k, int order) {
  const std::vector<double> breaks = integration_breaks(spec);
  const double kappa = max_local_wavenumber(spec, k);
  return quad::composite(breaks, std::min(spec.R / 8.0, 2.0 / kappa), order);
}

RadialModeSolution solve_radial_mode(const MediumSpec& spec, double k, int n, const std::vector<double>& output_r) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("radial mode: k must be positive");
  const RadialProfile& prof = spec.radial();
  const int an = std::abs(n);
  const double w = spec.background.omega(k);
  const std::vector<double> breaks = integration_breaks(spec);
  const double r0 = std::min(1e-5 * spec.R, 1e-2 * breaks[1]);

  // Local homogeneous start: u = J_n(kappa0 r), r u'/mu = (n - x J_{n+1}/J_n)/mu.
  const double eps0 = prof.eps.eval_on(0.0, 0.0);
  const double im0 = prof.inv_mu.eval_on(0.0, 0.0);
  const double x0 = w * std::sqrt(eps0 / im0) * r0;
  State y{1.0, im0 * (an - x0 * bessel_ratio(an, x0))};
  double log_scale = 0.0;

  RadialModeSolution sol;
  sol.n = n;
  sol.k = k;
  sol.r = output_r;
  sol.u.assign(output_r.size(), 0.0);
  sol.flux.assign(output_r.size(), 0.0);
  std::vector<double> out_log(output_r.size(), 0.0);
  for (std::size_t i = 1; i < output_r.size(); ++i)
    if (output_r[i] < output_r[i - 1]) throw ValidationError("radial mode: output radii must be sorted");

  std::size_t next_out = 0;
  while (next_out < output_r.size() && output_r[next_out] <= r0) {
    const double rr = output_r[next_out];
    sol.u[next_out] = rr > 0.0 ? std::pow(rr / r0, an) : (an == 0 ? 1.0 : 0.0);
    sol.flux[next_out] = rr > 0.0 ? y[1] * std::pow(rr / r0, an) / rr : 0.0;
    ++next_out;
  }

  double r = r0;
  double h = r0;
  const double n2 = static_cast<double>(an) * an;
  for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
    const double a = breaks[seg], b = breaks[seg + 1];
    if (b <= r) continue;
    const ModeRhs f{&prof, w * w, n2, 0.5 * (a + b)};
    while (r < b) {
      double target = b;
      if (next_out < output_r.size() && output_r[next_out] < target) target = output_r[next_out];
      h = std::min(h, target - r);
      bool last = false;
      for (int attempt = 0;; ++attempt) {
        if (attempt > 200 || h < 1e-15 * std::max(1.0, r)) throw SolverError("radial mode: step size underflow");
        if (r + h >= target * (1.0 - 1e-15)) {
          h = target - r;
          last = true;
        } else {
          last = false;
        }
        const State k1 = f(r, y);
        auto at = [&](std::initializer_list<std::pair<double, const State*>> terms) {
          State s = y;
          for (auto& [c, kk] : terms) {
            s[0] += h * c * (*kk)[0];
            s[1] += h * c * (*kk)[1];
          }
          return s;
        };
        const State k2 = f(r + c2 * h, at({{a21, &k1}}));
        const State k3 = f(r + c3 * h, at({{a31, &k1}, {a32, &k2}}));
        const State k4 = f(r + c4 * h, at({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = f(r + c5 * h, at({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = f(r + h, at({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State yn = at({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = f(r + h, yn);
        const double scale_floor = 1e-8 * std::max(std::abs(y[0]), std::abs(y[1]));
        double err = 0.0;
        for (int c = 0; c < 2; ++c) {
          const double e = h * (e1 * k1[c] + e3 * k3[c] + e4 * k4[c] + e5 * k5[c] + e6 * k6[c] + e7 * k7[c]);
          const double sc = kRtol * (std::max(std::abs(y[c]), std::abs(yn[c])) + scale_floor);
          err = std::max(err, std::abs(e) / sc);
        }
        const double fac = err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        if (err <= 1.0 && std::isfinite(err)) {
          r = last ? target : r + h;
          y = yn;
          ++sol.steps;
          const double big = std::max(std::abs(y[0]), std::abs(y[1]));
          if (big > 1e50 || big < 1e-50) {
            y[0] /= big;
            y[1] /= big;
            log_scale += std::log(big);
          }
          h *= fac;
          break;
        }
        h *= std::min(fac, 0.9);
      }
      while (next_out < output_r.size() && output_r[next_out] <= r) {
        sol.u[next_out] = y[0];
        sol.flux[next_out] = y[1] / r;
        out_log[next_out] = log_scale;
        ++next_out;
      }
      if (sol.steps > 5000000) throw SolverError("radial mode: step budget exhausted");
    }
  }
  const double R = spec.R;
  const double norm = std::max(std::abs(y[0]), std::abs(y[1]));
  sol.u_R = y[0] / norm;
  sol.flux_R = y[1] / (R * norm);
  for (std::size_t i = 0; i < output_r.size(); ++i) {
    const double f = std::exp(out_log[i] - log_scale) / norm;
    sol.u[i] *= f;
    sol.flux[i] *= f;
  }
  if (std::abs(sol.flux_R * R) < kResonanceTol)
    throw ResonanceError("radial mode " + std::to_string(n) + ": boundary flux vanishes (interior resonance) at k=" +
                             std::to_string(k),
                         n);
  return sol;
}

ModeMatch match_mode(const MediumSpec& spec, double k, int n, double u_R, double flux_R) {
  const double x = k * spec.R;
  const double j = specfun::bessel_j(n, x), jd = specfun::bessel_j_deriv(n, x);
  const cplx hh = specfun::hankel1(n, x), hd = specfun::hankel1_deriv(n, x);
  const double g = k / spec.background.mu0;
  // A u_R = J + b H,  A flux_R = g (J' + b H')
  const cplx b = -(flux_R * j - u_R * g * jd) / (flux_R * hh - u_R * g * hd);
  const cplx A = (j + b * hh) / u_R;
  if (std::abs(u_R) < 1e-300) return {b, (g * (jd + b * hd)) / flux_R};
  return {b, A};
}

NtDSpectrum ntd_spectrum(const MediumSpec& spec, double k, int N) {
  if (N < 0) throw ValidationError("ntd_spectrum: negative order");
  NtDSpectrum s;
  s.k = k;
  s.N = N;
  s.lambda_int.resize(N + 1);
  s.lambda0.resize(N + 1);
  s.lambda_ext.resize(N + 1);
  const double mu0 = spec.background.mu0;
  const double x = k * spec.R;
  parallel_for(static_cast<std::size_t>(N) + 1, [&](std::size_t i) {
    const int n = static_cast<int>(i);
    const RadialModeSolution m = solve_radial_mode(spec, k, n);
    s.lambda_int[i] = m.u_R / m.flux_R;
    const double jd = specfun::bessel_j_deriv(n, x);
    s.lambda0[i] = jd != 0.0 ? cplx(mu0 * specfun::bessel_j(n, x) / (k * jd))
                             : cplx(std::numeric_limits<double>::infinity());
    s.lambda_ext[i] = mu0 * specfun::hankel1(n, x) / (k * specfun::hankel1_deriv(n, x));
  });
  return s;
}

ScatteringMatrix radial_w(const MediumSpec& spec, double k, int N) {
  if (N < 0) throw ValidationError("radial_w: negative order");
  ScatteringMatrix W(N, k);
  if (contrast_norm(spec).eps_hat == 0.0) return W;
  std::vector<cplx> b(static_cast<std::size_t>(N) + 1);
  parallel_for(b.size(), [&](std::size_t i) {
    const int n = static_cast<int>(i);
    const RadialModeSolution m = solve_radial_mode(spec, k, n);
    b[i] = match_mode(spec, k, n, m.u_R, m.flux_R).b;
  });
  for (int n = -N; n <= N; ++n) W(n, n) = cplx(0.0, 4.0) * b[static_cast<std::size_t>(std::abs(n))];
  return W;
}

}  // namespace scatcoef
