// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion; exit code 1 if any fail.
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scatcoef/forward.hpp"
#include "scatcoef/reconstruct.hpp"
#include "scatcoef/scatmat.hpp"
#include "scatcoef/sensitivity.hpp"

using namespace scatcoef;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void guarded(int id, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MediumSpec disk(double eps, double mu = 1.0) { return make_radial(Background{}, 1.0, {eps, eps}, {mu, mu}); }

MediumSpec blob(int nx, double amp) {
  std::vector<double> e(static_cast<std::size_t>(nx) * nx, 1.0);
  for (int iy = 0; iy < nx; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const Point c = cell_center(1.0, nx, ix, iy);
      const double r2 = (c.x - 0.2) * (c.x - 0.2) + (c.y + 0.1) * (c.y + 0.1);
      if (r2 < 0.16) e[static_cast<std::size_t>(iy) * nx + ix] = 1.0 + amp * (1.0 - r2 / 0.16);
    }
  return make_grid(Background{}, 1.0, nx, e);
}

RadialField sin2_field(double scale) {
  std::vector<double> r(65), v(65);
  for (int i = 0; i <= 64; ++i) {
    r[i] = i / 64.0;
    v[i] = scale * std::pow(std::sin(kPi * r[i]), 2);
  }
  return RadialField::pchip(r, v);
}

double bump(double r) { return 1e-3 * std::pow(std::sin(kPi * r), 2); }

MediumSpec bump_medium() {
  std::vector<double> e(201), mu(201, 1.0);
  for (int i = 0; i <= 200; ++i) e[i] = 1.0 + bump(i / 200.0);
  return make_radial(Background{}, 1.0, e, mu);
}

void criterion1() {
  const MediumSpec d = disk(2.0);
  const auto t0 = std::chrono::steady_clock::now();
  const ScatteringMatrix Wr = radial_w(d, 1.0, 8);
  const ScatteringMatrix Wl = ls_w(sample_to_grid(d, 48), 1.0, 8);
  const double t = seconds_since(t0);
  const double e = relative_difference(Wl, Wr);
  report(1, e <= 1e-2 && t <= 60.0,
         fmt("radial vs LS (nx=48) relative Frobenius error %.3e (<= 1e-2), runtime %.1f s (<= 60)", e, t));
}

void criterion2() {
  std::vector<double> rem;
  for (double delta : {4e-2, 2e-2, 1e-2}) {
    const MediumSpec g = sample_to_grid(disk(1.0 + delta), 32);
    rem.push_back((ls_w(g, 1.0, 6).w - born_w(g, 1.0, 6).w).norm());
  }
  const double r1 = rem[1] / rem[0], r2 = rem[2] / rem[1];
  report(2, r1 >= 0.2 && r1 <= 0.35 && r2 >= 0.2 && r2 <= 0.35,
         fmt("Born remainder ratios %.4f, %.4f (in [0.20, 0.35])", r1, r2));
}

void criterion3() {
  const MediumSpec m = blob(32, 0.5);
  const double k = 2.0;
  const int N = 4;
  const ScatteringMatrix W = ls_w(m, k, N);
  double rot = 0.0;
  for (int t = 1; t <= 3; ++t) rot = std::max(rot, relative_difference(rule_rotate(W, t * kPi / 2), ls_w(rotate_grid(m, t), k, N)));

  const MediumSpec rad = make_layered(Background{}, 1.0, {0.5, 1.0}, {2.5, 1.6}, {1.0, 1.2});
  double scl = 0.0;
  for (double s : {0.5, 2.0}) {
    const ScalePrediction p = rule_scale(radial_w(scale_radial(rad, s), 1.3, 8), s);
    scl = std::max(scl, p.defect(radial_w(rad, p.k_scaled, 8)));
  }

  const double h = grid_spacing(m);
  const Point z{2 * h, -h};  // |z| = 0.14 R
  const TranslationResult tr = rule_translate(ls_w(m, k, N + 20), z, 20);
  const double trn = relative_difference(tr.W, ls_w(translate_grid(m, 2, -1), k, N));
  report(3, rot <= 1e-6 && scl <= 1e-9 && trn <= 1e-6,
         fmt("rotation %.2e (<= 1e-6), scaling %.2e (<= 1e-9), translation at Graf order 20, |z|=%.2fR: %.2e (<= 1e-6)",
             rot, scl, std::hypot(z.x, z.y), trn));
}

void criterion4() {
  std::mt19937 g(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScatteringMatrix R(6, 1.0);
  for (int n = -6; n <= 6; ++n)
    for (int m = -6; m <= 6; ++m) R(n, m) = cplx(u(g), u(g));
  const double rt = relative_difference(extract_w(far_field_synthesize(R, 13, 17), 6), R);

  const MediumSpec d = disk(2.0);
  const double k = 1.0, rho = 1000.0;
  const FarFieldData A = far_field_synthesize(radial_w(d, k, 10), 21, 24);
  const LsSolver s(sample_to_grid(d, 48), k);
  double worst = 0.0;
  for (int p : {0, 5}) {
    const FieldSolution sol = s.solve(s.plane_wave(A.theta_xi(p)), INT_MIN);
    const cplx pre = cplx(0.0, -0.25) * std::sqrt(2.0 / (kPi * k * rho)) * std::polar(1.0, k * rho - kPi / 4);
    double num = 0.0, den = 0.0;
    for (int q = 0; q < A.Q; ++q) {
      const double th = A.theta_x(q);
      const cplx direct = s.scattered(sol, {rho * std::cos(th), rho * std::sin(th)});
      num += std::norm(direct - pre * A.A(p, q));
      den += std::norm(pre * A.A(p, q));
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  report(4, rt <= 1e-12 && worst <= 1e-2,
         fmt("extract(synthesize(W)) error %.2e (<= 1e-12); LS field at 1000R vs synthesized far field %.3e (<= 1e-2)", rt,
             worst));
}

void criterion5() {
  const int N = 12;
  const ScatteringMatrix W = radial_w(disk(2.0), 1.0, N);
  double drop = 1e300;
  for (int n = 5; n < N; ++n) drop = std::min(drop, std::log(std::abs(W(n, n))) - std::log(std::abs(W(n + 1, n + 1))));
  // Agreement of the tiny entries with the series solution keeps the drop meaningful.
  double mie = 0.0;
  for (int n = 0; n <= N; ++n) {
    const cplx ref = oracle::mie_w(n, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0);
    mie = std::max(mie, std::abs(W(n, n) - ref) / std::abs(ref));
  }

  const int P = 32;
  const double sigma = 1e-5;
  const FarFieldData d = add_noise(far_field_synthesize(W, P, P), sigma, 11);
  DecayFit fit;
  fit.N = 10;
  const TruncationReport r = select_truncation(d, fit);
  // Hand computation: straight-line fit of log m_n + 2 n log n over entries above 3x the floor.
  const double floor = sigma / P;
  const ScatteringMatrix E = extract_w(d, 10);
  double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  for (int n = 0; n <= 10; ++n) {
    const double m = 0.5 * (std::abs(E(n, n)) + std::abs(E(-n, -n)));
    if (m <= 3.0 * floor) continue;
    const double y = std::log(m) + (n > 0 ? 2.0 * n * std::log(double(n)) : 0.0);
    s0 += 1;
    s1 += n;
    s2 += double(n) * n;
    t0 += y;
    t1 += n * y;
  }
  const double b = (s0 * t1 - s1 * t0) / (s0 * s2 - s1 * s1), a = (t0 - b * s1) / s0;
  int crossing = 0;
  for (int n = 0; n <= 10; ++n)
    if (std::exp(a + b * n) / (n > 0 ? std::pow(double(n), 2.0 * n) : 1.0) >= floor) crossing = n;
  report(5, drop >= 2.0 && mie <= 1e-8 && r.N_selected == crossing,
         fmt("min log-drop for n>=5: %.2f (>= 2); max rel. error vs series %.1e; N_selected %.0f vs hand-computed %.0f",
             drop, mie, r.N_selected, crossing));
}

void criterion6() {
  const MediumSpec spec = make_layered(Background{}, 1.0, {0.5, 1.0}, {2.5, 1.8}, {1.0, 1.2});
  const RadialField b = sin2_field(1.0), z = RadialField::constant(1.0, 0.0);
  const double k = 1.1;
  const int N = 5;
  const ScatteringMatrix W0 = radial_w(spec, k, N);
  std::vector<double> ratios;
  for (const Perturbation& p : {Perturbation{RadialPerturbation{b, z}}, Perturbation{RadialPerturbation{z, b}}}) {
    const ScatteringMatrix S = born_sensitivity(spec, k, N, p, SensitivityForm::Adjoint);
    double rem[3];
    for (int i = 0; i < 3; ++i) {
      const double t = 2e-2 / std::pow(2.0, i);
      rem[i] = (radial_w(apply_perturbation(spec, p, t), k, N).w - W0.w - t * S.w).norm();
    }
    ratios.push_back(rem[1] / rem[0]);
    ratios.push_back(rem[2] / rem[1]);
  }
  bool ok = true;
  for (double r : ratios) ok = ok && r >= 0.2 && r <= 0.35;
  report(6, ok,
         fmt("finite-difference remainder ratios: eps %.4f %.4f, 1/mu %.4f %.4f (in [0.20, 0.35])", ratios[0], ratios[1],
             ratios[2], ratios[3]));
}

void criterion7() {
  const MediumSpec a = make_layered(Background{}, 1.0, {0.4, 1.0}, {3.0, 1.5}, {1.0, 1.0});
  const MediumSpec b = make_layered(Background{}, 1.0, {0.6, 1.0}, {2.0, 1.2}, {1.5, 1.0});
  double worst = 0.0;
  for (int n = 0; n <= 2; ++n) worst = std::max(worst, quadratic_identity_check(a, b, 1.4, n));
  report(7, worst <= 1e-6, fmt("two-layer quadratic identity, n = 0, 1, 2: max relative residual %.2e (<= 1e-6)", worst));
}

void criterion8() {
  const KGrid g = make_k_grid(60.0, 600);
  const MomentFunctional f0 = moment_functional(0, 0, g);
  bool exact = f0.closed_form;
  for (std::size_t j = 0; j < g.k.size(); ++j) exact = exact && f0.g[j] == 1.0 / g.k[j];
  const auto fns = moment_functionals(0, 0, 3, g, MomentOptions{});
  double worst = 0.0;
  for (int l = 1; l <= 3; ++l) worst = std::max(worst, fns[l].residual);
  report(8, exact && worst <= 1e-3,
         std::string("l=0 equals 1/k on every grid point: ") + (exact ? "yes" : "no") +
             fmt("; l=1..3 residual on [0.1R, R] at k_max R = 60: %.2e (<= 1e-3)", worst));
}

void criterion9() {
  const MediumSpec m = bump_medium();
  std::vector<double> errs;
  ReconstructionResult rad40;
  std::vector<ScatteringMatrix> W40;
  KGrid g40;
  for (double km : {10.0, 20.0, 40.0}) {
    const KGrid g = make_k_grid(km, static_cast<int>(10 * km));
    std::vector<ScatteringMatrix> W;
    for (double k : g.k) W.push_back(born_w(m, k, 2));
    ReconstructionResult res = radial_pipeline(W, g, Background{}, 1.0, MultiFrequencyOptions{});
    set_truth(res, [](double r, double) { return bump(r); });
    errs.push_back(res.rel_error);
    if (km == 40.0) {
      rad40 = res;
      W40 = W;
      g40 = g;
    }
  }
  const bool radial_ok = errs[2] <= 0.15 && errs[1] < errs[0] && errs[2] < errs[1];

  // Angular: cos(2 theta) at a single frequency.
  const int M = 64;
  std::vector<double> e(M);
  for (int j = 0; j < M; ++j) e[j] = 1.0 + 1e-3 * std::cos(2.0 * 2.0 * kPi * j / M);
  const MediumSpec ang = make_angular(Background{}, 1.0, e);
  const ReconstructionResult ar = angular_reconstruct(born_w(ang, 2.0, 6), {}, Background{}, 1.0, 4, AngularOptions{});
  double amp = 0.0;
  for (std::size_t i = 0; i < ar.harmonics.size(); ++i)
    if (ar.harmonics[i] == 2) amp = 2.0 * std::abs(ar.fourier[i]);
  const double amp_err = std::abs(amp - 1e-3) / 1e-3;

  // General pipeline on the radial data: harmonic 0 must equal the radial pipeline and the error bound must hold.
  GeneralOptions go;
  go.p_max = 2;
  go.r_samples = 101;
  go.theta_samples = 16;
  ReconstructionResult gen = general_reconstruct(W40, g40, Background{}, 1.0, go);
  set_truth(gen, [](double r, double) { return bump(r); });
  const int na = 2 * go.base.alpha_max + 1;
  double diff0 = 0.0;
  for (int a = 0; a < na; ++a) diff0 = std::max(diff0, std::abs(gen.fourier[2 * na + a] - rad40.fourier[a]));

  // General pipeline on the angular medium against the angular pipeline, over interior radii.
  // Both see c(r, theta) = 1e-3 cos(2 theta); the comparison covers every (p, alpha) term.
  std::vector<ScatteringMatrix> Wa;
  const KGrid ga = make_k_grid(20.0, 200);
  for (double k : ga.k) Wa.push_back(born_w(ang, k, 2));
  const ReconstructionResult gen_ang = general_reconstruct(Wa, ga, Background{}, 1.0, go);
  double num = 0.0, den = 0.0;
  const std::size_t nt = gen_ang.theta.size();
  for (std::size_t i = 0; i < gen_ang.r.size(); ++i) {
    if (gen_ang.r[i] < 0.1 || gen_ang.r[i] > 0.9) continue;
    for (std::size_t t = 0; t < nt; ++t) {
      cplx a = 0.0;
      for (std::size_t h = 0; h < ar.harmonics.size(); ++h)
        a += ar.fourier[h] * std::polar(1.0, ar.harmonics[h] * gen_ang.theta[t]);
      num += std::pow(gen_ang.value[i * nt + t] - a.real(), 2);
      den += a.real() * a.real();
    }
  }
  const double cross = std::sqrt(num / den);

  const bool general_ok = gen.rel_error <= 0.15 && diff0 <= 1e-15 && cross <= 0.20;
  report(9, radial_ok && amp_err <= 0.05 && general_ok,
         fmt("radial L2 errors k_max 10/20/40: %.4f %.4f %.4f (<= 0.15, decreasing); ", errs[0], errs[1], errs[2]) +
             fmt("cos(2theta) amplitude error %.2e (<= 0.05); ", amp_err) +
             fmt("general: radial case %.4f, harmonic-0 match %.1e, angular medium vs angular pipeline on [0.1R, 0.9R] %.3f (<= 0.20)",
                 gen.rel_error, diff0, cross));
}

void criterion10() {
  const int M = 64;
  std::vector<double> e(M);
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    e[j] = 1.0 + 1e-3 * (std::cos(4 * th) + std::cos(8 * th));
  }
  const MediumSpec ang = make_angular(Background{}, 1.0, e);
  const ReconstructionResult r = angular_reconstruct(born_w(ang, 1.0, 8), {}, Background{}, 1.0, 8, AngularOptions{});
  double a4 = 0.0, a8 = 0.0;
  bool exact = r.missing.empty();
  for (std::size_t i = 0; i < r.harmonics.size(); ++i) {
    const int l = r.harmonics[i];
    const double direct = 1.0 / std::abs(angular_c(-l, 0, 1.0, 1.0));
    // Independent closed-form evaluation; its roundoff is absolute, about 1e-16 R^2.
    const double series = angular_c_fourier(-l, 0, 1.0, 1.0, 64);
    exact = exact && r.amplification[i] == direct && std::abs(std::abs(series) - 1.0 / direct) <= 1e-14;
    if (l == 4) a4 = r.amplification[i];
    if (l == 8) a8 = r.amplification[i];
  }
  report(10, exact && a8 / a4 >= 10.0,
         fmt("amplification 1/|C| at kR=1: l=4 %.3e, l=8 %.3e, growth %.3e (>= 10); matches direct C: ", a4, a8, a8 / a4) +
             (exact ? "yes" : "no"));
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  guarded(10, criterion10);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
