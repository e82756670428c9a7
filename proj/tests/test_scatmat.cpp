#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scatcoef/errors.hpp"
#include "scatcoef/forward.hpp"
#include "scatcoef/scatmat.hpp"

using namespace scatcoef;

namespace {

constexpr double kPi = std::numbers::pi;

ScatteringMatrix random_w(int N, double k, unsigned seed) {
  std::mt19937 g(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScatteringMatrix W(N, k);
  for (int n = -N; n <= N; ++n)
    for (int m = -N; m <= N; ++m) W(n, m) = cplx(u(g), u(g));
  return W;
}

MediumSpec offset_blob(int nx) {
  std::vector<double> e(static_cast<std::size_t>(nx) * nx, 1.0);
  for (int iy = 0; iy < nx; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const Point c = cell_center(1.0, nx, ix, iy);
      const double r2 = (c.x - 0.2) * (c.x - 0.2) + (c.y + 0.1) * (c.y + 0.1);
      if (r2 < 0.16) e[static_cast<std::size_t>(iy) * nx + ix] = 1.0 + 0.5 * (1.0 - r2 / 0.16);
    }
  return make_grid(Background{}, 1.0, nx, e);
}

}  // namespace

TEST_CASE("synthesis convention on single entries") {
  ScatteringMatrix W00(2, 1.0);
  W00(0, 0) = 1.0;
  const FarFieldData a = far_field_synthesize(W00, 7, 9);
  for (int p = 0; p < 7; ++p)
    for (int q = 0; q < 9; ++q) CHECK(std::abs(a.A(p, q) - cplx(1.0)) < 1e-15);
  ScatteringMatrix W11(2, 1.0);
  W11(1, 1) = 1.0;
  const FarFieldData b = far_field_synthesize(W11, 7, 9);
  for (int p = 0; p < 7; ++p)
    for (int q = 0; q < 9; ++q) CHECK(std::abs(b.A(p, q) - std::polar(1.0, b.theta_x(q) - b.theta_xi(p))) < 1e-14);
}

TEST_CASE("synthesis matches the direct double sum") {
  const ScatteringMatrix W = random_w(3, 1.0, 1);
  const FarFieldData d = far_field_synthesize(W, 8, 11);
  for (int p = 0; p < 8; ++p)
    for (int q = 0; q < 11; ++q) {
      cplx s = 0.0;
      for (int n = -3; n <= 3; ++n)
        for (int m = -3; m <= 3; ++m)
          s += std::pow(cplx(0.0, 1.0), m - n) * std::polar(1.0, -m * d.theta_xi(p) + n * d.theta_x(q)) * W(n, m);
      CHECK(std::abs(d.A(p, q) - s) < 1e-12);
    }
  CHECK(ipow(-3) == cplx(0.0, 1.0));
  CHECK(ipow(6) == cplx(-1.0, 0.0));
}

TEST_CASE("extraction inverts synthesis at matched order") {
  for (auto [N, P, Q] : {std::tuple{4, 9, 9}, {4, 12, 10}, {7, 32, 15}}) {
    const ScatteringMatrix W = random_w(N, 2.0, 7);
    const FarFieldData d = far_field_synthesize(W, P, Q);
    CHECK(relative_difference(extract_w(d, N), W) < 1e-12);
    CHECK(extraction_residual(d, N) < 1e-12);
  }
  const FarFieldData d = far_field_synthesize(random_w(4, 2.0, 3), 9, 9);
  CHECK_THROWS_AS(extract_w(d, 5), ValidationError);
  CHECK(extraction_residual(far_field_synthesize(random_w(4, 2.0, 3), 11, 11), 3) > 0.1);
}

TEST_CASE("noise is seeded, circular and of the requested size") {
  ScatteringMatrix Z(3, 1.0);
  const FarFieldData clean = far_field_synthesize(Z, 64, 64);
  const FarFieldData a = add_noise(clean, 0.1, 42), b = add_noise(clean, 0.1, 42), c = add_noise(clean, 0.1, 43);
  CHECK(a.A == b.A);
  CHECK(a.A != c.A);
  CHECK(a.noise_sigma == 0.1);
  CHECK(a.rng_seed == 42u);
  const double ms = a.A.squaredNorm() / (64.0 * 64.0);
  CHECK(std::sqrt(ms) == doctest::Approx(0.1).epsilon(0.05));
  CHECK(a.A.real().squaredNorm() == doctest::Approx(a.A.imag().squaredNorm()).epsilon(0.1));
  CHECK(estimate_sigma(a, 3) == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("truncation selection against a hand-computed crossing") {
  const MediumSpec disk = make_radial(Background{}, 1.0, {2.0, 2.0}, {1.0, 1.0});
  const ScatteringMatrix W = radial_w(disk, 1.0, 10);
  const int P = 32, Q = 32;
  const double sigma = 1e-5;
  const FarFieldData d = add_noise(far_field_synthesize(W, P, Q), sigma, 5);
  DecayFit fit;
  fit.N = 10;
  const TruncationReport r = select_truncation(d, fit);
  CHECK(r.noise_floor == doctest::Approx(sigma / 32.0));

  // Independent fit: normal equations of the straight line through log m_n + 2 n log n.
  const ScatteringMatrix E = extract_w(d, 10);
  double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  int used = 0;
  std::vector<double> m(11);
  for (int n = 0; n <= 10; ++n) {
    m[n] = 0.5 * (std::abs(E(n, n)) + std::abs(E(-n, -n)));
    CHECK(m[n] == doctest::Approx(r.measured[n]).epsilon(1e-12));
    if (m[n] <= 3.0 * r.noise_floor) continue;
    const double y = std::log(m[n]) + (n > 0 ? 2.0 * n * std::log(double(n)) : 0.0);
    s0 += 1;
    s1 += n;
    s2 += double(n) * n;
    t0 += y;
    t1 += n * y;
    ++used;
  }
  CHECK(used == r.usable);
  const double b = (s0 * t1 - s1 * t0) / (s0 * s2 - s1 * s1), a = (t0 - b * s1) / s0;
  int crossing = 0;
  for (int n = 0; n <= 10; ++n) {
    const double env = std::exp(a + b * n) / (n > 0 ? std::pow(double(n), 2.0 * n) : 1.0);
    if (env >= r.noise_floor) crossing = n;
  }
  CHECK(r.N_selected == crossing);
  CHECK(r.N_selected >= 2);
  CHECK(r.N_selected < 10);
}

TEST_CASE("truncation selection edge cases") {
  const MediumSpec disk = make_radial(Background{}, 1.0, {2.0, 2.0}, {1.0, 1.0});
  const FarFieldData clean = far_field_synthesize(radial_w(disk, 1.0, 6), 13, 13);
  CHECK(select_truncation(clean).N_selected == 6);
  const FarFieldData loud = add_noise(clean, 100.0, 1);
  CHECK(select_truncation(loud).N_selected == 0);
  const FarFieldData mid = add_noise(clean, 1.0, 1);
  CHECK_THROWS_AS(select_truncation(mid), EstimationError);
}

TEST_CASE("rotation rule under exact quarter turns") {
  const MediumSpec m = offset_blob(32);
  const ScatteringMatrix W = born_w(m, 2.0, 5);
  for (int t = 1; t <= 3; ++t) {
    const ScatteringMatrix Wr = born_w(rotate_grid(m, t), 2.0, 5);
    CHECK(relative_difference(rule_rotate(W, t * kPi / 2), Wr) < 1e-12);
  }
}

TEST_CASE("translation rule converges with the Graf order") {
  const MediumSpec m = offset_blob(32);
  const double h = grid_spacing(m);
  const MediumSpec t = translate_grid(m, 2, -1);
  const Point z{2 * h, -h};
  const int N = 4;
  const ScatteringMatrix ref = born_w(t, 2.0, N);
  double prev = 1e300;
  for (int order : {2, 4, 8, 12}) {
    const TranslationResult tr = rule_translate(born_w(m, 2.0, N + order), z, order);
    const double e = relative_difference(tr.W, ref);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-10);
  CHECK_THROWS_AS(rule_translate(ref, z, N + 1), ValidationError);
}

TEST_CASE("scaling rule") {
  const MediumSpec m = make_radial(Background{}, 1.0, {2.0, 1.7, 1.2}, {1.0, 0.9, 1.0});
  for (double s : {0.5, 1.5, 3.0}) {
    const ScalePrediction p = rule_scale(radial_w(scale_radial(m, s), 1.3, 6), s);
    CHECK(p.k_scaled == doctest::Approx(1.3 * s));
    CHECK(p.defect(radial_w(m, p.k_scaled, 6)) < 1e-9);
  }
  CHECK_THROWS_AS(rule_scale(ScatteringMatrix(1, 1.0), -1.0), ValidationError);
}

TEST_CASE("symmetry measures: reciprocity exact, Hermitian only to first order") {
  const MediumSpec m = offset_blob(24);
  const ScatteringMatrix W = ls_w(m, 1.5, 5);
  CHECK(reciprocity_defect(W) < 1e-10);
  CHECK(hermitian_defect(W) > 1e-6);
  CHECK(hermitian_defect(born_w(m, 1.5, 5)) < 1e-12);
  CHECK(relative_difference(rule_conj_transpose(rule_conj_transpose(W)), W) == 0.0);
}
