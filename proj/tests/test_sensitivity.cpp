#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scatcoef/errors.hpp"
#include "scatcoef/forward.hpp"
#include "scatcoef/sensitivity.hpp"

using namespace scatcoef;

namespace {

RadialField bump(double R) {
  std::vector<double> r(33), v(33);
  for (int i = 0; i <= 32; ++i) {
    r[i] = R * i / 32;
    v[i] = std::pow(std::sin(std::numbers::pi * r[i] / R), 2);
  }
  return RadialField::pchip(r, v);
}

// Remainders ||W(t) - W(0) - t S|| for t, t/2, t/4.
std::array<double, 3> remainders(const MediumSpec& spec, const Perturbation& p, const ScatteringMatrix& S, double k,
                                 int N, double t) {
  const ScatteringMatrix W0 = radial_w(spec, k, N);
  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i) {
    const double h = t / std::pow(2.0, i);
    r[i] = (radial_w(apply_perturbation(spec, p, h), k, N).w - W0.w - h * S.w).norm();
  }
  return r;
}

}  // namespace

TEST_CASE("at zero contrast the sensitivity is the Born map") {
  const MediumSpec bg = make_radial(Background{}, 1.0, {1.0, 1.0}, {1.0, 1.0});
  const Perturbation p{RadialPerturbation{bump(1.0), RadialField::constant(1.0, 0.0)}};
  const ScatteringMatrix S = born_sensitivity(bg, 1.3, 5, p, SensitivityForm::Adjoint);
  const ScatteringMatrix B = born_w(apply_perturbation(bg, p, 1.0), 1.3, 5);
  CHECK(relative_difference(S, B) < 1e-10);
  const ScatteringMatrix C = born_sensitivity(bg, 1.3, 5, p, SensitivityForm::Conjugate);
  CHECK(relative_difference(C, B) < 1e-10);
}

TEST_CASE("adjoint sensitivity is the exact derivative for eps and 1/mu") {
  const MediumSpec spec = make_layered(Background{}, 1.0, {0.5, 1.0}, {2.5, 1.8}, {1.0, 1.2});
  const RadialField b = bump(1.0), z = RadialField::constant(1.0, 0.0);
  for (const Perturbation& p : {Perturbation{RadialPerturbation{b, z}}, Perturbation{RadialPerturbation{z, b}}}) {
    const ScatteringMatrix S = born_sensitivity(spec, 1.1, 5, p, SensitivityForm::Adjoint);
    const auto r = remainders(spec, p, S, 1.1, 5, 2e-2);
    CHECK(r[1] / r[0] == doctest::Approx(0.25).epsilon(0.15));
    CHECK(r[2] / r[1] == doctest::Approx(0.25).epsilon(0.15));
  }
}

TEST_CASE("the literal conjugate pairing is only first-order accurate off the background") {
  const MediumSpec spec = make_radial(Background{}, 1.0, {2.0, 2.0}, {1.0, 1.0});
  const Perturbation p{RadialPerturbation{bump(1.0), RadialField::constant(1.0, 0.0)}};
  const ScatteringMatrix S = born_sensitivity(spec, 1.0, 4, p, SensitivityForm::Conjugate);
  const auto r = remainders(spec, p, S, 1.0, 4, 2e-2);
  CHECK(r[1] / r[0] > 0.4);
}

TEST_CASE("grid sensitivity matches finite differences of the LS solver") {
  const MediumSpec base = sample_to_grid(make_radial(Background{}, 1.0, {1.6, 1.6}, {1.0, 1.0}), 24);
  std::vector<double> d(24 * 24, 0.0);
  for (int iy = 0; iy < 24; ++iy)
    for (int ix = 0; ix < 24; ++ix)
      if (cell_in_disk(1.0, 24, ix, iy)) {
        const Point c = cell_center(1.0, 24, ix, iy);
        d[iy * 24 + ix] = 1.0 + c.x;
      }
  const Perturbation p{GridPerturbation{d}};
  const ScatteringMatrix S = born_sensitivity(base, 1.0, 3, p, SensitivityForm::Adjoint);
  const ScatteringMatrix W0 = ls_w(base, 1.0, 3);
  double prev = 0.0;
  for (double h : {2e-2, 1e-2, 5e-3}) {
    const double r = (ls_w(apply_perturbation(base, p, h), 1.0, 3).w - W0.w - h * S.w).norm();
    if (prev > 0.0) CHECK(r / prev == doctest::Approx(0.25).epsilon(0.15));
    prev = r;
  }
}

TEST_CASE("perturbations that break positivity are rejected") {
  const MediumSpec spec = make_radial(Background{}, 1.0, {1.2, 1.2}, {1.0, 1.0});
  const Perturbation p{RadialPerturbation{RadialField::constant(1.0, -1.0), RadialField::constant(1.0, 0.0)}};
  CHECK_NOTHROW(apply_perturbation(spec, p, 0.1));
  CHECK_THROWS_AS(apply_perturbation(spec, p, 2.0), ValidationError);
  CHECK(perturbation_norm(spec, p).d_eps == doctest::Approx(1.0));
}

TEST_CASE("quadratic identity between two radial media") {
  const MediumSpec a = make_layered(Background{}, 1.0, {0.4, 1.0}, {3.0, 1.5}, {1.0, 1.0});
  const MediumSpec b = make_layered(Background{}, 1.0, {0.6, 1.0}, {2.0, 1.2}, {1.5, 1.0});
  for (int n = 0; n <= 3; ++n) {
    const QuadraticIdentity q = quadratic_identity(a, b, 1.4, n);
    CHECK(q.residual < 1e-8);
    CHECK(std::abs(q.boundary) > 1e-6);
    CHECK(quadratic_identity_check(a, b, 1.4, n) == doctest::Approx(q.residual));
  }
  const MediumSpec same = a;
  CHECK(ntd_difference(a, same, 1.4, 4) == 0.0);
  CHECK(ntd_difference(a, b, 1.4, 4) > 1e-3);
}
