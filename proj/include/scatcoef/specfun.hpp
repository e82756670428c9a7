#pragma once

#include <complex>
#include <span>
#include <vector>

namespace scatcoef {

using cplx = std::complex<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

namespace specfun {

double bessel_j(int n, double x);
double bessel_y(int n, double x);
cplx hankel1(int n, double x);
double bessel_j_deriv(int n, double x);
cplx hankel1_deriv(int n, double x);

// J_0..J_nmax (resp. Y_0..Y_nmax) at a single argument.
std::vector<double> bessel_j_range(int nmax, double x);
std::vector<double> bessel_y_range(int nmax, double x);

// Cylindrical wave J_n(k|y|) e^{i n theta_y}.
cplx regular_wave(int n, double k, Point y);

struct GrafTranslation {
  int order = 0;
  Point z;
  double k = 0.0;
  std::vector<cplx> coeffs;  // c_a for a = -order..order
  double residual = 0.0;     // max abs error on the test points

  cplx coeff(int a) const { return coeffs[static_cast<std::size_t>(a + order)]; }
};

// Coefficients c_a = J_a(k|z|) e^{i a theta_z} with
//   J_n(k|y|) e^{i n theta_y} = sum_a c_a J_{n-a}(k|y-z|) e^{i(n-a) theta_{y-z}}.
// The residual is measured for mode n on test_points (a default ring when empty).
GrafTranslation graf_translate(int n, double k, Point z, int order,
                               std::span<const Point> test_points = {});

}  // namespace specfun
}  // namespace scatcoef
