#include "scatcoef/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scatcoef/errors.hpp"

namespace scatcoef::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kAsymptoticX = 25.0;

void check_finite(double x, const char* fn) {
  if (!std::isfinite(x)) throw ValidationError(std::string(fn) + ": non-finite argument");
}

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// Ascending series for J_n, n >= 0.
double series_j(int n, double x) {
  const double h = 0.5 * x;
  if (h == 0.0) return n == 0 ? 1.0 : 0.0;
  double term = std::exp(n * std::log(h) - std::lgamma(n + 1.0));
  double sum = term;
  const double h2 = h * h;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel large-argument expansion: J = a(P cos chi - Q sin chi), Y = a(P sin chi + Q cos chi).
void hankel_asymptotic(int n, double x, double& j, double& y) {
  const double mu = 4.0 * n * n;
  double p = 1.0, q = 0.0;
  double term = 1.0, prev = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > std::abs(prev) && k > 2) break;
    const int s = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 1) q += s * term;
    else p += s * term;
    if (std::abs(term) < 1e-17) break;
    prev = term;
  }
  const double chi = x - (0.5 * n + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  j = amp * (p * std::cos(chi) - q * std::sin(chi));
  y = amp * (p * std::sin(chi) + q * std::cos(chi));
}

// Miller backward recurrence normalized by J_0 + 2 sum J_2k = 1.
std::vector<double> miller_j(int nmax, double x) {
  const double top = std::max(static_cast<double>(nmax), x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(40.0 * top));
  if (start % 2) ++start;
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  double jp1 = 0.0, j = 1e-30, norm = 0.0;
  for (int i = start; i >= 1; --i) {
    const double jm1 = (2.0 * i / x) * j - jp1;
    jp1 = j;
    j = jm1;
    const int idx = i - 1;
    if (idx <= nmax) out[static_cast<std::size_t>(idx)] = j;
    if (idx % 2 == 0) norm += (idx == 0) ? j : 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      for (int t = idx; t <= nmax; ++t) out[static_cast<std::size_t>(t)] *= 1e-250;
    }
  }
  for (auto& v : out) v /= norm;
  return out;
}

void y01(double x, double& y0, double& y1) {
  if (x >= kAsymptoticX) {
    double j;
    hankel_asymptotic(0, x, j, y0);
    hankel_asymptotic(1, x, j, y1);
    return;
  }
  const int m = static_cast<int>(x + 30.0 + std::sqrt(40.0 * x)) + 2;
  const std::vector<double> jv = (x < 1.0) ? bessel_j_range(m, x) : miller_j(m, x);
  const double lg = std::log(0.5 * x) + kEulerGamma;
  double s = 0.0, ds = 0.0;
  for (int k = 1; 2 * k + 1 <= m; ++k) {
    const double sg = (k % 2 == 0) ? 1.0 : -1.0;
    s += sg * jv[2 * k] / k;
    ds += sg * 0.5 * (jv[2 * k - 1] - jv[2 * k + 1]) / k;
  }
  y0 = (2.0 / kPi) * lg * jv[0] - (4.0 / kPi) * s;
  const double dy0 = (2.0 / kPi) * (jv[0] / x - lg * jv[1]) - (4.0 / kPi) * ds;
  y1 = -dy0;
}

}  // namespace

std::vector<double> bessel_j_range(int nmax, double x) {
  check_finite(x, "bessel_j_range");
  if (x < 0.0) throw ValidationError("bessel_j_range: negative argument");
  if (nmax < 0) throw ValidationError("bessel_j_range: negative order");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (x < 1.0) {
    for (int n = 0; n <= nmax; ++n) out[n] = series_j(n, x);
    return out;
  }
  if (x >= kAsymptoticX && nmax < x) {
    double y;
    hankel_asymptotic(0, x, out[0], y);
    if (nmax >= 1) hankel_asymptotic(1, x, out[1], y);
    for (int n = 1; n < nmax; ++n) out[n + 1] = (2.0 * n / x) * out[n] - out[n - 1];
    return out;
  }
  return miller_j(nmax, x);
}

std::vector<double> bessel_y_range(int nmax, double x) {
  check_finite(x, "bessel_y_range");
  if (x <= 0.0) throw ValidationError("bessel_y_range: argument must be positive");
  std::vector<double> out(static_cast<std::size_t>(std::max(nmax, 1)) + 1, 0.0);
  y01(x, out[0], out[1]);
  for (int n = 1; n < nmax; ++n) out[n + 1] = (2.0 * n / x) * out[n] - out[n - 1];
  out.resize(static_cast<std::size_t>(nmax) + 1);
  return out;
}

double bessel_j(int n, double x) {
  check_finite(x, "bessel_j");
  if (x < 0.0) throw ValidationError("bessel_j: negative argument");
  const int an = std::abs(n);
  const double sgn = n < 0 ? parity(an) : 1.0;
  if (x == 0.0) return an == 0 ? 1.0 : 0.0;
  if (x <= 2.0 || 0.25 * x * x < an + 1.0) return sgn * series_j(an, x);
  if (x >= kAsymptoticX + 0.5 * an * an) {
    double j, y;
    hankel_asymptotic(an, x, j, y);
    return sgn * j;
  }
  return sgn * bessel_j_range(an, x)[an];
}

double bessel_y(int n, double x) {
  check_finite(x, "bessel_y");
  if (x <= 0.0) throw ValidationError("bessel_y: argument must be positive");
  const int an = std::abs(n);
  const double sgn = n < 0 ? parity(an) : 1.0;
  if (x >= kAsymptoticX + 0.5 * an * an) {
    double j, y;
    hankel_asymptotic(an, x, j, y);
    return sgn * y;
  }
  return sgn * bessel_y_range(an, x)[an];
}

cplx hankel1(int n, double x) {
  check_finite(x, "hankel1");
  if (x <= 0.0) throw ValidationError("hankel1: argument must be positive");
  return {bessel_j(n, x), bessel_y(n, x)};
}

double bessel_j_deriv(int n, double x) { return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x)); }

cplx hankel1_deriv(int n, double x) { return 0.5 * (hankel1(n - 1, x) - hankel1(n + 1, x)); }

cplx regular_wave(int n, double k, Point y) {
  const double r = std::hypot(y.x, y.y);
  const double th = std::atan2(y.y, y.x);
  return bessel_j(n, k * r) * std::polar(1.0, n * th);
}

GrafTranslation graf_translate(int n, double k, Point z, int order,
                               std::span<const Point> test_points) {
  if (order < 0) throw ValidationError("graf_translate: negative order");
  check_finite(z.x, "graf_translate");
  check_finite(z.y, "graf_translate");
  GrafTranslation g;
  g.order = order;
  g.z = z;
  g.k = k;
  g.coeffs.resize(2 * static_cast<std::size_t>(order) + 1);
  const double rz = std::hypot(z.x, z.y);
  const double tz = std::atan2(z.y, z.x);
  const std::vector<double> jz = bessel_j_range(order, k * rz);
  for (int a = -order; a <= order; ++a) {
    const double ja = a < 0 ? parity(-a) * jz[-a] : jz[a];
    g.coeffs[static_cast<std::size_t>(a + order)] = ja * std::polar(1.0, a * tz);
  }

  std::vector<Point> ring;
  if (test_points.empty()) {
    const double rho = rz + 1.0 / std::max(k, 1e-12);
    for (int t = 0; t < 16; ++t) {
      const double phi = 2.0 * kPi * (t + 0.5) / 16.0;
      ring.push_back({rho * std::cos(phi), rho * std::sin(phi)});
    }
    test_points = ring;
  }
  double res = 0.0;
  for (const Point& y : test_points) {
    const Point yt{y.x - z.x, y.y - z.y};
    cplx sum = 0.0;
    for (int a = -order; a <= order; ++a) sum += g.coeff(a) * regular_wave(n - a, k, yt);
    res = std::max(res, std::abs(sum - regular_wave(n, k, y)));
  }
  g.residual = res;
  return g;
}

}  // namespace scatcoef::specfun
