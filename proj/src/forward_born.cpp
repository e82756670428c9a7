#include <cmath>
#include <numbers>

#include "scatcoef/errors.hpp"
#include "scatcoef/forward.hpp"
#include "scatcoef/parallel.hpp"

namespace scatcoef {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double jn(const std::vector<double>& j, int n) {
  const int a = std::abs(n);
  return (n < 0 && (a % 2)) ? -j[a] : j[a];
}

ScatteringMatrix born_radial(const MediumSpec& spec, double k, int N) {
  const RadialProfile& p = spec.radial();
  const double eps0 = spec.background.eps0, mu0 = spec.background.mu0;
  const double w2 = spec.background.omega(k) * spec.background.omega(k);
  const quad::Rule rule = radial_rule(spec, k);
  std::vector<cplx> diag(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    const double de = p.eps(r) - eps0;
    const double dm = p.inv_mu(r) - 1.0 / mu0;
    if (de == 0.0 && dm == 0.0) continue;
    const std::vector<double> j = specfun::bessel_j_range(N + 1, k * r);
    for (int n = 0; n <= N; ++n) {
      const double jm = jn(j, n - 1), jp = j[n + 1];
      // conj(grad u0_n) . grad u0_n = (k^2/2)(J_{n-1}^2 + J_{n+1}^2)
      const double grad2 = 0.5 * k * k * (jm * jm + jp * jp);
      diag[n] += rule.weights[i] * r * (-w2 * mu0 * de * j[n] * j[n] + mu0 * dm * grad2);
    }
  }
  ScatteringMatrix W(N, k);
  for (int n = -N; n <= N; ++n) W(n, n) = kTwoPi * diag[static_cast<std::size_t>(std::abs(n))];
  return W;
}

// W = -omega^2 mu0 B^H diag(weight * d_eps) B over a point cloud.
ScatteringMatrix born_points(const std::vector<Point>& pts, const std::vector<double>& wd, double k, int N,
                             double w2mu0) {
  const int modes = 2 * N + 1;
  const auto np = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd B(np, modes);
  parallel_for(pts.size(), [&](std::size_t i) {
    const double r = std::hypot(pts[i].x, pts[i].y), th = std::atan2(pts[i].y, pts[i].x);
    const std::vector<double> j = specfun::bessel_j_range(N, k * r);
    for (int n = -N; n <= N; ++n)
      B(static_cast<Eigen::Index>(i), n + N) = jn(j, n) * std::polar(1.0, n * th);
  });
  const Eigen::VectorXcd d = Eigen::Map<const Eigen::VectorXd>(wd.data(), np).cast<cplx>();
  ScatteringMatrix W(N, k);
  W.w = -w2mu0 * (B.adjoint() * d.asDiagonal() * B);
  return W;
}

ScatteringMatrix born_grid(const MediumSpec& spec, double k, int N) {
  const GridProfile& g = spec.grid();
  const double eps0 = spec.background.eps0;
  const double w = spec.background.omega(k);
  const double h = 2.0 * spec.R / g.nx;
  const quad::Rule gl = quad::gauss_legendre(kBornCellGauss, -0.5 * h, 0.5 * h);
  std::vector<Point> pts;
  std::vector<double> wd;
  for (int iy = 0; iy < g.nx; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double de = g.eps[static_cast<std::size_t>(iy) * g.nx + ix] - eps0;
      if (de == 0.0) continue;
      const Point c = cell_center(spec.R, g.nx, ix, iy);
      for (int a = 0; a < kBornCellGauss; ++a)
        for (int b = 0; b < kBornCellGauss; ++b) {
          pts.push_back({c.x + gl.nodes[a], c.y + gl.nodes[b]});
          wd.push_back(gl.weights[a] * gl.weights[b] * de);
        }
    }
  if (pts.empty()) return ScatteringMatrix(N, k);
  return born_points(pts, wd, k, N, w * w * spec.background.mu0);
}

ScatteringMatrix born_angular(const MediumSpec& spec, double k, int N) {
  const AngularProfile& a = spec.angular();
  const double eps0 = spec.background.eps0;
  const double w = spec.background.omega(k);
  const int m_theta = 2 * (2 * N + static_cast<int>(a.eps.size())) + 16;
  const std::vector<double> breaks{0.0, spec.R};
  const quad::Rule rr = quad::composite(breaks, std::min(spec.R / 8.0, 2.0 / k), 16);
  std::vector<Point> pts;
  std::vector<double> wd;
  for (int t = 0; t < m_theta; ++t) {
    const double th = kTwoPi * t / m_theta;
    const double de = a(th) - eps0;
    for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
      const double r = rr.nodes[i];
      pts.push_back({r * std::cos(th), r * std::sin(th)});
      wd.push_back(rr.weights[i] * r * (kTwoPi / m_theta) * de);
    }
  }
  return born_points(pts, wd, k, N, w * w * spec.background.mu0);
}

}  // namespace

ScatteringMatrix born_w(const MediumSpec& spec, double k, int N) {
  if (N < 0) throw ValidationError("born_w: negative order");
  if (!(k > 0.0)) throw ValidationError("born_w: k must be positive");
  if (spec.is_radial()) return born_radial(spec, k, N);
  if (spec.is_grid()) return born_grid(spec, k, N);
  return born_angular(spec, k, N);
}

}  // namespace scatcoef
