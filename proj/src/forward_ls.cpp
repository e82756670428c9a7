#include <climits>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "scatcoef/errors.hpp"
#include "scatcoef/forward.hpp"
#include "scatcoef/parallel.hpp"

namespace scatcoef {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kRcondFloor = 1e-14;

cplx fundamental(double k, double dist) { return cplx(0.0, -0.25) * specfun::hankel1(0, k * dist); }

}  // namespace

struct LsSolver::Impl {
  double k = 0.0, R = 0.0, h = 0.0;
  int nx = 0;
  std::vector<int> cells;
  std::vector<int> ix, iy;
  Eigen::VectorXd q;
  // table[|dx| * nx + |dy|] = h^2 Phi, with the self-cell integral at 0
  std::vector<cplx> table;
  bool dense = true;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  double rcond = 1.0;

  cplx kernel(int i, int j) const {
    return table[static_cast<std::size_t>(std::abs(ix[i] - ix[j])) * nx + std::abs(iy[i] - iy[j])];
  }

  // y = (I + k^2 K Q) x
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
    const int n = static_cast<int>(cells.size());
    Eigen::VectorXcd qx = (q.cast<cplx>().array() * x.array()).matrix();
    Eigen::VectorXcd y(n);
    const double k2 = k * k;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
      const int i = static_cast<int>(ii);
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) s += kernel(i, j) * qx[j];
      y[i] = x[i] + k2 * s;
    });
    return y;
  }

  Eigen::VectorXcd gmres(const Eigen::VectorXcd& b) const {
    const int n = static_cast<int>(b.size());
    const int restart = 80;
    Eigen::VectorXcd x = b;
    const double bn = b.norm();
    if (bn == 0.0) return Eigen::VectorXcd::Zero(n);
    for (int outer = 0; outer < 50; ++outer) {
      Eigen::VectorXcd r = b - apply(x);
      const double beta = r.norm();
      if (beta <= 1e-13 * bn) return x;
      Eigen::MatrixXcd V(n, restart + 1);
      Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(restart + 1, restart);
      V.col(0) = r / beta;
      int used = 0;
      for (int j = 0; j < restart; ++j) {
        Eigen::VectorXcd w = apply(V.col(j));
        for (int i = 0; i <= j; ++i) {
          H(i, j) = V.col(i).dot(w);
          w -= H(i, j) * V.col(i);
        }
        H(j + 1, j) = w.norm();
        used = j + 1;
        // small least-squares problem for the current residual estimate
        Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(j + 2);
        e1[0] = beta;
        Eigen::VectorXcd yk = H.topLeftCorner(j + 2, j + 1).colPivHouseholderQr().solve(e1);
        const double est = (e1 - H.topLeftCorner(j + 2, j + 1) * yk).norm();
        if (std::abs(H(j + 1, j)) < 1e-300 || est <= 1e-13 * bn) break;
        V.col(j + 1) = w / H(j + 1, j);
      }
      Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(used + 1);
      e1[0] = beta;
      Eigen::VectorXcd yk = H.topLeftCorner(used + 1, used).colPivHouseholderQr().solve(e1);
      x += V.leftCols(used) * yk;
    }
    return x;
  }
};

LsSolver::LsSolver(const MediumSpec& spec, double k) : impl_(std::make_unique<Impl>()) {
  if (!(k > 0.0)) throw ValidationError("ls_solve: k must be positive");
  const GridProfile& g = spec.grid();
  Impl& s = *impl_;
  s.k = k;
  s.R = spec.R;
  s.nx = g.nx;
  s.h = 2.0 * spec.R / g.nx;
  const double eps0 = spec.background.eps0;
  double max_eps = eps0;
  for (int y = 0; y < g.nx; ++y)
    for (int x = 0; x < g.nx; ++x) {
      if (!cell_in_disk(spec.R, g.nx, x, y)) continue;
      const double e = g.eps[static_cast<std::size_t>(y) * g.nx + x];
      s.cells.push_back(y * g.nx + x);
      s.ix.push_back(x);
      s.iy.push_back(y);
      max_eps = std::max(max_eps, e);
    }
  const int n = static_cast<int>(s.cells.size());
  s.q.resize(n);
  for (int i = 0; i < n; ++i) s.q[i] = (g.eps[static_cast<std::size_t>(s.cells[i])] - eps0) / eps0;

  const double wavelength = 2.0 * std::numbers::pi / (k * std::sqrt(max_eps / eps0));
  if (wavelength / s.h < 10.0)
    throw ValidationError("ls_solve: grid has " + std::to_string(wavelength / s.h) +
                          " cells per wavelength, need >= 10");

  s.table.assign(static_cast<std::size_t>(g.nx) * g.nx, 0.0);
  parallel_for(static_cast<std::size_t>(g.nx), [&](std::size_t dx) {
    for (int dy = 0; dy < g.nx; ++dy) {
      if (dx == 0 && dy == 0) continue;
      s.table[dx * g.nx + dy] = s.h * s.h * fundamental(k, s.h * std::hypot(double(dx), double(dy)));
    }
  });
  // integral of Phi over the equal-area disk of radius a = h / sqrt(pi)
  const double ka = k * s.h / std::sqrt(std::numbers::pi);
  s.table[0] = cplx(0.0, -std::numbers::pi / (2.0 * k * k)) *
               (ka * specfun::hankel1(1, ka) + cplx(0.0, 2.0 / std::numbers::pi));

  s.dense = g.nx <= kDenseGridLimit;
  if (s.dense) {
    Eigen::MatrixXcd A(n, n);
    const double k2 = k * k;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t jj) {
      const int j = static_cast<int>(jj);
      for (int i = 0; i < n; ++i) A(i, j) = k2 * s.kernel(i, j) * s.q[j];
      A(j, j) += 1.0;
    });
    s.lu.compute(A);
    s.rcond = s.lu.rcond();
    if (!(s.rcond > kRcondFloor))
      throw SolverError("ls_solve: near-singular collocation system, reciprocal condition estimate " +
                        std::to_string(s.rcond));
  }
}

LsSolver::~LsSolver() = default;

FieldSolution LsSolver::solve(const Eigen::VectorXcd& incident, int m) const {
  const Impl& s = *impl_;
  FieldSolution f;
  f.nx = s.nx;
  f.R = s.R;
  f.h = s.h;
  f.k = s.k;
  f.m = m;
  f.cells = s.cells;
  Eigen::VectorXcd u = s.dense ? Eigen::VectorXcd(s.lu.solve(incident)) : s.gmres(incident);
  const double bn = incident.norm();
  f.residual = bn > 0.0 ? (s.apply(u) - incident).norm() / bn : u.norm();
  if (!(f.residual <= kResidualTol))
    throw SolverError("ls_solve: residual " + std::to_string(f.residual) + " above tolerance");
  f.u.assign(u.data(), u.data() + u.size());
  return f;
}

Eigen::VectorXcd LsSolver::incident_mode(int n) const {
  const Impl& s = *impl_;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.cells.size()));
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    const Point c = cell_center(s.R, s.nx, s.ix[i], s.iy[i]);
    v[static_cast<Eigen::Index>(i)] = specfun::regular_wave(n, s.k, c);
  }
  return v;
}

Eigen::VectorXcd LsSolver::plane_wave(double theta) const {
  const Impl& s = *impl_;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.cells.size()));
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    const Point c = cell_center(s.R, s.nx, s.ix[i], s.iy[i]);
    v[static_cast<Eigen::Index>(i)] = std::polar(1.0, s.k * (std::cos(theta) * c.x + std::sin(theta) * c.y));
  }
  return v;
}

FieldSolution LsSolver::solve_mode(int m) const { return solve(incident_mode(m), m); }

cplx LsSolver::scattered(const FieldSolution& sol, Point x) const {
  const Impl& s = *impl_;
  cplx sum = 0.0;
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    if (s.q[static_cast<Eigen::Index>(i)] == 0.0) continue;
    const Point c = cell_center(s.R, s.nx, s.ix[i], s.iy[i]);
    const double d = std::hypot(x.x - c.x, x.y - c.y);
    sum += fundamental(s.k, d) * s.q[static_cast<Eigen::Index>(i)] * sol.u[i];
  }
  return -s.k * s.k * s.h * s.h * sum;
}

const std::vector<int>& LsSolver::cells() const { return impl_->cells; }
const Eigen::VectorXd& LsSolver::contrast() const { return impl_->q; }
double LsSolver::spacing() const { return impl_->h; }
bool LsSolver::dense() const { return impl_->dense; }
double LsSolver::rcond() const { return impl_->rcond; }

std::vector<Point> LsSolver::centers() const {
  std::vector<Point> c;
  for (std::size_t i = 0; i < impl_->cells.size(); ++i)
    c.push_back(cell_center(impl_->R, impl_->nx, impl_->ix[i], impl_->iy[i]));
  return c;
}

FieldSolution ls_solve(const MediumSpec& spec, double k, int m) { return LsSolver(spec, k).solve_mode(m); }

ScatteringMatrix ls_w(const MediumSpec& spec, double k, int N) {
  if (N < 0) throw ValidationError("ls_w: negative order");
  LsSolver solver(spec, k);
  const int modes = 2 * N + 1;
  const auto n_cells = static_cast<Eigen::Index>(solver.cells().size());
  Eigen::MatrixXcd U0(n_cells, modes), U(n_cells, modes);
  parallel_for(static_cast<std::size_t>(modes), [&](std::size_t c) {
    const int m = static_cast<int>(c) - N;
    U0.col(static_cast<Eigen::Index>(c)) = solver.incident_mode(m);
  });
  for (int c = 0; c < modes; ++c) {
    const FieldSolution f = solver.solve(U0.col(c), c - N);
    U.col(c) = Eigen::Map<const Eigen::VectorXcd>(f.u.data(), n_cells);
  }
  const double h = solver.spacing();
  ScatteringMatrix W(N, k);
  const Eigen::VectorXcd qc = solver.contrast().cast<cplx>();
  W.w = -(k * k * h * h) * (U0.adjoint() * qc.asDiagonal() * U);
  return W;
}

}  // namespace scatcoef
