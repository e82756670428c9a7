#pragma once

#include <Eigen/Dense>

#include "scatcoef/specfun.hpp"

namespace scatcoef {

// Truncated W_nm, n, m in [-N, N], at wavenumber k.
struct ScatteringMatrix {
  int N = 0;
  double k = 0.0;
  Eigen::MatrixXcd w;

  ScatteringMatrix() = default;
  ScatteringMatrix(int order, double wavenumber)
      : N(order), k(wavenumber), w(Eigen::MatrixXcd::Zero(2 * order + 1, 2 * order + 1)) {}

  int size() const { return 2 * N + 1; }
  cplx& operator()(int n, int m) { return w(n + N, m + N); }
  const cplx& operator()(int n, int m) const { return w(n + N, m + N); }
  double norm() const { return w.norm(); }
};

// Frobenius norm of the difference relative to the norm of `ref`; orders must match.
double relative_difference(const ScatteringMatrix& a, const ScatteringMatrix& ref);

}  // namespace scatcoef
