#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace scatcoef::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre rule: each [breaks[i], breaks[i+1]] split into panels
// no longer than max_panel, each with `order` nodes.
Rule composite(std::span<const double> breaks, double max_panel, int order = 16);

// Adaptive bisection on a 20-point Gauss rule until halves agree to tol.
double adaptive(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                int max_depth = 40);
std::complex<double> adaptive(const std::function<std::complex<double>(double)>& f, double a,
                              double b, double tol = 1e-13, int max_depth = 40);

}  // namespace scatcoef::quad
