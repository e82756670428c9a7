#include "scatcoef/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace scatcoef::quad {

namespace {

const Rule& reference_rule(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(r)).first->second;
}

template <class T>
T gl20(const std::function<T(double)>& f, double a, double b) {
  const Rule& r = reference_rule(20);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T s{};
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
  return s * h;
}

template <class T>
T adapt(const std::function<T(double)>& f, double a, double b, T whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const T left = gl20(f, a, m);
  const T right = gl20(f, m, b);
  const T both = left + right;
  if (depth <= 0 || std::abs(both - whole) <= tol) return both;
  return adapt(f, a, m, left, 0.5 * tol, depth - 1) + adapt(f, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) {
  const Rule& ref = reference_rule(n);
  Rule r = ref;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = c + h * ref.nodes[i];
    r.weights[i] = h * ref.weights[i];
  }
  return r;
}

Rule composite(std::span<const double> breaks, double max_panel, int order) {
  Rule out;
  const Rule& ref = reference_rule(order);
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s], b = breaks[s + 1];
    if (!(b > a)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = a + (p + 0.5) * w, h = 0.5 * w;
      for (int i = 0; i < order; ++i) {
        out.nodes.push_back(c + h * ref.nodes[i]);
        out.weights.push_back(h * ref.weights[i]);
      }
    }
  }
  return out;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                int max_depth) {
  return adapt<double>(f, a, b, gl20<double>(f, a, b), tol, max_depth);
}

std::complex<double> adaptive(const std::function<std::complex<double>(double)>& f, double a,
                              double b, double tol, int max_depth) {
  using C = std::complex<double>;
  return adapt<C>(f, a, b, gl20<C>(f, a, b), tol, max_depth);
}

}  // namespace scatcoef::quad
