#include "scatcoef/medium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scatcoef/errors.hpp"

namespace scatcoef {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x))
      throw ValidationError(std::string(what) + ": samples must be positive and finite");
}

void check_background(const Background& bg, double R) {
  if (!(bg.eps0 > 0.0) || !(bg.mu0 > 0.0)) throw ValidationError("background eps0, mu0 must be positive");
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("support radius R must be positive");
}

// Fritsch-Carlson slopes with the three-point shape-preserving end rule.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0), h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    del[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = del[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] <= 0.0) continue;
    const double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
    d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
  }
  auto edge = [](double h0, double h1, double m0, double m1) {
    double e = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (e * m0 <= 0.0) return 0.0;
    if (m0 * m1 < 0.0 && std::abs(e) > 3.0 * std::abs(m0)) return 3.0 * m0;
    return e;
  };
  d[0] = edge(h[0], h[1], del[0], del[1]);
  d[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  return d;
}

}  // namespace

double Background::omega(double k) const { return k / std::sqrt(eps0 * mu0); }

double RadialField::Segment::eval(double x) const {
  x = std::clamp(x, a, b);
  const std::size_t n = r.size();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(r.begin(), r.end(), x) - r.begin());
  i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
  const double h = r[i + 1] - r[i];
  const double t = (x - r[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * h * d[i] + (-2 * t3 + 3 * t2) * v[i + 1] +
         (t3 - t2) * h * d[i + 1];
}

const RadialField::Segment& RadialField::Term::locate(double x) const {
  for (const auto& s : segs)
    if (x < s.b) return s;
  return segs.back();
}

RadialField RadialField::constant(double R, double value) { return pchip({0.0, R}, {value, value}); }

RadialField RadialField::pchip(std::vector<double> r, std::vector<double> values) {
  if (r.size() < 2 || r.size() != values.size()) throw ValidationError("pchip: need >= 2 matching samples");
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    if (!(r[i + 1] > r[i])) throw ValidationError("pchip: radii must increase");
  Segment s;
  s.a = r.front();
  s.b = r.back();
  s.d = pchip_slopes(r, values);
  s.r = std::move(r);
  s.v = std::move(values);
  RadialField f;
  f.terms_.push_back({1.0, {std::move(s)}});
  return f;
}

RadialField RadialField::layered(const std::vector<double>& outer_radii, const std::vector<double>& values) {
  if (outer_radii.empty() || outer_radii.size() != values.size())
    throw ValidationError("layered: radii and values must match");
  Term t;
  double a = 0.0;
  for (std::size_t i = 0; i < outer_radii.size(); ++i) {
    if (!(outer_radii[i] > a)) throw ValidationError("layered: radii must increase");
    Segment s;
    s.a = a;
    s.b = outer_radii[i];
    s.r = {a, s.b};
    s.v = {values[i], values[i]};
    s.d = {0.0, 0.0};
    t.segs.push_back(std::move(s));
    a = outer_radii[i];
  }
  RadialField f;
  f.terms_.push_back(std::move(t));
  return f;
}

double RadialField::operator()(double r) const { return eval_on(r, r); }

double RadialField::eval_on(double r, double inside) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    const Segment& s = t.locate(inside);
    if (inside < s.a || inside > s.b) continue;
    sum += t.scale * s.eval(r);
  }
  return sum;
}

std::vector<double> RadialField::knots() const {
  std::vector<double> out;
  for (const auto& t : terms_)
    for (const auto& s : t.segs) out.insert(out.end(), s.r.begin(), s.r.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> RadialField::jumps() const {
  std::vector<double> out;
  for (const auto& t : terms_)
    for (const auto& s : t.segs) {
      out.push_back(s.a);
      out.push_back(s.b);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RadialField RadialField::plus(const RadialField& other, double scale) const {
  RadialField f = *this;
  for (Term t : other.terms_) {
    t.scale *= scale;
    f.terms_.push_back(std::move(t));
  }
  return f;
}

RadialField RadialField::scaled_radius(double s) const {
  RadialField f = *this;
  for (auto& t : f.terms_)
    for (auto& seg : t.segs) {
      seg.a *= s;
      seg.b *= s;
      for (double& x : seg.r) x *= s;
      for (double& d : seg.d) d /= s;
    }
  return f;
}

double AngularProfile::operator()(double theta) const {
  const int m = static_cast<int>(eps.size());
  const int half = m / 2;
  double sum = 0.0;
  for (int l = -half; l <= half; ++l) sum += (fourier(l) * std::polar(1.0, l * theta)).real();
  return sum;
}

cplx AngularProfile::fourier(int l) const {
  const int m = static_cast<int>(eps.size());
  if (2 * std::abs(l) > m) return 0.0;
  cplx c = 0.0;
  for (int j = 0; j < m; ++j) c += eps[j] * std::polar(1.0, -2.0 * kPi * l * j / m);
  c /= static_cast<double>(m);
  if (m % 2 == 0 && 2 * std::abs(l) == m) c *= 0.5;
  return c;
}

const RadialProfile& MediumSpec::radial() const {
  if (!is_radial()) throw ValidationError("medium: radial profile required");
  return std::get<RadialProfile>(profile);
}

const GridProfile& MediumSpec::grid() const {
  if (!is_grid()) throw ValidationError("medium: grid profile required");
  return std::get<GridProfile>(profile);
}

const AngularProfile& MediumSpec::angular() const {
  if (!is_angular()) throw ValidationError("medium: angular profile required");
  return std::get<AngularProfile>(profile);
}

double MediumSpec::eps_at(double x, double y) const {
  const double r = std::hypot(x, y);
  if (r >= R) return background.eps0;
  if (is_radial()) return radial().eps(r);
  if (is_angular()) return angular()(std::atan2(y, x));
  const GridProfile& g = grid();
  const double h = 2.0 * R / g.nx;
  const int ix = std::clamp(static_cast<int>(std::floor((x + R) / h)), 0, g.nx - 1);
  const int iy = std::clamp(static_cast<int>(std::floor((y + R) / h)), 0, g.nx - 1);
  return g.eps[static_cast<std::size_t>(iy) * g.nx + ix];
}

double MediumSpec::inv_mu_at(double x, double y) const {
  const double r = std::hypot(x, y);
  if (r >= R || !is_radial()) return 1.0 / background.mu0;
  return radial().inv_mu(r);
}

bool MediumSpec::nonmagnetic() const {
  if (!is_radial()) return true;
  const double ref = 1.0 / background.mu0;
  const auto& f = radial().inv_mu;
  const std::vector<double> kn = f.knots();
  for (std::size_t i = 0; i + 1 < kn.size(); ++i) {
    const double mid = 0.5 * (kn[i] + kn[i + 1]);
    for (double x : {kn[i], mid, kn[i + 1]})
      if (std::abs(f.eval_on(x, mid) - ref) > 1e-15 * ref) return false;
  }
  return true;
}

MediumSpec make_radial(const Background& bg, double R, const std::vector<double>& eps_samples,
                       const std::vector<double>& mu_samples) {
  check_background(bg, R);
  if (eps_samples.size() < 2 || eps_samples.size() != mu_samples.size())
    throw ValidationError("make_radial: need >= 2 eps and mu samples of equal length");
  require_positive(eps_samples, "make_radial eps");
  require_positive(mu_samples, "make_radial mu");
  const std::size_t n = eps_samples.size();
  std::vector<double> r(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = R * static_cast<double>(i) / static_cast<double>(n - 1);
    inv[i] = 1.0 / mu_samples[i];
  }
  RadialProfile p;
  p.eps = RadialField::pchip(r, eps_samples);
  p.inv_mu = RadialField::pchip(r, inv);
  p.src_eps = eps_samples;
  p.src_mu = mu_samples;
  return MediumSpec{bg, R, std::move(p)};
}

MediumSpec make_layered(const Background& bg, double R, const std::vector<double>& outer_radii,
                        const std::vector<double>& eps, const std::vector<double>& mu) {
  check_background(bg, R);
  if (outer_radii.empty() || eps.size() != outer_radii.size() || mu.size() != outer_radii.size())
    throw ValidationError("make_layered: radii, eps, mu must have equal nonzero length");
  if (std::abs(outer_radii.back() - R) > 1e-14 * R) throw ValidationError("make_layered: last radius must equal R");
  require_positive(eps, "make_layered eps");
  require_positive(mu, "make_layered mu");
  std::vector<double> radii = outer_radii;
  radii.back() = R;
  std::vector<double> inv(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) inv[i] = 1.0 / mu[i];
  RadialProfile p;
  p.eps = RadialField::layered(radii, eps);
  p.inv_mu = RadialField::layered(radii, inv);
  p.src_radii = radii;
  p.src_eps = eps;
  p.src_mu = mu;
  return MediumSpec{bg, R, std::move(p)};
}

Point cell_center(double R, int nx, int ix, int iy) {
  const double h = 2.0 * R / nx;
  return {-R + (ix + 0.5) * h, -R + (iy + 0.5) * h};
}

bool cell_in_disk(double R, int nx, int ix, int iy) {
  const Point c = cell_center(R, nx, ix, iy);
  return c.x * c.x + c.y * c.y < R * R;
}

double grid_spacing(const MediumSpec& spec) { return 2.0 * spec.R / spec.grid().nx; }

MediumSpec make_grid(const Background& bg, double R, int nx, const std::vector<double>& eps_values) {
  check_background(bg, R);
  if (nx < 8) throw ValidationError("make_grid: nx must be at least 8");
  if (eps_values.size() != static_cast<std::size_t>(nx) * nx)
    throw ValidationError("make_grid: expected nx*nx values");
  require_positive(eps_values, "make_grid eps");
  for (int iy = 0; iy < nx; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      if (!cell_in_disk(R, nx, ix, iy) &&
          std::abs(eps_values[static_cast<std::size_t>(iy) * nx + ix] - bg.eps0) > 1e-14 * bg.eps0)
        throw ValidationError("make_grid: contrast outside the disk at cell (" + std::to_string(ix) + "," +
                              std::to_string(iy) + ")");
  return MediumSpec{bg, R, GridProfile{nx, eps_values}};
}

MediumSpec make_angular(const Background& bg, double R, const std::vector<double>& eps_samples) {
  check_background(bg, R);
  if (eps_samples.empty()) throw ValidationError("make_angular: no samples");
  require_positive(eps_samples, "make_angular eps");
  AngularProfile p{eps_samples};
  for (int t = 0; t < 8 * static_cast<int>(eps_samples.size()); ++t)
    if (!(p(2.0 * kPi * t / (8.0 * eps_samples.size())) > 0.0))
      throw ValidationError("make_angular: interpolant is not positive");
  return MediumSpec{bg, R, std::move(p)};
}

ContrastNorm contrast_norm(const MediumSpec& spec) {
  const double e0 = spec.background.eps0, im0 = 1.0 / spec.background.mu0;
  ContrastNorm c;
  if (spec.is_grid()) {
    for (double v : spec.grid().eps) c.d_eps = std::max(c.d_eps, std::abs(v - e0));
  } else if (spec.is_angular()) {
    const auto& a = spec.angular();
    for (double v : a.eps) c.d_eps = std::max(c.d_eps, std::abs(v - e0));
    const int fine = 16 * static_cast<int>(a.eps.size());
    for (int t = 0; t < fine; ++t) c.d_eps = std::max(c.d_eps, std::abs(a(2.0 * kPi * t / fine) - e0));
  } else {
    const auto& p = spec.radial();
    std::vector<double> pts = p.eps.knots();
    const std::vector<double> more = p.inv_mu.knots();
    pts.insert(pts.end(), more.begin(), more.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double a = pts[i], b = pts[i + 1], mid = 0.5 * (a + b);
      for (int s = 0; s <= 8; ++s) {
        const double x = a + (b - a) * s / 8.0;
        c.d_eps = std::max(c.d_eps, std::abs(p.eps.eval_on(x, mid) - e0));
        c.d_inv_mu = std::max(c.d_inv_mu, std::abs(p.inv_mu.eval_on(x, mid) - im0));
      }
    }
  }
  c.eps_hat = std::hypot(c.d_eps, c.d_inv_mu);
  return c;
}

MediumSpec sample_to_grid(const MediumSpec& spec, int nx) {
  if (!spec.nonmagnetic()) throw ValidationError("sample_to_grid: grid media require mu == mu0");
  std::vector<double> v(static_cast<std::size_t>(nx) * nx, spec.background.eps0);
  for (int iy = 0; iy < nx; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      if (!cell_in_disk(spec.R, nx, ix, iy)) continue;
      const Point c = cell_center(spec.R, nx, ix, iy);
      v[static_cast<std::size_t>(iy) * nx + ix] = spec.eps_at(c.x, c.y);
    }
  return make_grid(spec.background, spec.R, nx, v);
}

MediumSpec rotate_grid(const MediumSpec& spec, int quarter_turns) {
  const GridProfile& g = spec.grid();
  const int nx = g.nx;
  std::vector<double> cur = g.eps;
  const int q = ((quarter_turns % 4) + 4) % 4;
  for (int t = 0; t < q; ++t) {
    // R_{-pi/2}(x, y) = (y, -x)
    std::vector<double> next(cur.size());
    for (int iy = 0; iy < nx; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        next[static_cast<std::size_t>(iy) * nx + ix] = cur[static_cast<std::size_t>(nx - 1 - ix) * nx + iy];
    cur.swap(next);
  }
  return make_grid(spec.background, spec.R, nx, cur);
}

MediumSpec translate_grid(const MediumSpec& spec, int shift_x, int shift_y) {
  const GridProfile& g = spec.grid();
  const int nx = g.nx;
  std::vector<double> out(g.eps.size(), spec.background.eps0);
  for (int iy = 0; iy < nx; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const double v = g.eps[static_cast<std::size_t>(iy) * nx + ix];
      if (v == spec.background.eps0) continue;
      const int jx = ix + shift_x, jy = iy + shift_y;
      if (jx < 0 || jy < 0 || jx >= nx || jy >= nx || !cell_in_disk(spec.R, nx, jx, jy))
        throw ValidationError("translate_grid: contrast leaves the disk");
      out[static_cast<std::size_t>(jy) * nx + jx] = v;
    }
  return make_grid(spec.background, spec.R, nx, out);
}

MediumSpec scale_radial(const MediumSpec& spec, double s) {
  if (!(s > 0.0)) throw ValidationError("scale_radial: factor must be positive");
  RadialProfile p = spec.radial();
  p.eps = p.eps.scaled_radius(s);
  p.inv_mu = p.inv_mu.scaled_radius(s);
  for (double& r : p.src_radii) r *= s;
  return MediumSpec{spec.background, spec.R * s, std::move(p)};
}

nlohmann::json medium_to_json(const MediumSpec& spec) {
  nlohmann::json j;
  j["background"] = {{"eps0", spec.background.eps0}, {"mu0", spec.background.mu0}};
  j["R"] = spec.R;
  if (spec.is_radial()) {
    const auto& p = spec.radial();
    if (!p.serializable) throw ValidationError("medium_to_json: derived radial profile has no sample form");
    if (p.src_radii.empty())
      j["profile"] = {{"kind", "radial"}, {"eps", p.src_eps}, {"mu", p.src_mu}};
    else
      j["profile"] = {{"kind", "radial"}, {"radii", p.src_radii}, {"eps", p.src_eps}, {"mu", p.src_mu}};
  } else if (spec.is_grid()) {
    j["profile"] = {{"kind", "grid"}, {"nx", spec.grid().nx}, {"eps", spec.grid().eps}};
  } else {
    j["profile"] = {{"kind", "angular"}, {"eps", spec.angular().eps}};
  }
  return j;
}

MediumSpec medium_from_json(const nlohmann::json& j) {
  try {
    Background bg;
    if (j.contains("background")) {
      bg.eps0 = j.at("background").value("eps0", 1.0);
      bg.mu0 = j.at("background").value("mu0", 1.0);
    }
    const double R = j.at("R").get<double>();
    const auto& p = j.at("profile");
    const std::string kind = p.at("kind").get<std::string>();
    if (kind == "radial") {
      const auto eps = p.at("eps").get<std::vector<double>>();
      std::vector<double> mu = p.contains("mu") ? p.at("mu").get<std::vector<double>>()
                                                : std::vector<double>(eps.size(), bg.mu0);
      if (p.contains("radii")) return make_layered(bg, R, p.at("radii").get<std::vector<double>>(), eps, mu);
      return make_radial(bg, R, eps, mu);
    }
    if (kind == "grid") return make_grid(bg, R, p.at("nx").get<int>(), p.at("eps").get<std::vector<double>>());
    if (kind == "angular") return make_angular(bg, R, p.at("eps").get<std::vector<double>>());
    throw ValidationError("medium: unknown profile kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("medium JSON: ") + e.what());
  }
}

}  // namespace scatcoef
