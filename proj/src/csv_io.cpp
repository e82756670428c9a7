#include "scatcoef/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scatcoef/errors.hpp"

namespace scatcoef::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ValidationError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

long long to_int(const std::string& s, std::size_t line) {
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ValidationError("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  return v;
}

std::vector<std::string> row(const std::vector<std::string>& lines, std::size_t i, std::size_t cols) {
  auto c = split(lines[i]);
  if (c.size() != cols)
    throw ValidationError("csv line " + std::to_string(i + 1) + ": expected " + std::to_string(cols) + " fields");
  return c;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string w_to_string(const ScatteringMatrix& W) {
  std::string s = "n,m,re,im\n";
  for (int n = -W.N; n <= W.N; ++n)
    for (int m = -W.N; m <= W.N; ++m) {
      const cplx v = W(n, m);
      s += std::to_string(n) + "," + std::to_string(m) + "," + format_number(v.real()) + "," +
           format_number(v.imag()) + "\n";
    }
  return s;
}

ScatteringMatrix w_from_string(const std::string& text, double k) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != "n,m,re,im") throw ValidationError("W csv: header must be n,m,re,im");
  const long long count = static_cast<long long>(lines.size()) - 1;
  long long side = 1;
  while (side * side < count) side += 2;
  if (side * side != count) throw ValidationError("W csv: row count is not (2N+1)^2");
  ScatteringMatrix W;
  W.N = static_cast<int>((side - 1) / 2);
  W.k = k;
  W.w = Eigen::MatrixXcd::Constant(side, side, cplx(std::nan(""), 0.0));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto c = row(lines, i, 4);
    const long long n = to_int(c[0], i + 1), m = to_int(c[1], i + 1);
    if (std::abs(n) > W.N || std::abs(m) > W.N) throw ValidationError("W csv: index out of range");
    W(static_cast<int>(n), static_cast<int>(m)) = cplx(to_double(c[2], i + 1), to_double(c[3], i + 1));
  }
  if (W.w.hasNaN()) throw ValidationError("W csv: missing or non-finite entries");
  return W;
}

std::string farfield_to_string(const FarFieldData& d) {
  std::string s = "k,P,Q,sigma,seed\n";
  s += format_number(d.k) + "," + std::to_string(d.P) + "," + std::to_string(d.Q) + "," +
       format_number(d.noise_sigma) + "," + std::to_string(d.rng_seed) + "\n";
  s += "p,q,theta_xi,theta_x,re,im\n";
  for (int p = 0; p < d.P; ++p)
    for (int q = 0; q < d.Q; ++q) {
      const cplx v = d.A(p, q);
      s += std::to_string(p) + "," + std::to_string(q) + "," + format_number(d.theta_xi(p)) + "," +
           format_number(d.theta_x(q)) + "," + format_number(v.real()) + "," + format_number(v.imag()) + "\n";
    }
  return s;
}

FarFieldData farfield_from_string(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.size() < 3 || lines[0] != "k,P,Q,sigma,seed" || lines[2] != "p,q,theta_xi,theta_x,re,im")
    throw ValidationError("far-field csv: unexpected header");
  const auto h = row(lines, 1, 5);
  FarFieldData d;
  d.k = to_double(h[0], 2);
  d.P = static_cast<int>(to_int(h[1], 2));
  d.Q = static_cast<int>(to_int(h[2], 2));
  d.noise_sigma = to_double(h[3], 2);
  d.rng_seed = static_cast<std::uint64_t>(to_int(h[4], 2));
  if (d.P < 1 || d.Q < 1) throw ValidationError("far-field csv: P, Q must be positive");
  if (static_cast<long long>(lines.size()) - 3 != static_cast<long long>(d.P) * d.Q)
    throw ValidationError("far-field csv: expected P*Q sample rows");
  d.A = Eigen::MatrixXcd::Constant(d.P, d.Q, cplx(std::nan(""), 0.0));
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const auto c = row(lines, i, 6);
    const long long p = to_int(c[0], i + 1), q = to_int(c[1], i + 1);
    if (p < 0 || p >= d.P || q < 0 || q >= d.Q) throw ValidationError("far-field csv: sample index out of range");
    d.A(p, q) = cplx(to_double(c[4], i + 1), to_double(c[5], i + 1));
  }
  if (d.A.hasNaN()) throw ValidationError("far-field csv: missing or non-finite samples");
  return d;
}

std::string h_to_string(const std::vector<HCoefficients>& H) {
  std::string s = "n,m,l,re,im\n";
  for (const auto& h : H)
    s += std::to_string(h.n) + "," + std::to_string(h.m) + "," + std::to_string(h.l) + "," +
         format_number(h.value.real()) + "," + format_number(h.value.imag()) + "\n";
  return s;
}

std::string reconstruction_to_string(const ReconstructionResult& res) {
  const bool truth = res.truth.size() == res.value.size() && !res.truth.empty();
  std::string s;
  auto tail = [&](std::size_t i) {
    s += "," + format_number(res.value[i]);
    if (truth) s += "," + format_number(res.truth[i]);
    s += "\n";
  };
  switch (res.kind) {
    case ReconstructionResult::Kind::Radial:
      s = truth ? "r,value,truth\n" : "r,value\n";
      for (std::size_t i = 0; i < res.value.size(); ++i) {
        s += format_number(res.r[i]);
        tail(i);
      }
      break;
    case ReconstructionResult::Kind::Angular:
      s = truth ? "theta,value,truth\n" : "theta,value\n";
      for (std::size_t i = 0; i < res.value.size(); ++i) {
        s += format_number(res.theta[i]);
        tail(i);
      }
      break;
    case ReconstructionResult::Kind::General: {
      s = truth ? "r,theta,value,truth\n" : "r,theta,value\n";
      const std::size_t nt = res.theta.size();
      for (std::size_t i = 0; i < res.value.size(); ++i) {
        s += format_number(res.r[i / nt]) + "," + format_number(res.theta[i % nt]);
        tail(i);
      }
      break;
    }
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_new_file(const std::string& path, const std::string& content) {
  if (std::filesystem::exists(path)) throw ValidationError("refusing to overwrite existing output '" + path + "'");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace scatcoef::csv
