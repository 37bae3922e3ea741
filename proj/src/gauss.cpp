#include "lpe/gauss.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

namespace lpe {

namespace {

void default_warning(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }
WarningHandler g_warning = default_warning;

constexpr int kRetryCap = 1000000;

}  // namespace

GaussParam::GaussParam(double s, double t) : sigma(s), tail_cut(t) {
  if (!(s > 0) || !std::isfinite(s)) throw InvalidArgument("Gaussian width must be positive");
  if (!(t >= 6)) throw InvalidArgument("tail cut must be at least 6");
}

void set_warning_handler(WarningHandler h) { g_warning = h ? h : default_warning; }
void warn(const std::string& msg) { g_warning(msg); }

i64 sample_z(double center, const GaussParam& p, RngStream& rng) {
  const double lo_r = std::ceil(center - p.tail_cut * p.sigma);
  const double hi_r = std::floor(center + p.tail_cut * p.sigma);
  if (hi_r < lo_r) return static_cast<i64>(std::nearbyint(center));
  const i64 lo = static_cast<i64>(lo_r), hi = static_cast<i64>(hi_r);
  const double scale = std::numbers::pi / (p.sigma * p.sigma);
  for (int it = 0; it < kRetryCap; ++it) {
    const i64 x = rng.uniform_range(lo, hi);
    const double dx = static_cast<double>(x) - center;
    if (rng.uniform01() < std::exp(-scale * dx * dx)) return x;
  }
  throw InternalFailure("sample_z: rejection loop exceeded its retry cap");
}

double sigma_floor(double gs_norm, std::size_t dim) {
  return gs_norm * std::sqrt(std::log(2.0 * static_cast<double>(dim) + 4.0) / std::numbers::pi);
}

void check_sigma(double sigma, double gs_norm, std::size_t dim) {
  const double f = sigma_floor(gs_norm, dim);
  if (sigma < f) throw InvalidArgument("Gaussian width " + std::to_string(sigma) + " below the floor " + std::to_string(f));
  if (sigma < 2 * f) warn("Gaussian width " + std::to_string(sigma) + " is within 2x of the floor " + std::to_string(f));
}

void klein_levels(const GramSchmidtData& g, std::size_t r, double sigma, double tail_cut, std::vector<double>& d,
                  std::vector<i64>& z, RngStream& rng) {
  for (std::size_t i = r; i-- > 0;) {
    const double width = sigma / std::sqrt(g.sq_norms[i]);
    const i64 zi = sample_z(d[i], GaussParam(width, tail_cut), rng);
    z[i] = zi;
    if (zi == 0) continue;
    const double zd = static_cast<double>(zi);
    const double* mu = g.mu_row(i);
    double* dp = d.data();
#pragma omp simd
    for (std::size_t j = 0; j < i; ++j) dp[j] -= zd * mu[j];
  }
}

IntVector sample_gpv(const OrthoBasis& ob, const GaussParam& p, const std::vector<double>& center, RngStream& rng) {
  check_sigma(p.sigma, ob.gs.gs_norm, ob.gs.count);
  return klein_point(ob, p.sigma, p.tail_cut, center, rng);
}

IntVector klein_point(const OrthoBasis& ob, double sigma, double tail_cut, const std::vector<double>& center,
                      RngStream& rng) {
  const auto& g = ob.gs;
  const std::size_t N = ob.dim, r = g.count;
  if (center.size() != N) throw InvalidArgument("sample_gpv: center length mismatch");
  std::vector<double> d(r);
  for (std::size_t j = 0; j < r; ++j) {
    const double* bj = g.vec(j);
    double s = 0;
    for (std::size_t t = 0; t < N; ++t) s += center[t] * bj[t];
    d[j] = s / g.sq_norms[j];
  }
  std::vector<i64> z(r, 0);
  klein_levels(g, r, sigma, tail_cut, d, z, rng);
  std::vector<i128> acc(N, 0);
  for (std::size_t j = 0; j < r; ++j) {
    if (z[j] == 0) continue;
    const i64* bj = ob.col(j);
    for (std::size_t t = 0; t < N; ++t) acc[t] += static_cast<i128>(z[j]) * bj[t];
  }
  IntVector v(N);
  for (std::size_t t = 0; t < N; ++t) {
    if (acc[t] > INT64_MAX || acc[t] < -INT64_MAX) throw InternalFailure("sample_gpv: output entry overflow");
    v[t] = static_cast<i64>(acc[t]);
  }
  return v;
}

}  // namespace lpe
