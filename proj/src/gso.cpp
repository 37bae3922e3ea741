#include "lpe/gso.hpp"

#include <algorithm>
#include <cmath>

namespace lpe {

namespace {

constexpr double kRankEps = 1e-10;

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
#pragma omp simd reduction(+ : s)
  for (std::size_t t = 0; t < n; ++t) s += a[t] * b[t];
  return s;
}

// Loads column i, size-reduces it exactly against the earlier columns, and
// stores it in ob.cols. Returns the column as doubles. Without the exact
// reduction, skewed bases (large unit-triangular multiples of a good one)
// lose all precision in floating-point Gram-Schmidt.
std::vector<double> load_column(OrthoBasis& ob, const IntMatrix& b, std::size_t i) {
  const std::size_t N = ob.dim;
  std::vector<i128> w(N);
  for (std::size_t t = 0; t < N; ++t) w[t] = b(t, i);
  if (i > 0) reduce_mod_lattice(ob, i, w);
  std::vector<double> v(N);
  i64* dst = ob.cols.data() + i * N;
  for (std::size_t t = 0; t < N; ++t) {
    if (w[t] > INT64_MAX || w[t] < -INT64_MAX) throw InternalFailure("size reduction left an oversized entry");
    dst[t] = static_cast<i64>(w[t]);
    v[t] = static_cast<double>(dst[t]);
  }
  return v;
}

OrthoBasis init(const IntMatrix& b, const OrthoBasis* prefix) {
  if (b.cols() > b.rows()) throw InvalidArgument("gram_schmidt: more vectors than dimensions");
  OrthoBasis ob;
  ob.dim = b.rows();
  ob.cols.assign(b.rows() * b.cols(), 0);
  auto& g = ob.gs;
  g.dim = b.rows();
  g.count = b.cols();
  g.vecs.assign(g.dim * g.count, 0.0);
  g.sq_norms.assign(g.count, 0.0);
  g.mu.assign(g.count * g.count, 0.0);
  if (prefix) {
    const auto& pg = prefix->gs;
    const std::size_t P = pg.count, Np = prefix->dim;
    if (Np > ob.dim || P > g.count) throw InvalidArgument("gram_schmidt: prefix larger than basis");
    for (std::size_t j = 0; j < P; ++j) {
      std::copy(prefix->col(j), prefix->col(j) + Np, ob.cols.begin() + j * ob.dim);
      std::copy(pg.vec(j), pg.vec(j) + Np, g.vecs.begin() + j * g.dim);
      std::copy(pg.mu_row(j), pg.mu_row(j) + P, g.mu.begin() + j * g.count);
      g.sq_norms[j] = pg.sq_norms[j];
    }
    g.gs_norm = pg.gs_norm;
  }
  return ob;
}

void finish_column(OrthoBasis& ob, std::size_t i, const std::vector<double>& v, double col_sq) {
  auto& g = ob.gs;
  double s = dot(v.data(), v.data(), g.dim);
  if (!(s > kRankEps * std::max(1.0, col_sq * 1e-12)) || !std::isfinite(s))
    throw InvalidArgument("gram_schmidt: basis is rank deficient");
  std::copy(v.begin(), v.end(), g.vecs.begin() + i * g.dim);
  g.sq_norms[i] = s;
  g.mu[i * g.count + i] = 1.0;
  g.gs_norm = std::max(g.gs_norm, std::sqrt(s));
}

}  // namespace

double GramSchmidtData::log_volume() const {
  double s = 0;
  for (double x : sq_norms) s += 0.5 * std::log(x);
  return s;
}

IntMatrix OrthoBasis::matrix() const {
  IntMatrix m(dim, gs.count);
  for (std::size_t j = 0; j < gs.count; ++j)
    for (std::size_t t = 0; t < dim; ++t) m(t, j) = cols[j * dim + t];
  return m;
}

void reduce_mod_lattice(const OrthoBasis& ob, std::size_t r, std::vector<i128>& w) {
  const auto& g = ob.gs;
  const std::size_t N = ob.dim;
  std::vector<long double> p(r);
  bool settled = false;
  for (int pass = 0; pass < 64; ++pass) {
#pragma omp parallel for schedule(static) if (r * N > 200000)
    for (std::size_t j = 0; j < r; ++j) {
      const double* bj = g.vec(j);
      long double s = 0;
      for (std::size_t t = 0; t < N; ++t) s += static_cast<long double>(w[t]) * bj[t];
      p[j] = s / g.sq_norms[j];
    }
    bool changed = false;
    for (std::size_t jj = r; jj-- > 0;) {
      long double c = std::nearbyint(p[jj]);
      if (c == 0) continue;
      if (std::fabs(c) > 1e30L) throw InternalFailure("size reduction coefficient out of range");
      changed = true;
      const i128 ci = static_cast<i128>(c);
      const i64* bj = ob.col(jj);
      for (std::size_t t = 0; t < N; ++t) w[t] -= ci * bj[t];
      const double* mu = g.mu_row(jj);
      for (std::size_t l = 0; l < jj; ++l) p[l] -= c * mu[l];
    }
    if (!changed) return;
    // Once entries fit comfortably in a double, one more pass is exact
    // enough; further passes could only flip ties.
    i128 big = 0;
    for (std::size_t t = 0; t < N; ++t) big = std::max(big, w[t] < 0 ? -w[t] : w[t]);
    if (big < (i128(1) << 45)) {
      if (settled) return;
      settled = true;
    }
  }
  throw InternalFailure("size reduction did not converge");
}

namespace serial {

OrthoBasis orthogonalize(const IntMatrix& b, const OrthoBasis* prefix) {
  OrthoBasis ob = init(b, prefix);
  auto& g = ob.gs;
  for (std::size_t i = prefix ? prefix->gs.count : 0; i < g.count; ++i) {
    std::vector<double> v = load_column(ob, b, i);
    const double col_sq = dot(v.data(), v.data(), g.dim);
    for (std::size_t j = 0; j < i; ++j) {
      const double m = dot(v.data(), g.vec(j), g.dim) / g.sq_norms[j];
      g.mu[i * g.count + j] = m;
      const double* bj = g.vec(j);
      for (std::size_t t = 0; t < g.dim; ++t) v[t] -= m * bj[t];
    }
    finish_column(ob, i, v, col_sq);
  }
  return ob;
}

}  // namespace serial

namespace par {

OrthoBasis orthogonalize(const IntMatrix& b, const OrthoBasis* prefix) {
  OrthoBasis ob = init(b, prefix);
  auto& g = ob.gs;
  const std::size_t N = g.dim;
  std::vector<double> c(g.count);
  for (std::size_t i = prefix ? prefix->gs.count : 0; i < g.count; ++i) {
    std::vector<double> v = load_column(ob, b, i);
    const double col_sq = dot(v.data(), v.data(), N);
    double* mu = g.mu.data() + i * g.count;
    for (int rep = 0; rep < 2; ++rep) {
#pragma omp parallel for schedule(static) if (i * N > 100000)
      for (std::size_t j = 0; j < i; ++j) c[j] = dot(v.data(), g.vec(j), N) / g.sq_norms[j];
#pragma omp parallel for schedule(static) if (i * N > 100000)
      for (std::size_t t0 = 0; t0 < N; t0 += 64) {
        const std::size_t t1 = std::min(N, t0 + 64);
        for (std::size_t j = 0; j < i; ++j) {
          const double cj = c[j];
          const double* bj = g.vec(j);
          for (std::size_t t = t0; t < t1; ++t) v[t] -= cj * bj[t];
        }
      }
      for (std::size_t j = 0; j < i; ++j) mu[j] += c[j];
    }
    finish_column(ob, i, v, col_sq);
  }
  return ob;
}

}  // namespace par

GramSchmidtData gram_schmidt(const IntMatrix& b) { return orthogonalize(b).gs; }

double sup_norm(const IntMatrix& m, double rel_tol, int max_iter) {
  const std::size_t R = m.rows(), C = m.cols();
  if (R == 0 || C == 0) return 0.0;
  std::vector<double> x(C, 1.0 / std::sqrt(static_cast<double>(C))), y(R), z(C);
  double est = 0;
  for (int it = 0; it < max_iter; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < R; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < C; ++j) s += static_cast<double>(m(i, j)) * x[j];
      y[i] = s;
    }
    const double ny = std::sqrt(dot(y.data(), y.data(), R));
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) z[j] += static_cast<double>(m(i, j)) * y[i];
    const double nz = std::sqrt(dot(z.data(), z.data(), C));
    if (nz == 0) return ny;
    const double prev = est;
    est = ny;
    for (std::size_t j = 0; j < C; ++j) x[j] = z[j] / nz;
    if (it > 0 && std::fabs(est - prev) <= rel_tol * est) break;
  }
  // Rayleigh quotient at the final iterate.
  double s2 = 0;
  for (std::size_t i = 0; i < R; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < C; ++j) s += static_cast<double>(m(i, j)) * x[j];
    s2 += s * s;
  }
  return std::sqrt(s2);
}

}  // namespace lpe
