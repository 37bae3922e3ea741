#include "lpe/trapdoor.hpp"

#include <cmath>
#include <mutex>

#include "lpe/kernels.hpp"

namespace lpe {

struct LatticeBasis::Cache {
  std::once_flag ortho_once, solver_once, units_once;
  std::unique_ptr<OrthoBasis> ortho;
  std::unique_ptr<LinearSolver> solver;
  std::vector<IntVector> units;
};

namespace {

void check_kernel(const Modulus& mod, const ZqMatrix& parent, const IntMatrix& basis) {
  if (basis.rows() != basis.cols()) throw InvalidArgument("lattice basis must be square");
  if (parent.cols() != basis.rows()) throw InvalidArgument("lattice basis does not match its parent matrix");
  const ZqMatrix prod = mul(mod, parent, basis);
  for (u64 v : prod.data())
    if (v != 0) throw InvalidArgument("basis columns are not in the kernel lattice of the parent");
}

double norm2(const std::vector<i128>& v) {
  long double s = 0;
  for (i128 x : v) s += static_cast<long double>(x) * static_cast<long double>(x);
  return static_cast<double>(std::sqrt(s));
}

IntVector to_i64(const std::vector<i128>& v) {
  IntVector r(v.size());
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (v[t] > INT64_MAX || v[t] < -INT64_MAX) throw InternalFailure("lattice vector entry overflow");
    r[t] = static_cast<i64>(v[t]);
  }
  return r;
}

constexpr int kResampleCap = 100;

}  // namespace

LatticeBasis::LatticeBasis(const Modulus& mod, ZqMatrix parent, IntMatrix basis)
    : mod_(mod), parent_(std::move(parent)), basis_(std::move(basis)), cache_(std::make_shared<Cache>()) {
  check_kernel(mod_, parent_, basis_);
#ifndef NDEBUG
  if (!generates_kernel()) throw InvalidArgument("columns do not generate the full kernel lattice");
#endif
}

LatticeBasis::LatticeBasis(const Modulus& mod, ZqMatrix parent, IntMatrix basis, OrthoBasis ortho)
    : mod_(mod), parent_(std::move(parent)), basis_(std::move(basis)), cache_(std::make_shared<Cache>()) {
  check_kernel(mod_, parent_, basis_);
  if (ortho.dim != basis_.rows() || ortho.gs.count != basis_.cols())
    throw InvalidArgument("orthogonalization does not match the basis");
  std::call_once(cache_->ortho_once, [&] { cache_->ortho = std::make_unique<OrthoBasis>(std::move(ortho)); });
#ifndef NDEBUG
  if (!generates_kernel()) throw InvalidArgument("columns do not generate the full kernel lattice");
#endif
}

const OrthoBasis& LatticeBasis::ortho() const {
  std::call_once(cache_->ortho_once, [&] { cache_->ortho = std::make_unique<OrthoBasis>(orthogonalize(basis_)); });
  return *cache_->ortho;
}

const LinearSolver& LatticeBasis::solver() const {
  std::call_once(cache_->solver_once, [&] { cache_->solver = std::make_unique<LinearSolver>(mod_, parent_); });
  return *cache_->solver;
}

const std::vector<IntVector>& LatticeBasis::unit_reductions() const {
  std::call_once(cache_->units_once, [&] {
    const OrthoBasis& ob = ortho();
    const std::size_t N = dim(), k = mod_.k();
    for (std::size_t p : solver().pivots()) {
      std::vector<i128> w(N, 0);
      w[p] = 1;
      for (std::size_t b = 0; b < k; ++b) {
        if (b > 0)
          for (auto& x : w) x *= 2;
        reduce_mod_lattice(ob, N, w);
        cache_->units.push_back(to_i64(w));
      }
    }
  });
  return cache_->units;
}

QaryLattice LatticeBasis::hnf() const {
  const std::size_t N = dim();
  ZqMatrix rows(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) rows(j, i) = mod_.reduce(basis_(i, j));
  QaryLattice l = qary_from_span(mod_, rows);
  const double expect = static_cast<double>(N - l.span.rows()) * std::log(static_cast<double>(mod_.q()));
  if (std::fabs(gs().log_volume() - expect) > 0.3) throw InternalFailure("basis does not generate a q-ary lattice");
  return l;
}

bool LatticeBasis::generates_kernel() const {
  const double expect = static_cast<double>(solver().rank()) * std::log(static_cast<double>(mod_.q()));
  return std::fabs(gs().log_volume() - expect) <= 0.3;
}

LatticeBasis gadget_basis(const Modulus& mod, std::size_t n, std::size_t m) {
  const std::size_t k = mod.k();
  if (m == 0) m = n * k;
  if (m < n * k) throw InvalidArgument("gadget_basis: m below n*k");
  IntMatrix t(m, m);
  for (std::size_t blk = 0; blk < n; ++blk) {
    const std::size_t o = blk * k;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      t(o + j, o + j) = 2;
      t(o + j + 1, o + j) = -1;
    }
    for (std::size_t b = 0; b < k; ++b) t(o + b, o + k - 1) = static_cast<i64>((mod.q() >> b) & 1);
  }
  for (std::size_t j = n * k; j < m; ++j) t(j, j) = 1;
  return LatticeBasis(mod, gadget_matrix(mod, n, m), std::move(t));
}

TrapGenResult trap_gen(const Modulus& mod, std::size_t n, std::size_t m, RngStream& rng, double sigma_r) {
  const std::size_t w = n * mod.k();
  if (m < 2 * w) throw InvalidArgument("trap_gen: m must be at least 2 n k");
  const std::size_t mbar = m - w;

  ZqMatrix abar(n, mbar);
  for (auto& v : abar.data()) v = rng.uniform_below(mod.q());
  IntMatrix r(mbar, w);
  const GaussParam pr(sigma_r);
  for (auto& v : r.data()) v = sample_z(0.0, pr, rng);

  const ZqMatrix g = gadget_matrix(mod, n);
  const ZqMatrix ar = mul(mod, abar, r);
  ZqMatrix a = hconcat(abar, sub(mod, g, ar));

  // Basis [[R T_G, I + R P], [T_G, P]] with P = G^{-1}(-Abar).
  const IntMatrix tg = gadget_basis(mod, n).matrix();
  ZqMatrix neg_abar(n, mbar);
  for (std::size_t i = 0; i < abar.data().size(); ++i) neg_abar.data()[i] = mod.neg(abar.data()[i]);
  const IntMatrix p = bit_decompose(mod, neg_abar);
  const IntMatrix rtg = mul(r, tg);
  const IntMatrix rp = mul(r, p);

  IntMatrix t(m, m);
  for (std::size_t j = 0; j < w; ++j) {
    for (std::size_t i = 0; i < mbar; ++i) t(i, j) = rtg(i, j);
    for (std::size_t i = 0; i < w; ++i) t(mbar + i, j) = tg(i, j);
  }
  for (std::size_t j = 0; j < mbar; ++j) {
    for (std::size_t i = 0; i < mbar; ++i) t(i, w + j) = rp(i, j) + (i == j ? 1 : 0);
    for (std::size_t i = 0; i < w; ++i) t(mbar + i, w + j) = p(i, j);
  }
  LatticeBasis basis(mod, a, std::move(t));
  return TrapGenResult{std::move(a), std::move(basis), std::move(r)};
}

LatticeBasis ext_basis_left(const ZqMatrix& a, const ZqMatrix& b, const LatticeBasis& t_a) {
  const Modulus& mod = t_a.modulus();
  if (!(a == t_a.parent())) throw InvalidArgument("ext_basis_left: basis belongs to a different matrix");
  if (b.rows() != a.rows()) throw InvalidArgument("ext_basis_left: row count mismatch");
  const LinearSolver& solver = t_a.solver();
  if (!solver.full_row_rank()) throw InvalidArgument("ext_basis_left: A is not full row rank mod q");
  ZqMatrix neg_b(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.data().size(); ++i) neg_b.data()[i] = mod.neg(b.data()[i]);
  const ZqMatrix wz = solver.solve(neg_b);

  const std::size_t m = a.cols(), w = b.cols(), N = m + w;
  IntMatrix e(N, N);
  const IntMatrix& ta = t_a.matrix();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) e(i, j) = ta(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < w; ++j) e(i, m + j) = static_cast<i64>(wz(i, j));
  for (std::size_t j = 0; j < w; ++j) e(m + j, m + j) = 1;

  OrthoBasis ob = orthogonalize(e, &t_a.ortho());
  return LatticeBasis(mod, hconcat(a, b), std::move(e), std::move(ob));
}

LatticeBasis ext_basis_right(const ZqMatrix& a, const IntMatrix& s, u64 h, const LatticeBasis& t_g) {
  const Modulus& mod = t_g.modulus();
  const std::size_t n = a.rows(), m = a.cols();
  if (h % mod.q() == 0) throw InvalidArgument("ext_basis_right: h must be invertible mod q");
  if (s.rows() != m || s.cols() != m) throw InvalidArgument("ext_basis_right: S must be m x m");
  const ZqMatrix g = gadget_matrix(mod, n, m);
  if (!(t_g.parent() == g)) throw InvalidArgument("ext_basis_right: expected the gadget basis for G");

  const ZqMatrix d2 = add(mod, mul(mod, a, s), scale(mod, g, h));
  const u64 neg_hinv = mod.neg(mod.inv(h % mod.q()));
  const IntMatrix v2 = bit_decompose(mod, scale(mod, a, neg_hinv), m);
  const IntMatrix& tg = t_g.matrix();
  const IntMatrix stg = mul(s, tg);
  const IntMatrix sv2 = mul(s, v2);

  IntMatrix t(2 * m, 2 * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      t(i, j) = -stg(i, j);
      t(m + i, j) = tg(i, j);
      t(i, m + j) = (i == j ? 1 : 0) - sv2(i, j);
      t(m + i, m + j) = v2(i, j);
    }
  return LatticeBasis(mod, hconcat(a, d2), std::move(t));
}

namespace {

void check_pre_inputs(const ZqMatrix& m, const LatticeBasis& t, const ZqMatrix& u, double sigma) {
  if (!(m == t.parent())) throw InvalidArgument("sample_pre: basis belongs to a different matrix");
  if (u.rows() != m.rows()) throw InvalidArgument("sample_pre: target row count mismatch");
  if (!t.solver().full_row_rank()) throw InvalidArgument("sample_pre: matrix is not full row rank mod q");
  check_sigma(sigma, t.gs_norm(), t.dim());
}

IntVector sample_pre_column(const LatticeBasis& t, const ZqVector& u, double sigma, RngStream& rng) {
  const Modulus& mod = t.modulus();
  const std::size_t N = t.dim(), k = mod.k();
  const ZqVector xp = t.solver().solve_pivots(u);
  const auto& units = t.unit_reductions();
  std::vector<i128> x1(N, 0);
  for (std::size_t r = 0; r < xp.size(); ++r)
    for (std::size_t b = 0; b < k; ++b) {
      if (!((xp[r] >> b) & 1)) continue;
      const IntVector& e = units[r * k + b];
      for (std::size_t i = 0; i < N; ++i) x1[i] += e[i];
    }
  std::vector<double> center(N);
  for (std::size_t i = 0; i < N; ++i) center[i] = static_cast<double>(x1[i]);
  const double bound = sigma * std::sqrt(static_cast<double>(N));
  for (int attempt = 0; attempt < kResampleCap; ++attempt) {
    const IntVector v = klein_point(t.ortho(), sigma, 12.0, center, rng);
    std::vector<i128> y(N);
    for (std::size_t i = 0; i < N; ++i) y[i] = x1[i] - v[i];
    if (norm2(y) <= bound) return to_i64(y);
  }
  throw InternalFailure("sample_pre: preimage norm bound exceeded repeatedly");
}

void verify_pre(const ZqMatrix& m, const IntMatrix& r, const ZqMatrix& u, const Modulus& mod) {
  if (!(mul(mod, m, r) == u)) throw InternalFailure("sample_pre: preimage check failed");
}

}  // namespace

namespace serial {

IntMatrix sample_pre(const ZqMatrix& m, const LatticeBasis& t, const ZqMatrix& u, double sigma, RngStream& rng) {
  check_pre_inputs(m, t, u, sigma);
  const RngStream base = rng.fork();
  IntMatrix r(t.dim(), u.cols());
  for (std::size_t j = 0; j < u.cols(); ++j) {
    RngStream cr = base.substream(j);
    r.set_col(j, sample_pre_column(t, u.col(j), sigma, cr));
  }
  verify_pre(m, r, u, t.modulus());
  return r;
}

}  // namespace serial

namespace par {

IntMatrix sample_pre(const ZqMatrix& m, const LatticeBasis& t, const ZqMatrix& u, double sigma, RngStream& rng) {
  check_pre_inputs(m, t, u, sigma);
  const RngStream base = rng.fork();
  t.ortho();
  t.unit_reductions();
  IntMatrix r(t.dim(), u.cols());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < u.cols(); ++j) {
    try {
      RngStream cr = base.substream(j);
      const IntVector c = sample_pre_column(t, u.col(j), sigma, cr);
      for (std::size_t i = 0; i < c.size(); ++i) r(i, j) = c[i];
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  verify_pre(m, r, u, t.modulus());
  return r;
}

}  // namespace par

IntVector sample_gpv(const LatticeBasis& t, const GaussParam& p, const std::vector<double>& center, RngStream& rng) {
  return sample_gpv(t.ortho(), p, center, rng);
}

LatticeBasis rand_basis(const ZqMatrix& m, const LatticeBasis& t, double sigma, RngStream& rng) {
  if (!(m == t.parent())) throw InvalidArgument("rand_basis: basis belongs to a different matrix");
  const OrthoBasis& ob = t.ortho();
  const auto& g = ob.gs;
  const std::size_t N = ob.dim;
  check_sigma(sigma, g.gs_norm, N);
  const double bound = sigma * std::sqrt(static_cast<double>(N));
  const RngStream base = rng.fork();

  // Column i is t_i - sum_j z_j t_j with z from Klein on levels below i.
  // The new basis differs from the old one by a unit upper-triangular
  // matrix, so the old size-reduced columns and Gram-Schmidt data remain a
  // valid orthogonalization of it.
  IntMatrix out(N, N);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < N; ++i) {
    try {
      RngStream cr = base.substream(i);
      const std::vector<double> d0(g.mu_row(i), g.mu_row(i) + i);
      std::vector<double> d;
      std::vector<i64> z(i, 0);
      bool done = false;
      for (int attempt = 0; attempt < kResampleCap && !done; ++attempt) {
        d = d0;
        klein_levels(g, i, sigma, 12.0, d, z, cr);
        std::vector<i128> v(ob.col(i), ob.col(i) + N);
        for (std::size_t j = 0; j < i; ++j) {
          if (z[j] == 0) continue;
          const i64* bj = ob.col(j);
          for (std::size_t t2 = 0; t2 < N; ++t2) v[t2] -= static_cast<i128>(z[j]) * bj[t2];
        }
        if (norm2(v) > bound) continue;
        const IntVector col = to_i64(v);
        for (std::size_t t2 = 0; t2 < N; ++t2) out(t2, i) = col[t2];
        done = true;
      }
      if (!done) throw InternalFailure("rand_basis: resampling cap exceeded (sigma too small?)");
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return LatticeBasis(t.modulus(), m, std::move(out), ob);
}

}  // namespace lpe
