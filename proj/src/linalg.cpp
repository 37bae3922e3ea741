#include "lpe/linalg.hpp"

#include <algorithm>

namespace lpe {

Echelon row_echelon(const Modulus& mod, const ZqMatrix& m, bool with_transform) {
  const std::size_t R = m.rows(), C = m.cols();
  ZqMatrix a = m;
  ZqMatrix t(with_transform ? R : 0, with_transform ? R : 0);
  for (std::size_t i = 0; i < t.rows(); ++i) t(i, i) = 1;

  auto axpy_row = [&](ZqMatrix& x, std::size_t dst, std::size_t src, u64 f, std::size_t from) {
    const u64 fs = mod.shoup(f);
    u64* d = x.row(dst);
    const u64* s = x.row(src);
    for (std::size_t j = from; j < x.cols(); ++j) d[j] = mod.sub(d[j], mod.mul_shoup(s[j], f, fs));
  };

  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && a(p, c) == 0) ++p;
    if (p == R) continue;
    if (p != r) {
      std::swap_ranges(a.row(p), a.row(p) + C, a.row(r));
      if (with_transform) std::swap_ranges(t.row(p), t.row(p) + R, t.row(r));
    }
    const u64 inv = mod.inv(a(r, c));
    const u64 is = mod.shoup(inv);
    for (std::size_t j = c; j < C; ++j) a(r, j) = mod.mul_shoup(a(r, j), inv, is);
    if (with_transform)
      for (std::size_t j = 0; j < R; ++j) t(r, j) = mod.mul_shoup(t(r, j), inv, is);
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const u64 f = a(i, c);
      axpy_row(a, i, r, f, c);
      if (with_transform) axpy_row(t, i, r, f, 0);
    }
    pivots.push_back(c);
    ++r;
  }

  Echelon e;
  e.pivots = pivots;
  e.rref = ZqMatrix(r, C);
  for (std::size_t i = 0; i < r; ++i) std::copy(a.row(i), a.row(i) + C, e.rref.row(i));
  e.transform = std::move(t);
  return e;
}

LinearSolver::LinearSolver(const Modulus& mod, const ZqMatrix& m)
    : mod_(mod), rows_(m.rows()), cols_(m.cols()), ech_(row_echelon(mod, m)) {}

ZqVector LinearSolver::solve_pivots(const ZqVector& u) const {
  if (u.size() != rows_) throw InvalidArgument("solve: right-hand side length mismatch");
  const std::size_t r = rank();
  const ZqMatrix& t = ech_.transform;
  ZqVector x(r, 0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    u64 s = 0;
    for (std::size_t j = 0; j < rows_; ++j) s = mod_.add(s, mod_.mul(t(i, j), u[j]));
    if (i < r)
      x[i] = s;
    else if (s != 0)
      throw InvalidArgument("solve: system is inconsistent mod q");
  }
  return x;
}

ZqMatrix LinearSolver::solve(const ZqMatrix& u) const {
  ZqMatrix x(cols_, u.cols());
  for (std::size_t j = 0; j < u.cols(); ++j) {
    ZqVector xp = solve_pivots(u.col(j));
    for (std::size_t i = 0; i < xp.size(); ++i) x(ech_.pivots[i], j) = xp[i];
  }
  return x;
}

QaryLattice qary_from_span(const Modulus& mod, const ZqMatrix& gens) {
  Echelon e = row_echelon(mod, gens, false);
  QaryLattice l;
  l.dim = gens.cols();
  l.span = e.rref;
  l.pivots = e.pivots;
  return l;
}

QaryLattice kernel_lattice(const Modulus& mod, const ZqMatrix& m) {
  Echelon e = row_echelon(mod, m, false);
  const std::size_t N = m.cols();
  std::vector<bool> is_pivot(N, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < N; ++j)
    if (!is_pivot[j]) free.push_back(j);
  ZqMatrix gens(free.size(), N);
  for (std::size_t f = 0; f < free.size(); ++f) {
    gens(f, free[f]) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) gens(f, e.pivots[r]) = mod.neg(e.rref(r, free[f]));
  }
  return qary_from_span(mod, gens);
}

IntMatrix QaryLattice::hnf_basis(const Modulus& mod) const {
  IntMatrix b(dim, dim);
  std::vector<int> owner(dim, -1);
  for (std::size_t r = 0; r < pivots.size(); ++r) owner[pivots[r]] = static_cast<int>(r);
  for (std::size_t j = 0; j < dim; ++j) {
    if (owner[j] >= 0) {
      for (std::size_t i = 0; i < dim; ++i) b(i, j) = static_cast<i64>(span(owner[j], i));
    } else {
      b(j, j) = static_cast<i64>(mod.q());
    }
  }
  return b;
}

}  // namespace lpe
