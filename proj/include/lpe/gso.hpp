// Gram-Schmidt data, exact size reduction, and the spectral norm.
#pragma once

#include <vector>

#include "lpe/zq.hpp"

namespace lpe {

struct GramSchmidtData {
  std::size_t dim = 0;    // length of each vector
  std::size_t count = 0;  // number of vectors
  std::vector<double> vecs;      // b~_j stored contiguously at j*dim
  std::vector<double> sq_norms;  // |b~_j|^2
  std::vector<double> mu;        // mu[i*count + j] = <b_i, b~_j> / |b~_j|^2 for j < i
  double gs_norm = 0;            // max_j |b~_j|

  const double* vec(std::size_t j) const { return vecs.data() + j * dim; }
  const double* mu_row(std::size_t i) const { return mu.data() + i * count; }
  double log_volume() const;  // sum_j log |b~_j|
};

// A basis together with its orthogonalization, stored column-major for the
// samplers. `cols` may differ from the input by a unit upper-triangular
// transform (exact size reduction), which changes neither the lattice nor
// the Gram-Schmidt vectors.
struct OrthoBasis {
  std::size_t dim = 0;
  std::vector<i64> cols;  // column j at j*dim
  GramSchmidtData gs;

  const i64* col(std::size_t j) const { return cols.data() + j * dim; }
  IntMatrix matrix() const;
};

// `prefix`, when given, must be an orthogonalization of the leading columns
// of b restricted to the leading coordinates (b being zero below them); it is
// reused instead of recomputed.
namespace serial {
// Modified Gram-Schmidt in column order.
OrthoBasis orthogonalize(const IntMatrix& b, const OrthoBasis* prefix = nullptr);
}
namespace par {
// Classical Gram-Schmidt with one reorthogonalization; dot products and
// updates are split across threads.
OrthoBasis orthogonalize(const IntMatrix& b, const OrthoBasis* prefix = nullptr);
}
inline OrthoBasis orthogonalize(const IntMatrix& b, const OrthoBasis* prefix = nullptr) {
  return par::orthogonalize(b, prefix);
}

// Throws InvalidArgument for rank-deficient input.
GramSchmidtData gram_schmidt(const IntMatrix& b);

// Exact nearest-plane reduction of w modulo the lattice spanned by the first
// `r` columns of `ob`. Runs repeated passes so that huge inputs (entries near
// 2^62) come out fully reduced despite floating-point projections.
void reduce_mod_lattice(const OrthoBasis& ob, std::size_t r, std::vector<i128>& w);

// Largest singular value by power iteration on M^T M from the all-ones vector.
double sup_norm(const IntMatrix& m, double rel_tol = 1e-9, int max_iter = 200);

}  // namespace lpe
