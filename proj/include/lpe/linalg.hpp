// Gaussian elimination over F_q and canonical forms of q-ary lattices.
#pragma once

#include <vector>

#include "lpe/zq.hpp"

namespace lpe {

// Reduced row echelon form of the rows of `m`; zero rows are dropped.
struct Echelon {
  ZqMatrix rref;                     // rank x cols
  std::vector<std::size_t> pivots;   // pivot column of each rref row
  // rows(m) x rows(m); the first rank rows map m to rref, the rest map m to 0.
  ZqMatrix transform;
};

Echelon row_echelon(const Modulus& mod, const ZqMatrix& m, bool with_transform = true);

// Repeated solves of M x = u (mod q). Free variables are set to zero, so a
// solution is supported on the pivot columns only.
class LinearSolver {
 public:
  LinearSolver(const Modulus& mod, const ZqMatrix& m);
  std::size_t rank() const { return ech_.pivots.size(); }
  bool full_row_rank() const { return rank() == rows_; }
  const std::vector<std::size_t>& pivots() const { return ech_.pivots; }
  // Values on pivots() for the solution of M x = u; throws if unsolvable.
  ZqVector solve_pivots(const ZqVector& u) const;
  ZqMatrix solve(const ZqMatrix& u) const;  // cols(M) x cols(u)

 private:
  Modulus mod_;
  std::size_t rows_, cols_;
  Echelon ech_;
};

// L = { x in Z^N : x mod q in V } for a subspace V of F_q^N, stored as the
// reduced echelon basis of V. Two q-ary lattices are equal iff these agree.
struct QaryLattice {
  std::size_t dim = 0;
  ZqMatrix span;  // rref rows spanning V
  std::vector<std::size_t> pivots;

  bool operator==(const QaryLattice& o) const { return dim == o.dim && span == o.span; }
  // Hermite-style integer basis: the rref rows lifted to [0, q) plus q*e_j
  // for every non-pivot coordinate j, ordered by leading coordinate.
  IntMatrix hnf_basis(const Modulus& mod) const;
};

QaryLattice qary_from_span(const Modulus& mod, const ZqMatrix& generators_as_rows);
// Canonical form of Lambda^perp_q(M).
QaryLattice kernel_lattice(const Modulus& mod, const ZqMatrix& m);

}  // namespace lpe
