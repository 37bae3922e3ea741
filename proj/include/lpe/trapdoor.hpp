// Short bases of q-ary lattices and the algorithms that create, extend,
// re-randomize, and sample with them.
#pragma once

#include <memory>
#include <vector>

#include "lpe/gauss.hpp"
#include "lpe/gso.hpp"
#include "lpe/linalg.hpp"
#include "lpe/rng.hpp"
#include "lpe/zq.hpp"

namespace lpe {

// A basis T of Lambda^perp_q(parent). Immutable; the orthogonalization and
// the solver for `parent` are computed on first use and shared by copies.
class LatticeBasis {
 public:
  LatticeBasis(const Modulus& mod, ZqMatrix parent, IntMatrix basis);
  LatticeBasis(const Modulus& mod, ZqMatrix parent, IntMatrix basis, OrthoBasis ortho);

  const Modulus& modulus() const { return mod_; }
  const ZqMatrix& parent() const { return parent_; }
  const IntMatrix& matrix() const { return basis_; }
  std::size_t dim() const { return basis_.rows(); }

  const OrthoBasis& ortho() const;
  const GramSchmidtData& gs() const { return ortho().gs; }
  double gs_norm() const { return gs().gs_norm; }
  const LinearSolver& solver() const;

  // Short vectors congruent to 2^b e_p modulo the lattice, for every pivot p
  // of solver() and b < k; entry [r * k + b].
  const std::vector<IntVector>& unit_reductions() const;

  // Canonical form of the lattice generated by the columns. Throws if the
  // columns do not generate a lattice containing q Z^N.
  QaryLattice hnf() const;
  // True iff the columns generate all of Lambda^perp_q(parent).
  bool generates_kernel() const;

 private:
  struct Cache;
  Modulus mod_;
  ZqMatrix parent_;
  IntMatrix basis_;
  std::shared_ptr<Cache> cache_;
};

// I_n (x) S_k, padded with an identity block up to m x m (m = 0 means n*k).
LatticeBasis gadget_basis(const Modulus& mod, std::size_t n, std::size_t m = 0);

struct TrapGenResult {
  ZqMatrix a;
  LatticeBasis t;
  IntMatrix r;  // gadget trapdoor: a * [r; I] = G (mod q)
};

// A = [Abar | G - Abar R] with m - n*k columns in Abar (m >= 2 n k).
TrapGenResult trap_gen(const Modulus& mod, std::size_t n, std::size_t m, RngStream& rng, double sigma_r = 2.0);

// Basis of Lambda^perp_q([A | B]) as [[T_A, W], [0, I]] with A W = -B.
LatticeBasis ext_basis_left(const ZqMatrix& a, const ZqMatrix& b, const LatticeBasis& t_a);

// Basis of Lambda^perp_q([A | A S + h G]) from the gadget basis alone.
LatticeBasis ext_basis_right(const ZqMatrix& a, const IntMatrix& s, u64 h, const LatticeBasis& t_g);

namespace serial {
IntMatrix sample_pre(const ZqMatrix& m, const LatticeBasis& t, const ZqMatrix& u, double sigma, RngStream& rng);
}
namespace par {
IntMatrix sample_pre(const ZqMatrix& m, const LatticeBasis& t, const ZqMatrix& u, double sigma, RngStream& rng);
}
// R with M R = U (mod q), columns from discrete Gaussians of width sigma.
inline IntMatrix sample_pre(const ZqMatrix& m, const LatticeBasis& t, const ZqMatrix& u, double sigma,
                            RngStream& rng) {
  return par::sample_pre(m, t, u, sigma, rng);
}

// Lattice point near `center` (overload for bases).
IntVector sample_gpv(const LatticeBasis& t, const GaussParam& p, const std::vector<double>& center, RngStream& rng);

// Re-randomized basis of the same lattice. Column i is redrawn from the
// discrete Gaussian over the coset t_i + L(t_1..t_{i-1}), which keeps the
// basis exact and its Gram-Schmidt vectors unchanged.
LatticeBasis rand_basis(const ZqMatrix& m, const LatticeBasis& t, double sigma, RngStream& rng);

}  // namespace lpe
