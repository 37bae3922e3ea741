// Arithmetic circuits over Z_q and their key-homomorphic evaluation.
#pragma once

#include <string>
#include <vector>

#include "lpe/zq.hpp"

namespace lpe {

enum class GateKind : std::uint8_t { Input, ConstAdd, ConstMul, Add, Mul };

struct Gate {
  GateKind kind;
  std::size_t a = 0;  // input index, or the (left) operand wire
  std::size_t b = 0;  // right operand wire
  i64 c = 0;          // constant, reduced mod q at evaluation
};

class Circuit {
 public:
  explicit Circuit(std::size_t num_inputs);

  std::size_t input(std::size_t i);
  std::size_t const_add(std::size_t w, i64 a);
  std::size_t const_mul(std::size_t w, i64 a);
  std::size_t add(std::size_t l, std::size_t r);
  std::size_t mul(std::size_t l, std::size_t r);
  void set_output(std::size_t w);

  std::size_t num_inputs() const { return num_inputs_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t output() const { return output_; }
  std::size_t depth() const { return depth_.empty() ? 0 : depth_[output_]; }

  // When set, evaluation checks that every Mul left operand is 0 or 1.
  bool binary_mul_left() const { return binary_mul_left_; }
  void set_binary_mul_left(bool v) { binary_mul_left_ = v; }

  // One line per gate: `idx kind operands`.
  std::string dump() const;

 private:
  std::size_t push(Gate g, std::size_t depth);
  void check_wire(std::size_t w) const;

  std::size_t num_inputs_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> depth_;
  std::size_t output_ = 0;
  bool binary_mul_left_ = false;
};

// Value of every wire; throws on arity mismatch.
ZqVector eval_wires(const Modulus& mod, const Circuit& c, const ZqVector& x);
u64 eval_value(const Modulus& mod, const Circuit& c, const ZqVector& x);

// The G^{-1} matrices of an eval_pk run, one per ConstMul/Mul gate (empty
// elsewhere). Ciphertext evaluation only needs these, not the B matrices.
struct PkTrace {
  std::vector<IntMatrix> x;
  ZqMatrix b_f;
};

ZqMatrix eval_pk(const Modulus& mod, const Circuit& c, const std::vector<ZqMatrix>& b, PkTrace* trace = nullptr);

ZqVector eval_ct(const Modulus& mod, const Circuit& c, const ZqVector& x, const PkTrace& trace,
                 const std::vector<ZqVector>& ct);
ZqVector eval_ct(const Modulus& mod, const Circuit& c, const ZqVector& x, const std::vector<ZqMatrix>& b,
                 const std::vector<ZqVector>& ct);

// S_f with A S_f - f(x*) G = B_f, where B_f = eval_pk on B_i = A S_i - x*_i G.
IntMatrix eval_sim(const Modulus& mod, const Circuit& c, const ZqVector& xstar, const std::vector<IntMatrix>& s,
                   const ZqMatrix& a);

// Bit-equality test sum_i [t_i = t_star] over d tags of ell bits each.
// Input i*ell + j is bit j of tag i.
Circuit build_f_tstar(u64 t_star, std::size_t d, std::size_t ell);

// The same family through 1 - (t - t_star)^(q-1), one Z_q input per tag.
Circuit build_eq_fermat(u64 t_star, u64 q, std::size_t d);

// Infinity-norm bound on the output noise of eval_ct when each input carries
// noise at most delta_in; m is the column count of the encodings.
double noise_bound(const Modulus& mod, const Circuit& c, const ZqVector& x, double delta_in, std::size_t m);

}  // namespace lpe
