// Small helpers shared by the unit tests.
#pragma once

#include <cmath>

#include "lpe/circuit.hpp"
#include "lpe/kernels.hpp"
#include "lpe/rng.hpp"
#include "lpe/zq.hpp"

namespace lpe::test {

inline ZqMatrix random_zq(const Modulus& mod, std::size_t r, std::size_t c, RngStream& rng) {
  ZqMatrix x(r, c);
  for (auto& v : x.data()) v = rng.uniform_below(mod.q());
  return x;
}

inline IntMatrix random_int(std::size_t r, std::size_t c, i64 bound, RngStream& rng) {
  IntMatrix x(r, c);
  for (auto& v : x.data()) v = rng.uniform_range(-bound, bound);
  return x;
}

inline IntMatrix random_pm1(std::size_t r, std::size_t c, RngStream& rng) {
  IntMatrix x(r, c);
  for (auto& v : x.data()) v = (rng.next_u64() & 1) ? 1 : -1;
  return x;
}

inline bool is_zero(const ZqMatrix& m) {
  for (u64 v : m.data())
    if (v) return false;
  return true;
}

inline double col_norm(const IntMatrix& m, std::size_t j) {
  double s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += double(m(i, j)) * double(m(i, j));
  return std::sqrt(s);
}

// Random circuit over `inputs` inputs whose multiplicative depth stays at or
// below `max_depth`; small constants keep eval_sim entries bounded.
inline Circuit random_circuit(std::size_t inputs, std::size_t max_depth, std::size_t gates, RngStream& rng) {
  Circuit c(inputs);
  std::vector<std::size_t> wires, depth;
  for (std::size_t i = 0; i < inputs; ++i) {
    wires.push_back(c.input(i));
    depth.push_back(0);
  }
  for (std::size_t g = 0; g < gates; ++g) {
    const std::size_t l = rng.uniform_below(wires.size()), r = rng.uniform_below(wires.size());
    std::size_t w = 0, dw = depth[l];
    switch (rng.uniform_below(4)) {
      case 0: w = c.const_add(wires[l], rng.uniform_range(-5, 5)); break;
      case 1: w = c.const_mul(wires[l], rng.uniform_range(-3, 3)); break;
      case 2:
        w = c.add(wires[l], wires[r]);
        dw = std::max(depth[l], depth[r]);
        break;
      default:
        if (std::max(depth[l], depth[r]) + 1 > max_depth) {
          w = c.add(wires[l], wires[r]);
          dw = std::max(depth[l], depth[r]);
        } else {
          w = c.mul(wires[l], wires[r]);
          dw = std::max(depth[l], depth[r]) + 1;
        }
    }
    wires.push_back(w);
    depth.push_back(dw);
  }
  c.set_output(wires.back());
  return c;
}

// B_i = A S_i - x_i G for the simulation identity.
inline std::vector<ZqMatrix> simulated_keys(const Modulus& mod, const ZqMatrix& a, const std::vector<IntMatrix>& s,
                                            const ZqVector& x) {
  const ZqMatrix g = gadget_matrix(mod, a.rows(), a.cols());
  std::vector<ZqMatrix> b;
  for (std::size_t i = 0; i < s.size(); ++i) b.push_back(sub(mod, mul(mod, a, s[i]), scale(mod, g, x[i] % mod.q())));
  return b;
}

// A S_f - f(x) G == B_f, entrywise mod q.
inline bool simulation_identity(const Modulus& mod, const Circuit& f, const ZqMatrix& a,
                                const std::vector<IntMatrix>& s, const ZqVector& x) {
  const ZqMatrix bf = eval_pk(mod, f, simulated_keys(mod, a, s, x));
  const IntMatrix sf = eval_sim(mod, f, x, s, a);
  const ZqMatrix g = gadget_matrix(mod, a.rows(), a.cols());
  return sub(mod, mul(mod, a, sf), scale(mod, g, eval_value(mod, f, x))) == bf;
}

}  // namespace lpe::test
