#include "lpe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpe/kernels.hpp"

namespace lpe {

Circuit::Circuit(std::size_t num_inputs) : num_inputs_(num_inputs) {
  if (num_inputs == 0) throw InvalidArgument("circuit needs at least one input");
}

void Circuit::check_wire(std::size_t w) const {
  if (w >= gates_.size()) throw InvalidArgument("circuit operand refers to a later gate");
}

std::size_t Circuit::push(Gate g, std::size_t depth) {
  gates_.push_back(g);
  depth_.push_back(depth);
  output_ = gates_.size() - 1;
  return output_;
}

std::size_t Circuit::input(std::size_t i) {
  if (i >= num_inputs_) throw InvalidArgument("circuit input index out of range");
  return push({GateKind::Input, i, 0, 0}, 0);
}

std::size_t Circuit::const_add(std::size_t w, i64 a) {
  check_wire(w);
  return push({GateKind::ConstAdd, w, 0, a}, depth_[w]);
}

std::size_t Circuit::const_mul(std::size_t w, i64 a) {
  check_wire(w);
  return push({GateKind::ConstMul, w, 0, a}, depth_[w]);
}

std::size_t Circuit::add(std::size_t l, std::size_t r) {
  check_wire(l);
  check_wire(r);
  return push({GateKind::Add, l, r, 0}, std::max(depth_[l], depth_[r]));
}

std::size_t Circuit::mul(std::size_t l, std::size_t r) {
  check_wire(l);
  check_wire(r);
  return push({GateKind::Mul, l, r, 0}, std::max(depth_[l], depth_[r]) + 1);
}

void Circuit::set_output(std::size_t w) {
  check_wire(w);
  output_ = w;
}

std::string Circuit::dump() const {
  static const char* names[] = {"input", "const_add", "const_mul", "add", "mul"};
  std::ostringstream os;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    os << i << ' ' << names[static_cast<int>(g.kind)] << ' ' << g.a;
    if (g.kind == GateKind::ConstAdd || g.kind == GateKind::ConstMul) os << ' ' << g.c;
    if (g.kind == GateKind::Add || g.kind == GateKind::Mul) os << ' ' << g.b;
    os << '\n';
  }
  os << "output " << output_ << '\n';
  return os.str();
}

namespace {

void check_nonempty(const Circuit& c) {
  if (c.gates().empty()) throw InvalidArgument("circuit has no gates");
}

void check_binary_left(const Circuit& c, u64 v) {
  if (c.binary_mul_left() && v > 1) throw InternalFailure("Mul left operand is not a bit");
}

IntMatrix const_mul_matrix(const Modulus& mod, i64 a, std::size_t n, std::size_t m) {
  return bit_decompose(mod, scale(mod, gadget_matrix(mod, n, m), mod.reduce(a)), m);
}

ZqVector vadd(const Modulus& mod, const ZqVector& x, const ZqVector& y) {
  ZqVector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = mod.add(x[i], y[i]);
  return r;
}

i64 checked(i128 v) {
  if (v > INT64_MAX || v < -INT64_MAX) throw InternalFailure("eval_sim: entry overflow");
  return static_cast<i64>(v);
}

}  // namespace

ZqVector eval_wires(const Modulus& mod, const Circuit& c, const ZqVector& x) {
  if (x.size() != c.num_inputs()) throw InvalidArgument("circuit arity mismatch");
  check_nonempty(c);
  const auto& gs = c.gates();
  ZqVector v(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& g = gs[i];
    switch (g.kind) {
      case GateKind::Input: v[i] = x[g.a] % mod.q(); break;
      case GateKind::ConstAdd: v[i] = mod.add(v[g.a], mod.reduce(g.c)); break;
      case GateKind::ConstMul: v[i] = mod.mul(v[g.a], mod.reduce(g.c)); break;
      case GateKind::Add: v[i] = mod.add(v[g.a], v[g.b]); break;
      case GateKind::Mul:
        check_binary_left(c, v[g.a]);
        v[i] = mod.mul(v[g.a], v[g.b]);
        break;
    }
  }
  return v;
}

u64 eval_value(const Modulus& mod, const Circuit& c, const ZqVector& x) {
  return eval_wires(mod, c, x)[c.output()];
}

ZqMatrix eval_pk(const Modulus& mod, const Circuit& c, const std::vector<ZqMatrix>& b, PkTrace* trace) {
  if (b.size() != c.num_inputs()) throw InvalidArgument("eval_pk: arity mismatch");
  check_nonempty(c);
  const std::size_t n = b[0].rows(), m = b[0].cols();
  for (const auto& bi : b)
    if (bi.rows() != n || bi.cols() != m) throw InvalidArgument("eval_pk: input matrices differ in shape");
  const ZqMatrix g = gadget_matrix(mod, n, m);
  const auto& gs = c.gates();
  std::vector<ZqMatrix> w(gs.size());
  if (trace) trace->x.assign(gs.size(), IntMatrix());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& gt = gs[i];
    switch (gt.kind) {
      case GateKind::Input: w[i] = b[gt.a]; break;
      case GateKind::ConstAdd: w[i] = sub(mod, w[gt.a], scale(mod, g, mod.reduce(gt.c))); break;
      case GateKind::Add: w[i] = add(mod, w[gt.a], w[gt.b]); break;
      case GateKind::ConstMul: {
        IntMatrix x = const_mul_matrix(mod, gt.c, n, m);
        w[i] = mul(mod, w[gt.a], x);
        if (trace) trace->x[i] = std::move(x);
        break;
      }
      case GateKind::Mul: {
        IntMatrix x = bit_decompose(mod, w[gt.b], m);
        ZqMatrix p = mul(mod, w[gt.a], x);
        for (auto& e : p.data()) e = mod.neg(e);
        w[i] = std::move(p);
        if (trace) trace->x[i] = std::move(x);
        break;
      }
    }
  }
  if (trace) trace->b_f = w[c.output()];
  return w[c.output()];
}

ZqVector eval_ct(const Modulus& mod, const Circuit& c, const ZqVector& x, const PkTrace& trace,
                 const std::vector<ZqVector>& ct) {
  if (ct.size() != c.num_inputs() || x.size() != c.num_inputs()) throw InvalidArgument("eval_ct: arity mismatch");
  if (trace.x.size() != c.gates().size()) throw InvalidArgument("eval_ct: trace does not match the circuit");
  const ZqVector vals = eval_wires(mod, c, x);
  const auto& gs = c.gates();
  const std::size_t m = ct[0].size();
  for (const auto& v : ct)
    if (v.size() != m) throw InvalidArgument("eval_ct: ciphertext lengths differ");
  std::vector<ZqVector> w(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& gt = gs[i];
    switch (gt.kind) {
      case GateKind::Input: w[i] = ct[gt.a]; break;
      case GateKind::ConstAdd: w[i] = w[gt.a]; break;
      case GateKind::Add: w[i] = vadd(mod, w[gt.a], w[gt.b]); break;
      case GateKind::ConstMul: w[i] = mul_t(mod, trace.x[i], w[gt.a]); break;
      case GateKind::Mul: {
        const u64 xl = vals[gt.a];
        const ZqVector t = mul_t(mod, trace.x[i], w[gt.a]);
        ZqVector r(m);
        const ZqVector& cr = w[gt.b];
        for (std::size_t j = 0; j < m; ++j) r[j] = mod.sub(mod.mul(xl, cr[j]), t[j]);
        w[i] = std::move(r);
        break;
      }
    }
  }
  return w[c.output()];
}

ZqVector eval_ct(const Modulus& mod, const Circuit& c, const ZqVector& x, const std::vector<ZqMatrix>& b,
                 const std::vector<ZqVector>& ct) {
  PkTrace trace;
  eval_pk(mod, c, b, &trace);
  return eval_ct(mod, c, x, trace, ct);
}

IntMatrix eval_sim(const Modulus& mod, const Circuit& c, const ZqVector& xstar, const std::vector<IntMatrix>& s,
                   const ZqMatrix& a) {
  if (s.size() != c.num_inputs() || xstar.size() != c.num_inputs()) throw InvalidArgument("eval_sim: arity mismatch");
  check_nonempty(c);
  const std::size_t n = a.rows(), m = a.cols();
  for (const auto& si : s)
    if (si.rows() != m || si.cols() != m) throw InvalidArgument("eval_sim: S_i must be m x m");
  const ZqVector vals = eval_wires(mod, c, xstar);
  const ZqMatrix g = gadget_matrix(mod, n, m);
  const auto& gs = c.gates();
  std::vector<IntMatrix> w(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& gt = gs[i];
    switch (gt.kind) {
      case GateKind::Input: w[i] = s[gt.a]; break;
      case GateKind::ConstAdd: w[i] = w[gt.a]; break;
      case GateKind::Add: {
        IntMatrix r(m, m);
        for (std::size_t t = 0; t < r.data().size(); ++t)
          r.data()[t] = checked(static_cast<i128>(w[gt.a].data()[t]) + w[gt.b].data()[t]);
        w[i] = std::move(r);
        break;
      }
      case GateKind::ConstMul: w[i] = mul(w[gt.a], const_mul_matrix(mod, gt.c, n, m)); break;
      case GateKind::Mul: {
        // B_r = A S_r - x_r G.
        const ZqMatrix br = sub(mod, mul(mod, a, w[gt.b]), scale(mod, g, vals[gt.b]));
        const IntMatrix sx = mul(w[gt.a], bit_decompose(mod, br, m));
        const i64 xl = mod.centered(vals[gt.a]);
        IntMatrix r(m, m);
        for (std::size_t t = 0; t < r.data().size(); ++t)
          r.data()[t] = checked(static_cast<i128>(xl) * w[gt.b].data()[t] - sx.data()[t]);
        w[i] = std::move(r);
        break;
      }
    }
  }
  return w[c.output()];
}

Circuit build_f_tstar(u64 t_star, std::size_t d, std::size_t ell) {
  if (d == 0 || ell == 0 || ell >= 63) throw InvalidArgument("build_f_tstar: need d >= 1 and 1 <= ell < 63");
  if (t_star >> ell) throw InvalidArgument("build_f_tstar: t_star does not fit in ell bits");
  Circuit c(d * ell);
  c.set_binary_mul_left(true);
  auto match = [&](std::size_t i, std::size_t j) {
    const std::size_t in = c.input(i * ell + j);
    if ((t_star >> j) & 1) return in;
    return c.const_add(c.const_mul(in, -1), 1);
  };
  std::size_t sum = 0;
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t acc = match(i, 0);
    for (std::size_t j = 1; j < ell; ++j) {
      const std::size_t wj = match(i, j);
      acc = c.mul(wj, acc);
    }
    sum = i == 0 ? acc : c.add(sum, acc);
  }
  c.set_output(sum);
  return c;
}

Circuit build_eq_fermat(u64 t_star, u64 q, std::size_t d) {
  if (q > 64) throw InvalidArgument("build_eq_fermat: only for q <= 64");
  if (q < 3 || !is_prime(q)) throw InvalidArgument("build_eq_fermat: q must be an odd prime");
  if (d == 0 || t_star >= q) throw InvalidArgument("build_eq_fermat: need d >= 1 and t_star < q");
  Circuit c(d);
  const u64 e = q - 1;
  std::size_t sum = 0;
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t pw = c.const_add(c.input(i), -static_cast<i64>(t_star));
    std::size_t acc = 0;
    bool have = false;
    for (unsigned j = 0; (e >> j) != 0; ++j) {
      if (j > 0) pw = c.mul(pw, pw);
      if ((e >> j) & 1) {
        acc = have ? c.mul(acc, pw) : pw;
        have = true;
      }
    }
    const std::size_t eq = c.const_add(c.const_mul(acc, -1), 1);
    sum = i == 0 ? eq : c.add(sum, eq);
  }
  c.set_output(sum);
  return c;
}

double noise_bound(const Modulus& mod, const Circuit& c, const ZqVector& x, double delta_in, std::size_t m) {
  const ZqVector vals = eval_wires(mod, c, x);
  const auto& gs = c.gates();
  const double md = static_cast<double>(m);
  std::vector<double> b(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& g = gs[i];
    switch (g.kind) {
      case GateKind::Input: b[i] = delta_in; break;
      case GateKind::ConstAdd: b[i] = b[g.a]; break;
      case GateKind::ConstMul: b[i] = md * b[g.a]; break;
      case GateKind::Add: b[i] = b[g.a] + b[g.b]; break;
      case GateKind::Mul: {
        const double xl = std::fabs(static_cast<double>(mod.centered(vals[g.a])));
        b[i] = xl * b[g.b] + md * b[g.a];
        break;
      }
    }
  }
  return b[c.output()];
}

}  // namespace lpe
