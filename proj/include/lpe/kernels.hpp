// Dense modular products. Each kernel exists twice: `serial` is the
// reference, `par` splits output columns across OpenMP threads. Both must
// agree bit for bit; the unqualified wrappers dispatch to `par`.
#pragma once

#include "lpe/zq.hpp"

namespace lpe {

namespace serial {
ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const IntMatrix& x);
ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const ZqMatrix& b);
ZqVector mul_t(const Modulus& mod, const IntMatrix& x, const ZqVector& v);  // x^T v
ZqVector mul_t(const Modulus& mod, const ZqMatrix& a, const ZqVector& v);   // a^T v
IntMatrix mul(const IntMatrix& x, const IntMatrix& y);  // throws on overflow
}  // namespace serial

namespace par {
ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const IntMatrix& x);
ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const ZqMatrix& b);
ZqVector mul_t(const Modulus& mod, const IntMatrix& x, const ZqVector& v);
ZqVector mul_t(const Modulus& mod, const ZqMatrix& a, const ZqVector& v);
IntMatrix mul(const IntMatrix& x, const IntMatrix& y);
}  // namespace par

inline ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const IntMatrix& x) { return par::mul(mod, a, x); }
inline ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const ZqMatrix& b) { return par::mul(mod, a, b); }
inline ZqVector mul_t(const Modulus& mod, const IntMatrix& x, const ZqVector& v) { return par::mul_t(mod, x, v); }
inline ZqVector mul_t(const Modulus& mod, const ZqMatrix& a, const ZqVector& v) { return par::mul_t(mod, a, v); }
inline IntMatrix mul(const IntMatrix& x, const IntMatrix& y) { return par::mul(x, y); }

}  // namespace lpe
