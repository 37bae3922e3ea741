#include "lpe/kernels.hpp"

#include <algorithm>
#include <limits>

namespace lpe {

namespace {

void check_inner(std::size_t a_cols, std::size_t b_rows) {
  if (a_cols != b_rows) throw InvalidArgument("matrix product: inner dimension mismatch");
}

constexpr std::size_t kBlock = 64;
// Products of a canonical entry (< 2^62) and |x| < 2^40 can be summed 2^24
// times in 128 bits without overflow.
constexpr i64 kSmall = i64(1) << 40;

i64 checked_mul_add(i64 acc, i64 a, i64 b) {
  i64 p;
  if (__builtin_mul_overflow(a, b, &p) || __builtin_add_overflow(acc, p, &acc))
    throw InternalFailure("integer matrix product overflow");
  return acc;
}

}  // namespace

namespace serial {

ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const IntMatrix& x) {
  check_inner(a.cols(), x.rows());
  ZqMatrix r(a.rows(), x.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      u64 s = 0;
      for (std::size_t l = 0; l < a.cols(); ++l) s = mod.add(s, mod.mul(a(i, l), mod.reduce(x(l, j))));
      r(i, j) = s;
    }
  return r;
}

ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const ZqMatrix& b) {
  check_inner(a.cols(), b.rows());
  ZqMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      u64 s = 0;
      for (std::size_t l = 0; l < a.cols(); ++l) s = mod.add(s, mod.mul(a(i, l), b(l, j)));
      r(i, j) = s;
    }
  return r;
}

ZqVector mul_t(const Modulus& mod, const IntMatrix& x, const ZqVector& v) {
  check_inner(x.rows(), v.size());
  ZqVector r(x.cols(), 0);
  for (std::size_t j = 0; j < x.cols(); ++j)
    for (std::size_t i = 0; i < x.rows(); ++i) r[j] = mod.add(r[j], mod.mul(mod.reduce(x(i, j)), v[i]));
  return r;
}

ZqVector mul_t(const Modulus& mod, const ZqMatrix& a, const ZqVector& v) {
  check_inner(a.rows(), v.size());
  ZqVector r(a.cols(), 0);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) r[j] = mod.add(r[j], mod.mul(a(i, j), v[i]));
  return r;
}

IntMatrix mul(const IntMatrix& x, const IntMatrix& y) {
  check_inner(x.cols(), y.rows());
  IntMatrix r(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) {
      i64 s = 0;
      for (std::size_t l = 0; l < x.cols(); ++l) s = checked_mul_add(s, x(i, l), y(l, j));
      r(i, j) = s;
    }
  return r;
}

}  // namespace serial

namespace par {

ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const IntMatrix& x) {
  check_inner(a.cols(), x.rows());
  if (x.max_abs() >= kSmall || a.cols() >= (std::size_t{1} << 24)) return serial::mul(mod, a, x);
  ZqMatrix r(a.rows(), x.cols());
  const std::size_t nb = (x.cols() + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t j0 = b * kBlock, j1 = std::min(x.cols(), j0 + kBlock);
    i128 acc[kBlock];
    for (std::size_t i = 0; i < a.rows(); ++i) {
      std::fill(acc, acc + (j1 - j0), 0);
      for (std::size_t l = 0; l < a.cols(); ++l) {
        const i128 av = static_cast<i128>(a(i, l));
        if (av == 0) continue;
        const i64* xr = x.data().data() + l * x.cols();
        for (std::size_t j = j0; j < j1; ++j) acc[j - j0] += av * xr[j];
      }
      for (std::size_t j = j0; j < j1; ++j) r(i, j) = mod.reduce128(acc[j - j0]);
    }
  }
  return r;
}

ZqMatrix mul(const Modulus& mod, const ZqMatrix& a, const ZqMatrix& b) {
  check_inner(a.cols(), b.rows());
  ZqMatrix r(a.rows(), b.cols());
  const std::size_t nb = (b.cols() + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (std::size_t bl = 0; bl < nb; ++bl) {
    const std::size_t j0 = bl * kBlock, j1 = std::min(b.cols(), j0 + kBlock);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      u64 acc[kBlock] = {};
      for (std::size_t l = 0; l < a.cols(); ++l) {
        const u64 av = a(i, l);
        if (av == 0) continue;
        const u64 as = mod.shoup(av);
        const u64* br = b.row(l);
        for (std::size_t j = j0; j < j1; ++j) acc[j - j0] = mod.add(acc[j - j0], mod.mul_shoup(br[j], av, as));
      }
      std::copy(acc, acc + (j1 - j0), r.row(i) + j0);
    }
  }
  return r;
}

ZqVector mul_t(const Modulus& mod, const IntMatrix& x, const ZqVector& v) {
  check_inner(x.rows(), v.size());
  if (x.max_abs() >= kSmall || x.rows() >= (std::size_t{1} << 24)) return serial::mul_t(mod, x, v);
  ZqVector r(x.cols(), 0);
  const std::size_t nb = (x.cols() + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t j0 = b * kBlock, j1 = std::min(x.cols(), j0 + kBlock);
    i128 acc[kBlock] = {};
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const i128 vi = static_cast<i128>(v[i]);
      if (vi == 0) continue;
      const i64* xr = x.data().data() + i * x.cols();
      for (std::size_t j = j0; j < j1; ++j) acc[j - j0] += vi * xr[j];
    }
    for (std::size_t j = j0; j < j1; ++j) r[j] = mod.reduce128(acc[j - j0]);
  }
  return r;
}

ZqVector mul_t(const Modulus& mod, const ZqMatrix& a, const ZqVector& v) {
  check_inner(a.rows(), v.size());
  ZqVector r(a.cols(), 0);
  const std::size_t nb = (a.cols() + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t j0 = b * kBlock, j1 = std::min(a.cols(), j0 + kBlock);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (v[i] == 0) continue;
      const u64 vs = mod.shoup(v[i]);
      for (std::size_t j = j0; j < j1; ++j) r[j] = mod.add(r[j], mod.mul_shoup(a(i, j), v[i], vs));
    }
  }
  return r;
}

IntMatrix mul(const IntMatrix& x, const IntMatrix& y) {
  check_inner(x.cols(), y.rows());
  IntMatrix r(x.rows(), y.cols());
  bool overflow = false;
#pragma omp parallel for schedule(static) reduction(|| : overflow)
  for (std::size_t i = 0; i < x.rows(); ++i) {
    i64* out = r.data().data() + i * y.cols();
    for (std::size_t l = 0; l < x.cols(); ++l) {
      const i64 xv = x(i, l);
      if (xv == 0) continue;
      const i64* yr = y.data().data() + l * y.cols();
      for (std::size_t j = 0; j < y.cols(); ++j) {
        i64 p;
        if (__builtin_mul_overflow(xv, yr[j], &p) || __builtin_add_overflow(out[j], p, &out[j])) overflow = true;
      }
    }
  }
  if (overflow) throw InternalFailure("integer matrix product overflow");
  return r;
}

}  // namespace par

}  // namespace lpe
