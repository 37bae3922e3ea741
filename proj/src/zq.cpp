#include "lpe/zq.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <ostream>

namespace lpe {

namespace {

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = static_cast<u64>((u128)r * a % m);
    a = static_cast<u64>((u128)a * a % m);
    e >>= 1;
  }
  return r;
}

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>(static_cast<u64>(v) >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw FormatError("truncated matrix data");
  u64 v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<u64>(b[i]) << (8 * i);
  return static_cast<T>(v);
}

void read_dims(std::istream& is, std::size_t& r, std::size_t& c) {
  r = get_le<std::uint32_t>(is);
  c = get_le<std::uint32_t>(is);
  if (r != 0 && c > (std::size_t{1} << 32) / r) throw FormatError("matrix dimensions too large");
}

}  // namespace

bool is_prime(u64 x) {
  if (x < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (x % p == 0) return x == p;
  }
  u64 d = x - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit inputs with these bases.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 y = powmod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool comp = true;
    for (int r = 1; r < s; ++r) {
      y = static_cast<u64>((u128)y * y % x);
      if (y == x - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

u64 next_prime(u64 x) {
  u64 c = x + 1;
  while (!is_prime(c)) ++c;
  return c;
}

unsigned bit_length(u64 x) {
  unsigned k = 0;
  while (k < 64 && (u128(1) << k) < x) ++k;
  return k;
}

Modulus::Modulus(u64 q) : q_(q), k_(0) {
  if (q < 3 || q >= (u64(1) << 62)) throw InvalidArgument("modulus out of range [3, 2^62)");
  if (!is_prime(q)) throw InvalidArgument("modulus " + std::to_string(q) + " is not prime");
  k_ = bit_length(q);
}

u64 Modulus::pow(u64 a, u64 e) const { return powmod(a, e, q_); }

u64 Modulus::inv(u64 a) const {
  if (a % q_ == 0) throw InvalidArgument("zero has no inverse mod q");
  return powmod(a, q_ - 2, q_);
}

ZqVector ZqMatrix::col(std::size_t j) const {
  ZqVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ZqMatrix::set_col(std::size_t j, const ZqVector& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntVector IntMatrix::col(std::size_t j) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void IntMatrix::set_col(std::size_t j, const IntVector& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

i64 IntMatrix::max_abs() const {
  i64 m = 0;
  for (i64 v : a_) m = std::max(m, v < 0 ? -v : v);
  return m;
}

ZqMatrix hconcat(const ZqMatrix& x, const ZqMatrix& y) {
  if (x.rows() != y.rows()) throw InvalidArgument("hconcat: row count mismatch");
  ZqMatrix r(x.rows(), x.cols() + y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::copy(x.row(i), x.row(i) + x.cols(), r.row(i));
    std::copy(y.row(i), y.row(i) + y.cols(), r.row(i) + x.cols());
  }
  return r;
}

static void check_same(const ZqMatrix& x, const ZqMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw InvalidArgument("matrix dimension mismatch");
}

ZqMatrix add(const Modulus& mod, const ZqMatrix& x, const ZqMatrix& y) {
  check_same(x, y);
  ZqMatrix r(x.rows(), x.cols());
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = mod.add(x.data()[i], y.data()[i]);
  return r;
}

ZqMatrix sub(const Modulus& mod, const ZqMatrix& x, const ZqMatrix& y) {
  check_same(x, y);
  ZqMatrix r(x.rows(), x.cols());
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = mod.sub(x.data()[i], y.data()[i]);
  return r;
}

ZqMatrix scale(const Modulus& mod, const ZqMatrix& x, u64 a) {
  ZqMatrix r(x.rows(), x.cols());
  u64 as = mod.shoup(a % mod.q());
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = mod.mul_shoup(x.data()[i], a % mod.q(), as);
  return r;
}

ZqMatrix reduce(const Modulus& mod, const IntMatrix& x) {
  ZqMatrix r(x.rows(), x.cols());
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = mod.reduce(x.data()[i]);
  return r;
}

ZqMatrix gadget_matrix(const Modulus& mod, std::size_t n, std::size_t cols) {
  if (n == 0) throw InvalidArgument("gadget_matrix: n must be positive");
  const std::size_t k = mod.k();
  if (cols == 0) cols = n * k;
  if (cols < n * k) throw InvalidArgument("gadget_matrix: too few columns");
  ZqMatrix g(n, cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = 0; b < k; ++b) g(i, i * k + b) = (u64(1) << b) % mod.q();
  return g;
}

IntMatrix bit_decompose(const Modulus& mod, const ZqMatrix& m, std::size_t rows) {
  const std::size_t k = mod.k(), n = m.rows();
  if (rows == 0) rows = n * k;
  if (rows < n * k) throw InvalidArgument("bit_decompose: output rows below n*k");
  IntMatrix r(rows, m.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      u64 v = m(i, j);
      if (v >= mod.q()) throw InvalidArgument("bit_decompose: non-canonical entry");
      for (std::size_t b = 0; b < k; ++b) r(i * k + b, j) = static_cast<i64>((v >> b) & 1);
    }
  return r;
}

void write_matrix(std::ostream& os, const ZqMatrix& m) {
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(m.rows()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(m.cols()));
  for (u64 v : m.data()) put_le<u64>(os, v);
}

void write_matrix(std::ostream& os, const IntMatrix& m) {
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(m.rows()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(m.cols()));
  for (i64 v : m.data()) put_le<u64>(os, static_cast<u64>(v));
}

ZqMatrix read_zq_matrix(std::istream& is, const Modulus& mod) {
  std::size_t r, c;
  read_dims(is, r, c);
  ZqMatrix m(r, c);
  for (auto& v : m.data()) {
    v = get_le<u64>(is);
    if (v >= mod.q()) throw FormatError("matrix entry not in canonical range");
  }
  return m;
}

IntMatrix read_int_matrix(std::istream& is) {
  std::size_t r, c;
  read_dims(is, r, c);
  IntMatrix m(r, c);
  for (auto& v : m.data()) v = static_cast<i64>(get_le<u64>(is));
  return m;
}

}  // namespace lpe
