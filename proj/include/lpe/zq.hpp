// Exact arithmetic over Z_q, dense matrices, and the gadget matrix.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpe {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InternalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_prime(u64 x);
u64 next_prime(u64 x);  // smallest prime > x
unsigned bit_length(u64 x);  // ceil(log2 x) for x >= 2

class Modulus {
 public:
  explicit Modulus(u64 q);

  u64 q() const { return q_; }
  unsigned k() const { return k_; }

  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + q_ - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : q_ - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>((u128)a * b % q_); }
  // Precomputed quotient for repeated multiplication by b.
  u64 shoup(u64 b) const { return static_cast<u64>(((u128)b << 64) / q_); }
  u64 mul_shoup(u64 a, u64 b, u64 bs) const {
    u64 hi = static_cast<u64>(((u128)a * bs) >> 64);
    u64 r = a * b - hi * q_;
    return r >= q_ ? r - q_ : r;
  }
  u64 pow(u64 a, u64 e) const;
  u64 inv(u64 a) const;  // throws on a == 0

  u64 reduce(i64 x) const {
    i64 r = x % static_cast<i64>(q_);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(q_) : r);
  }
  u64 reduce128(i128 x) const {
    i128 r = x % static_cast<i128>(q_);
    return static_cast<u64>(r < 0 ? r + static_cast<i128>(q_) : r);
  }
  // Representative in (-q/2, q/2].
  i64 centered(u64 a) const {
    return a > q_ / 2 ? static_cast<i64>(a) - static_cast<i64>(q_) : static_cast<i64>(a);
  }

  bool operator==(const Modulus& o) const { return q_ == o.q_; }

 private:
  u64 q_;
  unsigned k_;
};

using ZqVector = std::vector<u64>;
using IntVector = std::vector<i64>;

class ZqMatrix {
 public:
  ZqMatrix() = default;
  ZqMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  u64& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  u64 operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  u64* row(std::size_t i) { return a_.data() + i * cols_; }
  const u64* row(std::size_t i) const { return a_.data() + i * cols_; }
  const std::vector<u64>& data() const { return a_; }
  std::vector<u64>& data() { return a_; }

  ZqVector col(std::size_t j) const;
  void set_col(std::size_t j, const ZqVector& v);

  bool operator==(const ZqMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<u64> a_;
};

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  i64& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  i64 operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<i64>& data() const { return a_; }
  std::vector<i64>& data() { return a_; }

  IntVector col(std::size_t j) const;
  void set_col(std::size_t j, const IntVector& v);
  IntMatrix transpose() const;
  i64 max_abs() const;

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<i64> a_;
};

// Block concatenation [X | Y].
ZqMatrix hconcat(const ZqMatrix& x, const ZqMatrix& y);
ZqMatrix add(const Modulus& mod, const ZqMatrix& x, const ZqMatrix& y);
ZqMatrix sub(const Modulus& mod, const ZqMatrix& x, const ZqMatrix& y);
ZqMatrix scale(const Modulus& mod, const ZqMatrix& x, u64 a);
ZqMatrix reduce(const Modulus& mod, const IntMatrix& x);

// G = I_n (x) (1, 2, ..., 2^{k-1}), padded with zero columns up to `cols`
// (cols = 0 means n*k).
ZqMatrix gadget_matrix(const Modulus& mod, std::size_t n, std::size_t cols = 0);

// G^{-1}: binary decomposition of each column. Output has n*k rows, padded
// with zero rows up to `rows` when rows > n*k.
IntMatrix bit_decompose(const Modulus& mod, const ZqMatrix& m, std::size_t rows = 0);

// Shared binary matrix format: rows u32 LE, cols u32 LE, entries LE row-major.
void write_matrix(std::ostream& os, const ZqMatrix& m);
void write_matrix(std::ostream& os, const IntMatrix& m);
ZqMatrix read_zq_matrix(std::istream& is, const Modulus& mod);
IntMatrix read_int_matrix(std::istream& is);

}  // namespace lpe
