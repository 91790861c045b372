/* Copyright 2026 The mixtensor Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "mixtensor/rank.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>

namespace mixtensor {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::size_t kBareissMaxDim = 40;

// Row-scaled integer copy of a rational matrix: each row is multiplied by
// the lcm of its denominators, which leaves the rank unchanged.
std::vector<BigInt> integer_rows(const Matrix& m) {
  const auto& q = m.values<Rational>();
  std::vector<BigInt> out(q.size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigInt lcm = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q[i * m.cols() + j].get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational& v = q[i * m.cols() + j];
      out[i * m.cols() + j] = v.get_num() * (lcm / v.get_den());
    }
  }
  return out;
}

u64 mulmod_slow(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod_slow(u64 a, u64 e, u64 p) {
  u64 r = 1;
  for (a %= p; e; e >>= 1) {
    if (e & 1) r = mulmod_slow(r, a, p);
    a = mulmod_slow(a, a, p);
  }
  return r;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are deterministic for all n < 2^64.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod_slow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = mulmod_slow(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

// Primes just below 2^62, generated on demand and shared across threads.
u64 nth_prime(std::size_t i) {
  static std::mutex mu;
  static std::vector<u64> primes;
  std::lock_guard<std::mutex> lock(mu);
  u64 candidate = primes.empty() ? (u64{1} << 62) - 1 : primes.back() - 2;
  while (primes.size() <= i) {
    while (!is_prime_u64(candidate)) candidate -= 2;
    primes.push_back(candidate);
    candidate -= 2;
  }
  return primes[i];
}

class Montgomery {
 public:
  explicit Montgomery(u64 p) : p_(p) {
    u64 inv = p;
    for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
    neg_inv_ = ~inv + 1;
    r2_ = static_cast<u64>((static_cast<u128>(1) << 64) % p);
    r2_ = mulmod_slow(r2_, r2_, p);
  }

  u64 reduce(u128 t) const {
    u64 m = static_cast<u64>(t) * neg_inv_;
    u64 r = static_cast<u64>((t + static_cast<u128>(m) * p_) >> 64);
    return r >= p_ ? r - p_ : r;
  }
  u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
  u64 to(u64 a) const { return mul(a, r2_); }
  u64 from(u64 a) const { return reduce(a); }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
  u64 inverse(u64 a_mont) const { return to(powmod_slow(from(a_mont), p_ - 2, p_)); }

 private:
  u64 p_;
  u64 neg_inv_;
  u64 r2_;
};

std::size_t rank_mod_impl(std::vector<u64> a, std::size_t rows, std::size_t cols, const Montgomery& mont) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank) std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols, a.begin() + rank * cols);
    u64* prow = &a[rank * cols];
    u64 inv = mont.inverse(prow[c]);
    for (std::size_t j = c; j < cols; ++j) prow[j] = mont.mul(prow[j], inv);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      u64* row = &a[i * cols];
      u64 f = row[c];
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        if (prow[j] != 0) row[j] = mont.sub(row[j], mont.mul(f, prow[j]));
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<u64> reduce_mod(const std::vector<BigInt>& entries, u64 p, const Montgomery& mont) {
  std::vector<u64> out(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    u64 r = mpz_fdiv_ui(entries[i].get_mpz_t(), p);
    out[i] = r == 0 ? 0 : mont.to(r);
  }
  return out;
}

// log2 of the Euclidean norms of the rows (or columns) of an integer matrix,
// sorted descending, zero vectors dropped.
std::vector<double> log2_norms(const std::vector<BigInt>& a, std::size_t rows, std::size_t cols, bool by_row) {
  std::size_t count = by_row ? rows : cols;
  std::size_t len = by_row ? cols : rows;
  std::vector<double> out;
  BigInt sq;
  for (std::size_t v = 0; v < count; ++v) {
    sq = 0;
    for (std::size_t t = 0; t < len; ++t) {
      const BigInt& x = by_row ? a[v * cols + t] : a[t * cols + v];
      sq += x * x;
    }
    if (sgn(sq) == 0) continue;
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, sq.get_mpz_t());
    out.push_back(0.5 * (std::log2(mant) + static_cast<double>(exp)));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// log2 of a bound on |det| of every k x k minor; infinity-free because callers
// only ask for k not exceeding the number of nonzero rows and columns.
double hadamard_log2(const std::vector<double>& row_norms, const std::vector<double>& col_norms, std::size_t k) {
  double by_row = 0, by_col = 0;
  for (std::size_t i = 0; i < k; ++i) {
    by_row += row_norms[i];
    by_col += col_norms[i];
  }
  return std::min(by_row, by_col);
}

}  // namespace

std::size_t rank_mod_prime(const std::vector<BigInt>& entries, std::size_t rows, std::size_t cols, std::uint64_t prime) {
  if (entries.size() != rows * cols) throw std::invalid_argument("rank_mod_prime: entry count mismatch");
  if (prime < 3 || prime >= (u64{1} << 62) || (prime & 1) == 0) {
    throw std::invalid_argument("rank_mod_prime needs an odd prime below 2^62");
  }
  Montgomery mont(prime);
  return rank_mod_impl(reduce_mod(entries, prime, mont), rows, cols, mont);
}

std::size_t bareiss_rank(const Matrix& m) {
  if (m.kind() != ScalarKind::rational) throw KindMismatchError("exact rank needs rational entries");
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<BigInt> a = integer_rows(m);
  BigInt prev = 1, t;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && sgn(a[piv * cols + c]) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank) std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols, a.begin() + rank * cols);
    const BigInt& p = a[rank * cols + c];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      BigInt& lead = a[i * cols + c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        BigInt& x = a[i * cols + j];
        t = p * x;
        t -= lead * a[rank * cols + j];
        mpz_divexact(x.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      lead = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

std::size_t multimodular_rank(const Matrix& m) {
  if (m.kind() != ScalarKind::rational) throw KindMismatchError("exact rank needs rational entries");
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<BigInt> a = integer_rows(m);
  auto row_norms = log2_norms(a, rows, cols, true);
  auto col_norms = log2_norms(a, rows, cols, false);
  const std::size_t nonzero = std::min(row_norms.size(), col_norms.size());
  if (nonzero == 0) return 0;

  std::size_t best = 0;
  double covered_bits = 0;
  for (std::size_t i = 0;; ++i) {
    u64 p = nth_prime(i);
    Montgomery mont(p);
    best = std::max(best, rank_mod_impl(reduce_mod(a, p, mont), rows, cols, mont));
    covered_bits += std::log2(static_cast<double>(p));
    if (best >= nonzero) return best;
    // One bit of slack absorbs floating error in the norm logarithms.
    if (covered_bits > hadamard_log2(row_norms, col_norms, best + 1) + 1.0) return best;
  }
}

std::size_t numeric_rank(const Matrix& m, double tolerance) {
  if (m.kind() != ScalarKind::f64) throw KindMismatchError("numeric rank needs f64 entries");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const auto& v = m.values<double>();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> map(v.data(), m.rows(),
                                                                                               m.cols());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(map);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tolerance * s(0)) ++count;
  }
  return count;
}

std::size_t matrix_rank(const Matrix& m, RankMode mode) {
  if (mode.kind == RankMode::Kind::numeric) return numeric_rank(m, mode.tolerance);
  if (m.kind() != ScalarKind::rational) throw KindMismatchError("exact rank needs rational entries");
  if (std::min(m.rows(), m.cols()) <= kBareissMaxDim) return bareiss_rank(m);
  return multimodular_rank(m);
}

}  // namespace mixtensor
