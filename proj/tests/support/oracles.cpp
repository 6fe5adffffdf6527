#include "oracles.hpp"

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace oracle {

namespace {

std::size_t bareiss_integer(std::vector<std::vector<mpz_class>> a) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        mpz_class v = a[rank][c] * a[r][k] - a[r][c] * a[rank][k];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[r][k] = v;
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

std::size_t bareiss_field(std::vector<std::vector<gbdef::Scalar>> a, const gbdef::Field& f) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, rank = 0;
  gbdef::Scalar prev = f.one();
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
      }
      a[r][c] = f.zero();
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t bareiss_rank(const gbdef::Matrix& m) {
  if (m.field().is_prime()) {
    std::vector<std::vector<gbdef::Scalar>> a;
    for (std::size_t r = 0; r < m.rows(); ++r) a.push_back(m.row(r));
    return bareiss_field(std::move(a), m.field());
  }
  std::vector<std::vector<mpz_class>> a(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class lcm = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).as_rational().get_den_mpz_t());
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const mpq_class& q = m(r, c).as_rational();
      a[r].push_back(q.get_num() * (lcm / q.get_den()));
    }
  }
  return bareiss_integer(std::move(a));
}

std::size_t count_kernel_vectors(const gbdef::Matrix& m) {
  const gbdef::Field& f = m.field();
  std::uint64_t p = f.modulus();
  std::size_t total = 1;
  for (std::size_t c = 0; c < m.cols(); ++c) total *= p;
  std::size_t count = 0;
  gbdef::Vector v(m.cols(), f.zero());
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t x = code;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      v[c] = gbdef::Scalar::residue(x % p, p);
      x /= p;
    }
    bool zero = true;
    for (const auto& s : m.multiply(v)) zero = zero && s.is_zero();
    if (zero) ++count;
  }
  return count;
}

}  // namespace oracle
