#pragma once

#include <cstdint>
#include <vector>

#include "hbsdr/rational.hpp"

namespace hbsdr {

// Sparse matrix with exact rational entries, kept sorted by (row, col) with
// no duplicates and no explicit zeros.
class RationalSparse {
 public:
  RationalSparse() = default;
  RationalSparse(int rows, int cols) : rows_(rows), cols_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  struct Entry {
    int r, c;
    Rational v;
  };
  const std::vector<Entry>& entries() const { return entries_; }

  // Accumulate (duplicates summed on finalize()).
  void add(int r, int c, const Rational& v);
  void finalize();  // sort, combine duplicates, drop zeros

  bool is_zero() const { return entries_.empty(); }
  RationalSparse transposed() const;
  RationalSparse multiply(const RationalSparse& other) const;  // this * other

  // Dense image modulo a prime (row-major value layout: v[r*cols+c]).
  std::vector<std::uint32_t> dense_mod(std::uint32_t p) const;

  std::vector<double> dense_double() const;  // row-major

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Entry> entries_;
  bool finalized_ = true;
};

// Rank of a dense row-major matrix modulo prime p (destroys its argument).
int rank_mod_p(std::vector<std::uint32_t>& a, int rows, int cols, std::uint32_t p);

// Rank of a sparse rational matrix via two independent random ~2^31 primes,
// retried on disagreement (throws after 3 failures).  seed picks the primes.
int rational_rank(const RationalSparse& m, std::uint64_t seed = 12345);

}  // namespace hbsdr
