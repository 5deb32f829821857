#include "hbsdr/sparse.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace hbsdr {

void RationalSparse::add(int r, int c, const Rational& v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::out_of_range("RationalSparse::add: index out of range");
  if (v.is_zero()) return;
  entries_.push_back({r, c, v});
  finalized_ = false;
}

void RationalSparse::finalize() {
  if (finalized_) return;
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) {
    if (!out.empty() && out.back().r == e.r && out.back().c == e.c)
      out.back().v += e.v;
    else
      out.push_back(e);
  }
  std::erase_if(out, [](const Entry& e) { return e.v.is_zero(); });
  entries_ = std::move(out);
  finalized_ = true;
}

RationalSparse RationalSparse::transposed() const {
  RationalSparse t(cols_, rows_);
  for (const Entry& e : entries_) t.add(e.c, e.r, e.v);
  t.finalize();
  return t;
}

RationalSparse RationalSparse::multiply(const RationalSparse& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("RationalSparse::multiply: shape mismatch");
  // bucket other's entries by row
  std::vector<std::pair<int, int>> row_range(other.rows_, {0, 0});
  {
    int i = 0;
    for (int r = 0; r < other.rows_; ++r) {
      int b = i;
      while (i < static_cast<int>(other.entries_.size()) && other.entries_[i].r == r) ++i;
      row_range[r] = {b, i};
    }
  }
  RationalSparse out(rows_, other.cols_);
  for (const Entry& e : entries_) {
    auto [b, f] = row_range[e.c];
    for (int i = b; i < f; ++i) out.add(e.r, other.entries_[i].c, e.v * other.entries_[i].v);
  }
  out.finalize();
  return out;
}

std::vector<std::uint32_t> RationalSparse::dense_mod(std::uint32_t p) const {
  std::vector<std::uint32_t> a(static_cast<size_t>(rows_) * cols_, 0);
  auto mod_of = [&](const Rational& v) -> std::uint32_t {
    std::int64_t n = v.num() % static_cast<std::int64_t>(p);
    if (n < 0) n += p;
    std::uint64_t d = static_cast<std::uint64_t>(v.den() % static_cast<std::int64_t>(p));
    if (d == 0) throw std::domain_error("dense_mod: denominator divisible by p");
    // inverse via Fermat
    std::uint64_t inv = 1, base = d, e = p - 2;
    while (e) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(n) * inv % p);
  };
  for (const Entry& e : entries_)
    a[static_cast<size_t>(e.r) * cols_ + e.c] = mod_of(e.v);
  return a;
}

std::vector<double> RationalSparse::dense_double() const {
  std::vector<double> a(static_cast<size_t>(rows_) * cols_, 0.0);
  for (const Entry& e : entries_) a[static_cast<size_t>(e.r) * cols_ + e.c] = e.v.to_double();
  return a;
}

int rank_mod_p(std::vector<std::uint32_t>& a, int rows, int cols, std::uint32_t p) {
  int rank = 0;
  int pr = 0;
  for (int pc = 0; pc < cols && pr < rows; ++pc) {
    int piv = -1;
    for (int r = pr; r < rows; ++r)
      if (a[static_cast<size_t>(r) * cols + pc] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != pr)
      for (int c = pc; c < cols; ++c)
        std::swap(a[static_cast<size_t>(piv) * cols + c], a[static_cast<size_t>(pr) * cols + c]);
    std::uint64_t pv = a[static_cast<size_t>(pr) * cols + pc];
    // invert pivot
    std::uint64_t inv = 1, base = pv, e = p - 2;
    while (e) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    for (int r = pr + 1; r < rows; ++r) {
      std::uint64_t f = a[static_cast<size_t>(r) * cols + pc];
      if (f == 0) continue;
      std::uint64_t mult = f * inv % p;
      std::uint32_t* rowr = &a[static_cast<size_t>(r) * cols];
      const std::uint32_t* rowp = &a[static_cast<size_t>(pr) * cols];
      for (int c = pc; c < cols; ++c) {
        std::uint64_t v = rowr[c] + (p - static_cast<std::uint32_t>(mult * rowp[c] % p));
        rowr[c] = static_cast<std::uint32_t>(v >= p ? v - p : v);
      }
    }
    ++pr;
    ++rank;
  }
  return rank;
}

namespace {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
    if (n % d == 0) return n == d;
  }
  // deterministic Miller-Rabin for < 3.2e18 with these bases
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
  };
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
    std::uint64_t x = 1, base = a % n, e = d;
    while (e) {
      if (e & 1) x = mulmod(x, base, n);
      base = mulmod(base, base, n);
      e >>= 1;
    }
    if (x == 1 || x == n - 1) continue;
    bool ok = false;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

std::uint32_t random_prime(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(1u << 30, (1u << 31) - 1);
  for (;;) {
    std::uint32_t c = dist(rng) | 1u;
    if (is_prime_u64(c)) return c;
  }
}

}  // namespace

int rational_rank(const RationalSparse& m, std::uint64_t seed) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::uint32_t p1 = random_prime(rng);
    std::uint32_t p2 = random_prime(rng);
    while (p2 == p1) p2 = random_prime(rng);
    auto a1 = m.dense_mod(p1);
    auto a2 = m.dense_mod(p2);
    int r1 = rank_mod_p(a1, m.rows(), m.cols(), p1);
    int r2 = rank_mod_p(a2, m.rows(), m.cols(), p2);
    if (r1 == r2) return r1;
  }
  throw std::runtime_error("rational_rank: modular ranks kept disagreeing");
}

}  // namespace hbsdr
