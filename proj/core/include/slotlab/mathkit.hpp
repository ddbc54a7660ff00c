#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

// Iterated-log arithmetic and exact subset rank/unrank codecs.
// Conventions: all logs are base 2; log^(0) n = n; log*(n) is the least k
// with log^(k) n <= 1.  All functions are pure and thread-safe.

namespace slotlab {

// Tower of iterated logs of n: values[l] = log^(l) n for l = 0..log*(n).
// Every stored value is positive; the last is <= 1.
struct IterLogTable {
  uint64_t n = 0;
  std::vector<double> values;
};

IterLogTable make_iter_log_table(uint64_t n);

// log^(level) n.  level = 0 returns n.  Throws std::invalid_argument when
// n < 1 or level > log*(n) + 1 (the value would be <= 0 or undefined).
double iter_log(uint64_t n, unsigned level);

// Least k with log^(k) n <= 1.  log_star(1) = 0.  Requires n >= 1.
unsigned log_star(uint64_t n);

// log2 C(n, b) in bits via log-gamma; relative error <= 1e-9 at the scales
// this library uses (n <= 2^20).  Requires b <= n.
double log_binomial(uint64_t n, uint64_t b);

// Exact ceil(log2 C(n, b)).  Uses exact integer arithmetic for small n and
// interval evaluation with escalating precision above that, so the result
// is always the true ceiling.  Requires b <= n.
uint64_t ceil_log2_binomial(uint64_t n, uint64_t b);

// Smallest w with 2^w >= x; 0 for x <= 1.  This is the bit width used for
// "ceil(log2 U)"-style charges throughout the library.
unsigned ceil_log2_u64(uint64_t x);

// Lexicographic rank of a sorted b-subset of [0, universe_size) among all
// b-subsets ordered by their sorted index tuples.  rank is in [0, C(n, b)).
struct SubsetRank {
  uint64_t universe_size = 0;
  uint64_t subset_size = 0;
  mpz_class rank = 0;

  // Exact bit cost of storing the rank: ceil(log2 C(universe, size)).
  uint64_t bit_length() const;
};

// Requires slots strictly increasing, every element < universe_size.
// Throws std::invalid_argument otherwise.
SubsetRank subset_rank(const std::vector<uint64_t>& slots, uint64_t universe_size);

// Inverse of subset_rank.  Throws when rank >= C(universe, size).
std::vector<uint64_t> subset_unrank(const SubsetRank& r);

// Exact C(n, b) for callers that need the integer itself (tests, codecs).
mpz_class binomial_exact(uint64_t n, uint64_t b);

}  // namespace slotlab
