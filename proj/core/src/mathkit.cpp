#include <slotlab/mathkit.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include <mpfr.h>

namespace slotlab {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("mathkit: " + msg);
}

}  // namespace

IterLogTable make_iter_log_table(uint64_t n) {
  if (n < 1) fail("iter_log table requires n >= 1");
  IterLogTable t;
  t.n = n;
  double x = double(n);
  t.values.push_back(x);
  while (x > 1.0) {
    x = std::log2(x);
    t.values.push_back(x);
  }
  return t;
}

unsigned log_star(uint64_t n) {
  if (n < 1) fail("log_star requires n >= 1");
  return unsigned(make_iter_log_table(n).values.size() - 1);
}

double iter_log(uint64_t n, unsigned level) {
  if (n < 1) fail("iter_log requires n >= 1");
  IterLogTable t = make_iter_log_table(n);
  unsigned ls = unsigned(t.values.size() - 1);
  if (level <= ls) return t.values[level];
  if (level == ls + 1) return std::log2(t.values[ls]);
  fail("iter_log level " + std::to_string(level) + " exceeds log*(n)+1 = " +
       std::to_string(ls + 1));
}

double log_binomial(uint64_t n, uint64_t b) {
  if (b > n) fail("log_binomial requires b <= n");
  uint64_t k = std::min(b, n - b);
  if (k == 0) return 0.0;
  if (k <= 16) {
    // Direct summation avoids the cancellation in the lgamma difference.
    double s = 0.0;
    for (uint64_t i = 0; i < k; ++i)
      s += std::log2(double(n - i)) - std::log2(double(i + 1));
    return s;
  }
  double ln = std::lgamma(double(n) + 1.0) - std::lgamma(double(b) + 1.0) -
              std::lgamma(double(n - b) + 1.0);
  return ln / std::log(2.0);
}

unsigned ceil_log2_u64(uint64_t x) {
  if (x <= 1) return 0;
  unsigned w = 0;
  uint64_t v = x - 1;
  while (v) {
    v >>= 1;
    ++w;
  }
  return w;
}

mpz_class binomial_exact(uint64_t n, uint64_t b) {
  if (b > n) fail("binomial requires b <= n");
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, b);
  return out;
}

namespace {

uint64_t ceil_log2_mpz(const mpz_class& v) {
  if (v <= 1) return 0;
  size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);  // floor(log2)+1
  if (mpz_popcount(v.get_mpz_t()) == 1) return bits - 1;
  return bits;
}

// Enclosure of log2 C(n, b) at the given precision; returns true and the
// shared ceiling when both interval ends round up to the same integer.
bool try_ceil_via_mpfr(uint64_t n, uint64_t b, mpfr_prec_t prec,
                       uint64_t* out) {
  mpfr_t gn, gb, gnb, lo, hi, ln2lo, ln2hi, t;
  mpfr_inits2(prec, gn, gb, gnb, lo, hi, ln2lo, ln2hi, t, (mpfr_ptr) nullptr);

  int sign = 0;
  auto lngamma_dir = [&](mpfr_t dst, uint64_t arg, mpfr_rnd_t rnd) {
    mpfr_set_ui(t, arg, MPFR_RNDN);  // exact: arg + 1 fits the precision
    mpfr_add_ui(t, t, 1, MPFR_RNDN);
    mpfr_lgamma(dst, &sign, t, rnd);
  };

  // Lower end: numerator rounded down at each step, divide by ln2 from above.
  lngamma_dir(gn, n, MPFR_RNDD);
  lngamma_dir(gb, b, MPFR_RNDU);
  lngamma_dir(gnb, n - b, MPFR_RNDU);
  mpfr_sub(lo, gn, gb, MPFR_RNDD);
  mpfr_sub(lo, lo, gnb, MPFR_RNDD);
  mpfr_const_log2(ln2hi, MPFR_RNDU);
  mpfr_div(lo, lo, ln2hi, MPFR_RNDD);

  // Upper end: everything in the opposite direction.
  lngamma_dir(gn, n, MPFR_RNDU);
  lngamma_dir(gb, b, MPFR_RNDD);
  lngamma_dir(gnb, n - b, MPFR_RNDD);
  mpfr_sub(hi, gn, gb, MPFR_RNDU);
  mpfr_sub(hi, hi, gnb, MPFR_RNDU);
  mpfr_const_log2(ln2lo, MPFR_RNDD);
  mpfr_div(hi, hi, ln2lo, MPFR_RNDU);

  mpfr_ceil(lo, lo);
  mpfr_ceil(hi, hi);
  bool ok = mpfr_cmp(lo, hi) == 0 && mpfr_fits_ulong_p(lo, MPFR_RNDN);
  if (ok) *out = mpfr_get_ui(lo, MPFR_RNDN);

  mpfr_clears(gn, gb, gnb, lo, hi, ln2lo, ln2hi, t, (mpfr_ptr) nullptr);
  return ok;
}

}  // namespace

uint64_t ceil_log2_binomial(uint64_t n, uint64_t b) {
  if (b > n) fail("ceil_log2_binomial requires b <= n");
  uint64_t k = std::min(b, n - b);
  if (k == 0) return 0;
  if (k == 1) return ceil_log2_u64(n);
  if (n <= 4096) return ceil_log2_mpz(binomial_exact(n, b));
  for (mpfr_prec_t prec = 128; prec <= 4096; prec *= 2) {
    uint64_t out = 0;
    if (try_ceil_via_mpfr(n, b, prec, &out)) return out;
  }
  // log2 C is (astronomically unlikely or exactly) on an integer boundary.
  return ceil_log2_mpz(binomial_exact(n, b));
}

uint64_t SubsetRank::bit_length() const {
  return ceil_log2_binomial(universe_size, subset_size);
}

SubsetRank subset_rank(const std::vector<uint64_t>& slots,
                       uint64_t universe_size) {
  const uint64_t n = universe_size;
  const uint64_t b = slots.size();
  if (b > n) fail("subset larger than universe");
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] >= n) fail("subset element out of range");
    if (i > 0 && slots[i] <= slots[i - 1]) fail("subset not strictly increasing");
  }
  SubsetRank out{n, b, 0};
  if (b == 0) return out;

  // Scan the universe keeping cur = C(n-1-v, r-1), where r members remain.
  uint64_t r = b;
  mpz_class cur = binomial_exact(n - 1, b - 1);
  size_t next = 0;
  for (uint64_t v = 0; v < n && r > 0; ++v) {
    uint64_t m = n - 1 - v;
    if (slots[next] == v) {
      ++next;
      uint64_t old_r = r--;
      if (r == 0) break;
      // C(m-1, r-1) = C(m, old_r-1) * (old_r-1) / m
      cur *= old_r - 1;
      mpz_divexact_ui(cur.get_mpz_t(), cur.get_mpz_t(), m);
    } else {
      out.rank += cur;
      // C(m-1, r-1) = C(m, r-1) * (m-r+1) / m
      cur *= m - r + 1;
      mpz_divexact_ui(cur.get_mpz_t(), cur.get_mpz_t(), m);
    }
  }
  return out;
}

std::vector<uint64_t> subset_unrank(const SubsetRank& r) {
  const uint64_t n = r.universe_size;
  const uint64_t b = r.subset_size;
  if (b > n) fail("subset larger than universe");
  if (r.rank < 0 || r.rank >= binomial_exact(n, b))
    fail("subset rank out of range");
  std::vector<uint64_t> out;
  if (b == 0) return out;
  out.reserve(b);

  uint64_t rem = b;
  mpz_class rank = r.rank;
  mpz_class cur = binomial_exact(n - 1, b - 1);
  for (uint64_t v = 0; v < n && rem > 0; ++v) {
    uint64_t m = n - 1 - v;
    if (rank < cur) {
      out.push_back(v);
      uint64_t old_rem = rem--;
      if (rem == 0) break;
      cur *= old_rem - 1;
      mpz_divexact_ui(cur.get_mpz_t(), cur.get_mpz_t(), m);
    } else {
      rank -= cur;
      cur *= m - rem + 1;
      mpz_divexact_ui(cur.get_mpz_t(), cur.get_mpz_t(), m);
    }
  }
  return out;
}

}  // namespace slotlab
