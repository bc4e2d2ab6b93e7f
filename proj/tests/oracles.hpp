#pragma once

// Reference implementations written straight from the definitions and kept
// deliberately naive.  They share no code with the library, so the tests can
// use them as independent oracles.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

inline std::vector<long> divisors_int(long n) {
  std::vector<long> out;
  for (long d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline int mobius_int(long n) {
  int k = 0;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      ++k;
    }
  if (n > 1) ++k;
  return k % 2 == 0 ? 1 : -1;
}

inline long phi_int(long n) {
  long r = n;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      r -= r / p;
      while (n % p == 0) n /= p;
    }
  if (n > 1) r -= r / n;
  return r;
}

inline long squarefree_divisor_count_int(long n) {
  long c = 0;
  for (long d : divisors_int(n))
    if (mobius_int(d) != 0) ++c;
  return c;
}

/// x_(y) = x / gcd(x, y).
inline long reduce_int(long x, long y) { return x / std::gcd(x, y); }

/// The divisor sum  sum_{d | r} |mu(d_(n))| phi(d) / phi(d_(n)).
inline mpq_class T_sum_int(long r, long n) {
  mpq_class s = 0;
  for (long d : divisors_int(r)) {
    long dn = reduce_int(d, n);
    if (mobius_int(dn) == 0) continue;
    mpq_class term(phi_int(d), phi_int(dn));
    term.canonicalize();
    s += term;
  }
  return s;
}

/// Closed form  gcd(n, r) * 2^(distinct primes of gcd(r, r_(n))).
inline long T_closed_int(long r, long n) {
  long alpha = std::gcd(n, r);
  long beta = std::gcd(r, reduce_int(r, n));
  return alpha * squarefree_divisor_count_int(beta);
}

}  // namespace oracle
