#include "freefield/cycsum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "freefield/errors.hpp"
#include "freefield/eucl.hpp"

namespace freefield::chars {

namespace {

std::mutex g_plan_mutex;
std::map<uint64_t, std::shared_ptr<const CycPlan>> g_plans;

// In-place multiply by (x^d - 1).
void mul_binomial(std::vector<mpz_class>& poly, uint64_t d) {
  std::vector<mpz_class> out(poly.size() + d);
  for (size_t i = 0; i < poly.size(); ++i) {
    out[i + d] += poly[i];
    out[i] -= poly[i];
  }
  poly = std::move(out);
}

// In-place exact division by (x^d - 1); throws IdentityViolation if the
// division leaves a remainder (it cannot for a correct Moebius table).
void div_binomial(std::vector<mpz_class>& poly, uint64_t d) {
  if (poly.size() <= d)
    throw IdentityViolation("cyclotomic_division",
                            "quotient degree underflow while assembling");
  std::vector<mpz_class> quot(poly.size() - d);
  for (size_t i = poly.size(); i-- > d;) {
    mpz_class c = poly[i];
    if (c == 0) continue;
    quot[i - d] += c;
    poly[i] = 0;
    poly[i - d] += c;
  }
  for (size_t i = 0; i < d; ++i)
    if (poly[i] != 0)
      throw IdentityViolation("cyclotomic_division",
                              "inexact division while assembling a "
                              "cyclotomic polynomial");
  poly = std::move(quot);
}

}  // namespace

std::vector<mpz_class> cyclotomic_poly(uint64_t N) {
  if (N == 0) throw std::domain_error("cyclotomic order must be positive");
  if (N > (1ull << 21))
    throw std::domain_error("cyclotomic order too large for exact expansion");
  eucl::RingElem n = eucl::RingElem::integer(
      mpz_class(static_cast<unsigned long>(N)));

  std::vector<uint64_t> mul_d, div_d;
  for (const auto& d : eucl::divisors(n)) {
    int mu = eucl::mobius(eucl::div_exact(n, d));
    if (mu == 0) continue;
    uint64_t dd = mpz_get_ui(d.int_value().get_mpz_t());
    (mu == 1 ? mul_d : div_d).push_back(dd);
  }

  std::vector<mpz_class> poly{1};
  for (uint64_t d : mul_d) mul_binomial(poly, d);
  for (uint64_t d : div_d) div_binomial(poly, d);

  while (!poly.empty() && poly.back() == 0) poly.pop_back();
  mpz_class expected_deg = eucl::euler_phi(n);
  if (poly.empty() || poly.back() != 1 ||
      mpz_class(static_cast<unsigned long>(poly.size() - 1)) != expected_deg)
    throw IdentityViolation(
        "cyclotomic_degree",
        "cyclotomic polynomial of order " + std::to_string(N) +
            " has degree " + std::to_string(poly.empty() ? 0 : poly.size() - 1) +
            ", totient is " + expected_deg.get_str());
  return poly;
}

CycPlan::CycPlan(uint64_t N) : N_(N) {
  phi_ = cyclotomic_poly(N);
  phi_deg_ = phi_.size() - 1;

  // Dense x^j mod Phi_N rows, only when the table stays small and the
  // coefficients stay comfortably inside int64.
  if (N_ > 8192 || N_ * phi_deg_ > (4ull << 20)) return;
  std::vector<int64_t> phi_small(phi_.size());
  for (size_t i = 0; i < phi_.size(); ++i) {
    if (!phi_[i].fits_slong_p()) return;
    phi_small[i] = mpz_get_si(phi_[i].get_mpz_t());
  }

  std::vector<int64_t> rows(N_ * phi_deg_, 0);
  std::vector<int64_t> cur(phi_deg_, 0);
  cur[0] = 1;
  constexpr int64_t kLimit = int64_t(1) << 60;
  for (uint64_t j = 0; j < N_; ++j) {
    std::copy(cur.begin(), cur.end(), rows.begin() + j * phi_deg_);
    // Multiply by x and reduce by the monic Phi_N.
    int64_t carry = cur[phi_deg_ - 1];
    for (size_t i = phi_deg_; i-- > 1;) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (carry != 0) {
      for (size_t i = 0; i < phi_deg_; ++i) {
        cur[i] -= carry * phi_small[i];
        if (cur[i] > kLimit || cur[i] < -kLimit) {
          rows.clear();
          return;  // fall back to big-int reduction
        }
      }
    }
  }
  rows_ = std::move(rows);
}

std::shared_ptr<const CycPlan> CycPlan::get(uint64_t N) {
  std::lock_guard<std::mutex> lk(g_plan_mutex);
  auto it = g_plans.find(N);
  if (it != g_plans.end()) return it->second;
  auto plan = std::shared_ptr<const CycPlan>(new CycPlan(N));
  g_plans.emplace(N, plan);
  return plan;
}

std::vector<mpz_class> CycPlan::reduce(const std::vector<mpz_class>& counts) const {
  if (phi_deg_ == 0)
    throw IdentityViolation("cyclotomic_plan", "degenerate plan");
  std::vector<mpz_class> out(phi_deg_, 0);
  if (has_table()) {
    for (size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] == 0) continue;
      const int64_t* row = rows_.data() + (j % N_) * phi_deg_;
      for (size_t k = 0; k < phi_deg_; ++k)
        if (row[k] != 0) out[k] += counts[j] * row[k];
    }
    return out;
  }
  // Exact long division by the monic Phi_N.
  std::vector<mpz_class> work(N_, 0);
  for (size_t j = 0; j < counts.size(); ++j) work[j % N_] += counts[j];
  for (size_t i = work.size(); i-- > phi_deg_;) {
    if (work[i] == 0) continue;
    mpz_class c = work[i];
    work[i] = 0;
    for (size_t k = 0; k < phi_deg_; ++k) work[i - phi_deg_ + k] -= c * phi_[k];
  }
  for (size_t k = 0; k < phi_deg_; ++k) out[k] = work[k];
  return out;
}

std::vector<int64_t> CycPlan::reduce_i64(const std::vector<int64_t>& counts) const {
  std::vector<int64_t> out(phi_deg_, 0);
  if (has_table()) {
    std::vector<__int128> acc(phi_deg_, 0);
    for (size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] == 0) continue;
      const int64_t* row = rows_.data() + (j % N_) * phi_deg_;
      for (size_t k = 0; k < phi_deg_; ++k)
        if (row[k] != 0) acc[k] += static_cast<__int128>(counts[j]) * row[k];
    }
    for (size_t k = 0; k < phi_deg_; ++k) {
      if (acc[k] > std::numeric_limits<int64_t>::max() ||
          acc[k] < std::numeric_limits<int64_t>::min())
        throw std::overflow_error("cyclotomic reduction overflow");
      out[k] = static_cast<int64_t>(acc[k]);
    }
    return out;
  }
  std::vector<mpz_class> big(counts.size());
  for (size_t j = 0; j < counts.size(); ++j) big[j] = counts[j];
  auto reduced = reduce(big);
  for (size_t k = 0; k < phi_deg_; ++k) {
    if (!reduced[k].fits_slong_p())
      throw std::overflow_error("cyclotomic reduction overflow");
    out[k] = mpz_get_si(reduced[k].get_mpz_t());
  }
  return out;
}

CycSum::CycSum(uint64_t N) : N_(N), counts_(N, 0) {
  if (N == 0) throw std::domain_error("root order must be positive");
}

CycSum CycSum::root(uint64_t N, uint64_t exponent) {
  CycSum s(N);
  s.counts_[exponent % N] = 1;
  return s;
}

CycSum CycSum::constant(uint64_t N, mpz_class c) {
  CycSum s(N);
  s.counts_[0] = std::move(c);
  return s;
}

void CycSum::add_root(uint64_t exponent, const mpz_class& weight) {
  counts_[exponent % N_] += weight;
}

namespace {

// Lift a weight vector from order N to order L (N | L).
std::vector<mpz_class> lift_counts(const std::vector<mpz_class>& counts,
                                   uint64_t N, uint64_t L) {
  std::vector<mpz_class> out(L, 0);
  const uint64_t s = L / N;
  for (uint64_t j = 0; j < N; ++j)
    if (counts[j] != 0) out[j * s] = counts[j];
  return out;
}

}  // namespace

CycSum& CycSum::operator+=(const CycSum& o) {
  if (o.N_ == N_) {
    for (uint64_t j = 0; j < N_; ++j) counts_[j] += o.counts_[j];
    return *this;
  }
  uint64_t L = std::lcm(N_, o.N_);
  auto mine = lift_counts(counts_, N_, L);
  auto theirs = lift_counts(o.counts_, o.N_, L);
  for (uint64_t j = 0; j < L; ++j) mine[j] += theirs[j];
  N_ = L;
  counts_ = std::move(mine);
  return *this;
}

CycSum& CycSum::operator-=(const CycSum& o) {
  CycSum neg = o;
  neg.scale(-1);
  return *this += neg;
}

CycSum operator*(const CycSum& a, const CycSum& b) {
  uint64_t L = std::lcm(a.N_, b.N_);
  auto ca = lift_counts(a.counts_, a.N_, L);
  auto cb = lift_counts(b.counts_, b.N_, L);
  CycSum out(L);
  for (uint64_t i = 0; i < L; ++i) {
    if (ca[i] == 0) continue;
    for (uint64_t j = 0; j < L; ++j) {
      if (cb[j] == 0) continue;
      out.counts_[(i + j) % L] += ca[i] * cb[j];
    }
  }
  return out;
}

CycSum CycSum::times_root(uint64_t exponent) const {
  CycSum out(N_);
  for (uint64_t j = 0; j < N_; ++j)
    if (counts_[j] != 0) out.counts_[(j + exponent) % N_] = counts_[j];
  return out;
}

void CycSum::scale(const mpz_class& c) {
  for (auto& w : counts_) w *= c;
}

std::vector<mpz_class> CycSum::reduced() const {
  return CycPlan::get(N_)->reduce(counts_);
}

bool CycSum::is_zero_after_reduction() const {
  // Compress onto the smallest cyclotomic subfield containing the support:
  // if every supported exponent shares a factor g with N, the value lives in
  // Q(zeta_{N/g}) and is reduced there instead.
  uint64_t g = N_;
  for (uint64_t j = 0; j < N_; ++j) {
    if (counts_[j] == 0) continue;
    g = std::gcd(g, j);
    if (g == 1) break;
  }
  bool empty = true;
  for (uint64_t j = 0; j < N_; ++j)
    if (counts_[j] != 0) {
      empty = false;
      break;
    }
  if (empty) return true;

  const uint64_t Np = N_ / g;
  std::vector<mpz_class> compressed(Np, 0);
  for (uint64_t j = 0; j < N_; ++j)
    if (counts_[j] != 0) compressed[(j / g) % Np] += counts_[j];
  auto red = CycPlan::get(Np)->reduce(compressed);
  for (const auto& c : red)
    if (c != 0) return false;
  return true;
}

bool CycSum::eq(const CycSum& o) const {
  CycSum diff = *this;
  diff -= o;
  return diff.is_zero_after_reduction();
}

bool CycSum::eq_rational(const mpq_class& c) const {
  CycSum scaled = *this;
  scaled.scale(c.get_den());
  scaled.counts_[0] -= c.get_num();
  return scaled.is_zero_after_reduction();
}

bool CycSum::as_integer(mpz_class& out) const {
  uint64_t g = N_;
  bool empty = true;
  for (uint64_t j = 0; j < N_; ++j) {
    if (counts_[j] == 0) continue;
    empty = false;
    g = std::gcd(g, j);
  }
  if (empty) {
    out = 0;
    return true;
  }
  const uint64_t Np = N_ / g;
  std::vector<mpz_class> compressed(Np, 0);
  for (uint64_t j = 0; j < N_; ++j)
    if (counts_[j] != 0) compressed[(j / g) % Np] += counts_[j];
  auto red = CycPlan::get(Np)->reduce(compressed);
  for (size_t k = 1; k < red.size(); ++k)
    if (red[k] != 0) return false;
  out = red[0];
  return true;
}

double CycSum::abs_value() const {
  std::complex<double> acc(0.0, 0.0);
  const double twopi = 2.0 * 3.141592653589793238462643383279502884;
  for (uint64_t j = 0; j < N_; ++j) {
    if (counts_[j] == 0) continue;
    double w = counts_[j].get_d();
    double ang = twopi * static_cast<double>(j) / static_cast<double>(N_);
    acc += w * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return std::abs(acc);
}

bool cyc_eq_rational(const CycSum& s, const mpq_class& c) {
  return s.eq_rational(c);
}

}  // namespace freefield::chars
