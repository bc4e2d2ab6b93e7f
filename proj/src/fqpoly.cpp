#include "freefield/fqpoly.hpp"

#include <algorithm>
#include <stdexcept>

#include "freefield/errors.hpp"

namespace freefield {

namespace {

void require_same_field(const FqPoly& a, const FqPoly& b) {
  if (!a.field || !b.field || !a.field->same_field(*b.field))
    throw std::domain_error("polynomial operands live in different fields");
}

}  // namespace

int fq_deg(const FqPoly& a) { return static_cast<int>(a.coeffs.size()) - 1; }

bool fq_is_zero(const FqPoly& a) { return a.coeffs.empty(); }

bool fq_is_one(const FqPoly& a) {
  return a.coeffs.size() == 1 && a.coeffs[0] == 1;
}

bool fq_is_monic(const FqPoly& a) {
  return !a.coeffs.empty() && a.coeffs.back() == 1;
}

uint64_t fq_lead(const FqPoly& a) {
  if (a.coeffs.empty()) throw std::domain_error("leading term of zero");
  return a.coeffs.back();
}

uint64_t fq_coeff(const FqPoly& a, size_t k) {
  return k < a.coeffs.size() ? a.coeffs[k] : 0;
}

FqPoly fq_zero(std::shared_ptr<const FqCtx> f) { return {std::move(f), {}}; }

FqPoly fq_const(std::shared_ptr<const FqCtx> f, uint64_t c) {
  FqPoly out{std::move(f), {}};
  if (c != 0) out.coeffs.push_back(c);
  return out;
}

FqPoly fq_x(std::shared_ptr<const FqCtx> f) { return {std::move(f), {0, 1}}; }

FqPoly fq_monomial(std::shared_ptr<const FqCtx> f, size_t k, uint64_t c) {
  FqPoly out{std::move(f), {}};
  if (c != 0) {
    out.coeffs.assign(k + 1, 0);
    out.coeffs[k] = c;
  }
  return out;
}

FqPoly& fq_normalize(FqPoly& a) {
  while (!a.coeffs.empty() && a.coeffs.back() == 0) a.coeffs.pop_back();
  return a;
}

FqPoly fq_from_coeffs(std::shared_ptr<const FqCtx> f,
                      std::vector<uint64_t> coeffs) {
  for (uint64_t c : coeffs)
    if (c >= f->q()) throw std::domain_error("coefficient out of field range");
  FqPoly out{std::move(f), std::move(coeffs)};
  return fq_normalize(out);
}

bool fq_equal(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  return a.coeffs == b.coeffs;
}

bool fq_less(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  if (a.coeffs.size() != b.coeffs.size())
    return a.coeffs.size() < b.coeffs.size();
  // Same degree: ascending packed-index order, i.e. the constant digit
  // varies fastest, so high-degree coefficients are compared first.
  for (size_t i = a.coeffs.size(); i-- > 0;)
    if (a.coeffs[i] != b.coeffs[i]) return a.coeffs[i] < b.coeffs[i];
  return false;
}

FqPoly fq_add(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  const FqCtx& F = *a.field;
  FqPoly out{a.field, std::vector<uint64_t>(
                          std::max(a.coeffs.size(), b.coeffs.size()), 0)};
  for (size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] = F.add(fq_coeff(a, i), fq_coeff(b, i));
  return fq_normalize(out);
}

FqPoly fq_neg(const FqPoly& a) {
  FqPoly out = a;
  for (auto& c : out.coeffs) c = a.field->neg(c);
  return out;
}

FqPoly fq_sub(const FqPoly& a, const FqPoly& b) { return fq_add(a, fq_neg(b)); }

FqPoly fq_mul(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  if (fq_is_zero(a) || fq_is_zero(b)) return fq_zero(a.field);
  const FqCtx& F = *a.field;
  FqPoly out{a.field,
             std::vector<uint64_t>(a.coeffs.size() + b.coeffs.size() - 1, 0)};
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs.size(); ++j)
      out.coeffs[i + j] = F.add(out.coeffs[i + j], F.mul(a.coeffs[i], b.coeffs[j]));
  }
  return fq_normalize(out);
}

FqPoly fq_scale(const FqPoly& a, uint64_t c) {
  if (c == 0) return fq_zero(a.field);
  FqPoly out = a;
  for (auto& x : out.coeffs) x = a.field->mul(x, c);
  return fq_normalize(out);
}

std::pair<FqPoly, FqPoly> fq_divmod(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  if (fq_is_zero(b)) throw std::domain_error("polynomial division by zero");
  const FqCtx& F = *a.field;
  if (a.coeffs.size() < b.coeffs.size()) return {fq_zero(a.field), a};
  FqPoly rem = a;
  FqPoly quot{a.field,
              std::vector<uint64_t>(a.coeffs.size() - b.coeffs.size() + 1, 0)};
  uint64_t lead_inv = F.inv(b.coeffs.back());
  for (size_t i = rem.coeffs.size(); i-- >= b.coeffs.size();) {
    uint64_t c = rem.coeffs[i];
    if (c == 0) continue;
    uint64_t f = F.mul(c, lead_inv);
    size_t shift = i - (b.coeffs.size() - 1);
    quot.coeffs[shift] = f;
    for (size_t j = 0; j < b.coeffs.size(); ++j)
      rem.coeffs[shift + j] =
          F.sub(rem.coeffs[shift + j], F.mul(f, b.coeffs[j]));
  }
  return {fq_normalize(quot), fq_normalize(rem)};
}

FqPoly fq_div_exact(const FqPoly& a, const FqPoly& b) {
  auto [q, r] = fq_divmod(a, b);
  if (!fq_is_zero(r))
    throw std::domain_error("exact polynomial division left a remainder");
  return q;
}

FqPoly fq_gcd(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  FqPoly x = a, y = b;
  while (!fq_is_zero(y)) {
    FqPoly r = fq_divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return fq_is_zero(x) ? x : fq_make_monic(x);
}

FqPoly fq_make_monic(const FqPoly& a) {
  if (fq_is_zero(a)) throw std::domain_error("cannot normalize zero to monic");
  if (fq_is_monic(a)) return a;
  return fq_scale(a, a.field->inv(a.coeffs.back()));
}

FqPoly fq_pow(const FqPoly& a, uint64_t e) {
  FqPoly acc = fq_const(a.field, 1), base = a;
  while (e) {
    if (e & 1) acc = fq_mul(acc, base);
    e >>= 1;
    if (e) base = fq_mul(base, base);
  }
  return acc;
}

FqPoly fq_derivative(const FqPoly& a) {
  if (a.coeffs.size() <= 1) return fq_zero(a.field);
  const FqCtx& F = *a.field;
  FqPoly out{a.field, std::vector<uint64_t>(a.coeffs.size() - 1, 0)};
  for (size_t i = 1; i < a.coeffs.size(); ++i)
    out.coeffs[i - 1] = F.mul(a.coeffs[i], F.from_int(static_cast<long long>(i)));
  return fq_normalize(out);
}

uint64_t fq_eval(const FqPoly& a, uint64_t x) {
  const FqCtx& F = *a.field;
  uint64_t acc = 0;
  for (size_t i = a.coeffs.size(); i-- > 0;)
    acc = F.add(F.mul(acc, x), a.coeffs[i]);
  return acc;
}

bool fq_is_irreducible(const FqPoly& a) {
  int d = fq_deg(a);
  if (d <= 0) return false;
  if (d == 1) return true;
  const uint64_t q = a.field->q();
  // Trial-divide by every monic polynomial of degree 1..d/2.
  for (int dd = 1; dd <= d / 2; ++dd) {
    std::vector<uint64_t> c(dd + 1, 0);
    c[dd] = 1;
    while (true) {
      FqPoly cand{a.field, c};
      if (fq_is_zero(fq_divmod(a, cand).second)) return false;
      int i = 0;
      while (i < dd && ++c[i] == q) c[i++] = 0;
      if (i == dd) break;
    }
  }
  return true;
}

std::string fq_to_string(const FqPoly& a, const std::string& var) {
  if (fq_is_zero(a)) return "0";
  auto coeff_str = [&](uint64_t c) -> std::string {
    // Indices below p are the prime-subfield integers and read best unadorned;
    // anything else gets the bracketed digit-vector form the parser accepts.
    if (a.field->is_prime_field() || c < a.field->p()) return std::to_string(c);
    std::string s = "[";
    auto digits = a.field->unpack(c);
    for (size_t i = 0; i < digits.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(digits[i]);
    }
    return s + "]";
  };
  std::string out;
  for (size_t i = a.coeffs.size(); i-- > 0;) {
    uint64_t c = a.coeffs[i];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += coeff_str(c);
    } else {
      if (c != 1) out += coeff_str(c) + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

}  // namespace freefield
