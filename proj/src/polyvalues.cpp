#include "freefield/polyvalues.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "freefield/addmod.hpp"
#include "freefield/errors.hpp"
#include "freefield/modfree.hpp"

namespace freefield::polyvalues {

namespace {

constexpr const char* kMultiplierNote =
    "multipliers enumerate every nonzero residue c mod t with gcd(c, t) = 1, "
    "constants included; a summand whose divisor is one is omitted";

void require_ext_poly(const std::shared_ptr<const gf::FieldCtx>& field,
                      const FqPoly& P, const char* what) {
  if (!P.field || !P.field->same_field(*field->ext_field()))
    throw std::domain_error(std::string(what) +
                            " must live over the extension field");
}

void require_degree_cap(const FqPoly& P, uint32_t cap, const char* what) {
  int d = fq_deg(P);
  if (d > static_cast<int>(cap))
    throw CapExceeded(static_cast<uint64_t>(d), cap);
  (void)what;
}

void require_base_divisor(const std::shared_ptr<const gf::FieldCtx>& field,
                          const eucl::RingElem& f, const char* what) {
  if (!f.is_poly() || f.is_zero())
    throw std::domain_error(std::string(what) +
                            " must be a nonzero polynomial ring element");
  if (!f.poly_value().field->same_field(*field->base_field()))
    throw std::domain_error(std::string(what) +
                            " must live over the base field of the tower");
  if (!eucl::divides(f, field->splitting_modulus()))
    throw std::domain_error(std::string(what) +
                            " must divide x^m - 1 over the base field");
}

/// alpha^(q^i) via the cached q-power Frobenius.
uint64_t frob_iter(const std::shared_ptr<const gf::FieldCtx>& field,
                   uint64_t idx, uint32_t i) {
  uint32_t r = i % field->ext_degree();
  for (uint32_t j = 0; j < r; ++j) idx = field->frobenius_q_idx(idx);
  return idx;
}

/// The image sum_i A_i * h^(q^i) of h under the additive operator attached
/// to A (A over the base field, h over the extension).
FqPoly linearized_image(const std::shared_ptr<const gf::FieldCtx>& field,
                        const FqPoly& A, const FqPoly& h) {
  const auto& ext = field->ext_field();
  FqPoly acc = fq_zero(ext);
  FqPoly hp = h;  // h^(q^i), advanced once per digit of A
  for (size_t i = 0; i < A.coeffs.size(); ++i) {
    if (i > 0) hp = fq_pow(hp, field->q());
    if (A.coeffs[i] != 0) {
      // base-field digits embed into the extension as-is (constant digit)
      acc = fq_add(acc, fq_scale(hp, A.coeffs[i]));
    }
  }
  return acc;
}

/// All multiplier residues for a divisor t: nonzero residues mod t coprime
/// to t, ascending.  For t = 1 the summand is omitted entirely, represented
/// by a single zero polynomial.
std::vector<FqPoly> multiplier_residues(
    const std::shared_ptr<const gf::FieldCtx>& field,
    const eucl::RingElem& t) {
  const auto& base = field->base_field();
  if (t.is_one()) return {fq_zero(base)};
  uint32_t d = static_cast<uint32_t>(fq_deg(t.poly_value()));
  uint64_t total = 1;
  for (uint32_t i = 0; i < d; ++i) {
    if (total > (1ull << 40) / base->q())
      throw CapExceeded(1ull << 40, 1ull << 40);
    total *= base->q();
  }
  std::vector<FqPoly> out;
  std::vector<uint64_t> digits(d, 0);
  for (uint64_t v = 1; v < total; ++v) {
    // ascending packed index: constant digit fastest
    uint64_t w = v;
    for (uint32_t i = 0; i < d; ++i) {
      digits[i] = w % base->q();
      w /= base->q();
    }
    FqPoly c = fq_from_coeffs(base, digits);
    if (fq_is_one(fq_gcd(c, t.poly_value()))) out.push_back(c);
  }
  return out;
}

std::string poly_str(const FqPoly& P) { return fq_to_string(P); }

/// Upper limit on |K_f| * |K_F| for the exhaustive degeneracy scan.
constexpr uint64_t kDegeneracyScanLimit = uint64_t{1} << 14;

/// Carrier elements beta whose attached character chi_beta(v) =
/// psi_can(beta * v) is trivial on the image of the operator of f;
/// equivalently the kernel of the adjoint operator, whose source has the
/// coefficients of f reversed modulo x^m - 1.  Exactly q^(deg f) elements.
std::vector<uint64_t> character_kernel(
    const std::shared_ptr<const gf::FieldCtx>& field,
    const std::shared_ptr<const modfree::ModuleCtx>& module,
    const eucl::RingElem& f) {
  const uint32_t m = field->ext_degree();
  const auto& base = field->base_field();
  const FqPoly& fc = f.poly_value();
  std::vector<uint64_t> rev(m, 0);
  for (size_t i = 0; i < fc.coeffs.size(); ++i) {
    size_t j = (m - (i % m)) % m;
    rev[j] = base->add(rev[j], fc.coeffs[i]);
  }
  if (std::all_of(rev.begin(), rev.end(),
                  [](uint64_t c) { return c == 0; }))
    return module->carrier();  // f acts as zero, so every beta qualifies
  eucl::RingElem adj = eucl::RingElem::poly(fq_from_coeffs(base, rev));
  std::vector<uint64_t> out;
  for (uint64_t b : module->carrier())
    if (addmod::apply_linearized(adj, gf::make_elem(field, b)).idx == 0)
      out.push_back(b);
  return out;
}

}  // namespace

std::optional<std::pair<FqPoly, uint64_t>> linearized_form_test(
    const std::shared_ptr<const gf::FieldCtx>& field, const FqPoly& G,
    const eucl::RingElem& l) {
  require_ext_poly(field, G, "form-test argument");
  require_base_divisor(field, l, "linearized operator source");
  if (l.is_one()) return std::make_pair(G, uint64_t{0});

  const auto& ext = field->ext_field();
  const FqPoly& lp = l.poly_value();
  uint32_t dl = static_cast<uint32_t>(fq_deg(lp));
  // q^(deg l), saturating: once it exceeds any representable degree no
  // non-constant polynomial can match.
  uint64_t qd = 1;
  bool huge = false;
  for (uint32_t i = 0; i < dl; ++i) {
    if (qd > (1ull << 60) / field->q()) {
      huge = true;
      break;
    }
    qd *= field->q();
  }

  uint32_t m = field->ext_degree();
  uint32_t back = (m - (dl % m)) % m;  // inverse of the q^(deg l) power map

  FqPoly W = G;
  FqPoly g = fq_zero(ext);
  while (fq_deg(W) > 0) {
    uint64_t e = static_cast<uint64_t>(fq_deg(W));
    if (huge || e % qd != 0) return std::nullopt;
    uint64_t e1 = e / qd;
    uint64_t a = fq_lead(W);
    uint64_t b = frob_iter(field, a, back);
    if (frob_iter(field, b, dl) != a)
      throw IdentityViolation("frobenius_root",
                              "power map failed to invert on " +
                                  std::to_string(a));
    // subtract the full image of b x^(e1) under the operator of l
    std::vector<uint64_t> sub(e + 1, 0);
    uint64_t bq = b;
    uint64_t me = e1;
    for (uint32_t i = 0; i <= dl; ++i) {
      if (lp.coeffs[i] != 0)
        sub[me] = ext->add(sub[me], ext->scale(lp.coeffs[i], bq));
      if (i < dl) {
        bq = field->frobenius_q_idx(bq);
        me *= field->q();  // stays <= e1 * q^dl = e
      }
    }
    W = fq_sub(W, fq_from_coeffs(ext, sub));
    if (fq_deg(W) >= static_cast<int>(e))
      throw IdentityViolation("linearized_peel",
                              "leading term failed to cancel at degree " +
                                  std::to_string(e));
    g = fq_add(g, fq_monomial(ext, static_cast<size_t>(e1), b));
  }
  uint64_t k = W.coeffs.empty() ? 0 : W.coeffs[0];
  return std::make_pair(g, k);
}

bool artin_schreier_test(const std::shared_ptr<const gf::FieldCtx>& field,
                         const FqPoly& G) {
  require_ext_poly(field, G, "form-test argument");
  const auto& ext = field->ext_field();
  uint64_t p = field->p();
  FqPoly W = G;
  while (fq_deg(W) > 0) {
    uint64_t e = static_cast<uint64_t>(fq_deg(W));
    if (e % p != 0) return false;
    uint64_t e1 = e / p;
    uint64_t a = fq_lead(W);
    uint64_t b = field->pth_root_idx(a);
    // peel (b x^(e1))^p - (b x^(e1)) = a x^e - b x^(e1)
    W = fq_sub(W, fq_monomial(ext, static_cast<size_t>(e), a));
    W = fq_add(W, fq_monomial(ext, static_cast<size_t>(e1), b));
    if (fq_deg(W) >= static_cast<int>(e))
      throw IdentityViolation("artin_schreier_peel",
                              "leading term failed to cancel at degree " +
                                  std::to_string(e));
  }
  return true;
}

IndependenceResult is_independent(
    const std::shared_ptr<const gf::FieldCtx>& field, const FqPoly& h,
    const FqPoly& H, const eucl::RingElem& f, const eucl::RingElem& F,
    uint32_t degree_cap) {
  require_ext_poly(field, h, "first pair member");
  require_ext_poly(field, H, "second pair member");
  if (fq_deg(h) < 1 || fq_deg(H) < 1)
    throw std::domain_error("independence requires non-constant polynomials");
  require_degree_cap(h, degree_cap, "h");
  require_degree_cap(H, degree_cap, "H");
  require_base_divisor(field, f, "first freeness divisor");
  require_base_divisor(field, F, "second freeness divisor");

  const auto& ext = field->ext_field();
  auto divs_f = eucl::divisors(f);
  auto divs_F = eucl::divisors(F);

  // memo for operator images, keyed by (side, operator coefficients)
  std::map<std::pair<int, std::vector<uint64_t>>, FqPoly> images;
  auto image_of = [&](int side, const FqPoly& A) -> const FqPoly& {
    auto key = std::make_pair(side, A.coeffs);
    auto it = images.find(key);
    if (it == images.end())
      it = images.emplace(key, linearized_image(field, A, side == 0 ? h : H))
               .first;
    return it->second;
  };

  for (const auto& t : divs_f) {
    auto cs = multiplier_residues(field, t);
    for (const auto& T : divs_F) {
      eucl::RingElem l = eucl::lcm(t, T);
      if (l.is_one()) continue;
      FqPoly l_over_t =
          t.is_one() ? FqPoly{} : eucl::div_exact(l, t).poly_value();
      FqPoly l_over_T =
          T.is_one() ? FqPoly{} : eucl::div_exact(l, T).poly_value();
      auto Cs = multiplier_residues(field, T);
      for (const auto& c : cs) {
        for (const auto& C : Cs) {
          FqPoly combined = fq_zero(ext);
          if (!t.is_one())
            combined = fq_add(combined, image_of(0, fq_mul(l_over_t, c)));
          if (!T.is_one())
            combined = fq_add(combined, image_of(1, fq_mul(l_over_T, C)));
          auto got = linearized_form_test(field, combined, l);
          if (got) {
            DependenceWitness w;
            w.t = t;
            w.T = T;
            w.l = l;
            w.c = c;
            w.C = C;
            w.g = got->first;
            w.k = got->second;
            w.note = kMultiplierNote;
            return IndependenceResult{false, std::move(w)};
          }
        }
      }
    }
  }
  return IndependenceResult{true, std::nullopt};
}

mpz_class count_free_pairs(
    const std::shared_ptr<const modfree::ModuleCtx>& module, const FqPoly& h,
    const FqPoly& H, const eucl::RingElem& f, const eucl::RingElem& r,
    const eucl::RingElem& F, const eucl::RingElem& R, uint32_t degree_cap) {
  if (module->kind() != modfree::ModuleCtx::Kind::Additive)
    throw std::domain_error("pair counting works on the additive module");
  const auto& field = module->field();
  require_ext_poly(field, h, "first pair member");
  require_ext_poly(field, H, "second pair member");
  require_degree_cap(h, degree_cap, "h");
  require_degree_cap(H, degree_cap, "H");
  auto q1 = modfree::make_query(module, f, r);
  auto q2 = modfree::make_query(module, F, R);
  mpz_class count = 0;
  for (uint64_t theta : module->carrier()) {
    uint64_t a = fq_eval(h, theta);
    if (!modfree::is_free_gcd(module, a, q1)) continue;
    uint64_t b = fq_eval(H, theta);
    if (modfree::is_free_gcd(module, b, q2)) ++count;
  }
  return count;
}

uint64_t distinct_roots(const std::shared_ptr<const gf::FieldCtx>& field,
                        const FqPoly& P) {
  require_ext_poly(field, P, "root-count argument");
  if (fq_is_zero(P)) throw std::domain_error("root count of zero polynomial");
  if (fq_deg(P) == 0) return 0;
  FqPoly Pm = fq_make_monic(P);
  FqPoly Pd = fq_derivative(Pm);
  if (fq_is_zero(Pd)) {
    // every exponent is a multiple of p; the coefficient-wise p-th root has
    // the same root set (x -> x^p permutes the splitting field)
    uint64_t p = field->p();
    size_t n = static_cast<size_t>(fq_deg(Pm)) / p;
    std::vector<uint64_t> t(n + 1, 0);
    for (size_t i = 0; i <= n; ++i)
      t[i] = field->pth_root_idx(fq_coeff(Pm, i * p));
    return distinct_roots(field, fq_from_coeffs(P.field, t));
  }
  FqPoly G = fq_gcd(Pm, Pd);
  FqPoly sep = fq_div_exact(Pm, G);  // separable; roots of multiplicity != 0 mod p
  FqPoly rest = G;
  for (;;) {
    FqPoly g = fq_gcd(rest, sep);
    if (fq_deg(g) < 1) break;
    rest = fq_div_exact(rest, g);
  }
  uint64_t extra = fq_deg(rest) > 0 ? distinct_roots(field, rest) : 0;
  return static_cast<uint64_t>(fq_deg(sep)) + extra;
}

PairReport weil_report_given(
    const std::shared_ptr<const modfree::ModuleCtx>& module, const FqPoly& h,
    const FqPoly& H, const eucl::RingElem& f, const eucl::RingElem& r,
    const eucl::RingElem& F, const eucl::RingElem& R,
    const IndependenceResult& indep, uint32_t degree_cap) {
  const auto& field = module->field();
  PairReport rep;
  rep.params = PairParams{module, h, H, f, r, F, R};
  rep.independent = indep.independent;
  rep.witness = indep.witness;
  rep.count = count_free_pairs(module, h, H, f, r, F, R, degree_cap);

  mpz_class phi_pair =
      eucl::euler_phi(eucl::reduce_by(f, r)) *
      eucl::euler_phi(eucl::reduce_by(F, R));
  mpz_class denom;
  uint32_t degs = static_cast<uint32_t>(fq_deg(f.poly_value())) +
                  static_cast<uint32_t>(fq_deg(F.poly_value()));
  mpz_ui_pow_ui(denom.get_mpz_t(), field->q(), degs);
  rep.normalizer = mpq_class(phi_pair, denom);
  rep.normalizer.canonicalize();

  mpz_class qm(static_cast<unsigned long>(field->order()));
  mpq_class over_A = mpq_class(rep.count) / rep.normalizer;
  rep.error_term = over_A - mpq_class(qm);
  rep.error_term_vs_q =
      over_A - mpq_class(static_cast<unsigned long>(field->q()));

  rep.q_fr = eucl::T_identity(f, r).closed_side;
  rep.q_FR = eucl::T_identity(F, R).closed_side;

  FqPoly sum_poly = fq_add(h, H);
  rep.bound_applicable = fq_deg(sum_poly) >= 1;
  if (rep.bound_applicable)
    rep.root_excess =
        static_cast<int64_t>(distinct_roots(field, sum_poly)) - 1;

  mpq_class lhs_sq = rep.error_term * rep.error_term;
  if (rep.independent && rep.bound_applicable) {
    mpz_class D(static_cast<long>(rep.root_excess));
    mpz_class qq = rep.q_fr * rep.q_FR;
    mpz_class rhs_sq = D * D * qm * qq * qq;
    rep.bound_satisfied = cmp(lhs_sq, mpq_class(rhs_sq)) <= 0;
    rep.bound_value = D.get_d() *
                      std::sqrt(static_cast<double>(field->order())) *
                      qq.get_d();
    // Strict inequality: at q^m == (D*Q*Q)^2 the error bound can be attained
    // with N == 0 (witnessed over F_4 by h=x, H=x^3, f=r=R=1, F=x+1), so only
    // the strict case claims a positive count.
    mpz_class dqq = D * qq;
    rep.corollary_predicts_positive = qm > dqq * dqq;
    rep.corollary_holds =
        !(rep.corollary_predicts_positive && rep.count == 0);
  }
  // The aggregate expands the error term over the character pairs attached
  // to (beta1, beta2) in K_f x K_F.  A pair is degenerate when the scalar
  // character composed with beta1*h + beta2*H is constant as a function on
  // the field; its sum then has full magnitude q^m and no square-root
  // saving is available, so finding one disqualifies the estimate.
  if (rep.independent) {
    auto K1 = character_kernel(field, module, f);
    auto K2 = character_kernel(field, module, F);
    uint64_t combos = static_cast<uint64_t>(K1.size()) * K2.size();
    if (combos <= kDegeneracyScanLimit) {
      rep.degeneracy_scan_complete = true;
      const auto& carrier = module->carrier();
      const auto& ext = field->ext_field();
      std::vector<uint64_t> hv, Hv;
      hv.reserve(carrier.size());
      Hv.reserve(carrier.size());
      for (uint64_t theta : carrier) {
        hv.push_back(fq_eval(h, theta));
        Hv.push_back(fq_eval(H, theta));
      }
      for (uint64_t b1 : K1) {
        for (uint64_t b2 : K2) {
          if (b1 == 0 && b2 == 0) continue;
          uint64_t first = module->char_value_exp(
              1, ext->add(ext->mul(b1, hv[0]), ext->mul(b2, Hv[0])));
          bool constant = true;
          for (size_t i = 1; i < carrier.size(); ++i) {
            uint64_t e = module->char_value_exp(
                1, ext->add(ext->mul(b1, hv[i]), ext->mul(b2, Hv[i])));
            if (e != first) {
              constant = false;
              break;
            }
          }
          if (constant) ++rep.degenerate_configs;
        }
      }
    }
  }
  rep.aggregate_applicable = rep.independent &&
                             rep.degeneracy_scan_complete &&
                             rep.degenerate_configs == 0;
  if (rep.aggregate_applicable) {
    int64_t excess =
        std::max<int64_t>(std::max(fq_deg(h), fq_deg(H)) - 1, 0);
    rep.max_degree_excess = static_cast<uint32_t>(excess);
    mpz_class W(static_cast<long>(excess));
    mpz_class slack = rep.q_fr * rep.q_FR - 1;
    mpz_class rhs_sq = W * W * qm * slack * slack;
    rep.aggregate_satisfied = cmp(lhs_sq, mpq_class(rhs_sq)) <= 0;
  }
  return rep;
}

PairReport weil_report(const std::shared_ptr<const modfree::ModuleCtx>& module,
                       const FqPoly& h, const FqPoly& H,
                       const eucl::RingElem& f, const eucl::RingElem& r,
                       const eucl::RingElem& F, const eucl::RingElem& R,
                       uint32_t degree_cap) {
  auto indep = is_independent(module->field(), h, H, f, F, degree_cap);
  return weil_report_given(module, h, H, f, r, F, R, indep, degree_cap);
}

std::optional<ZeroCountPair> dependent_witness_search(
    const std::shared_ptr<const modfree::ModuleCtx>& module, const FqPoly& h,
    const FqPoly& H, const eucl::RingElem& f, const eucl::RingElem& F,
    uint32_t degree_cap) {
  const auto& field = module->field();
  auto indep = is_independent(field, h, H, f, F, degree_cap);
  if (indep.independent)
    throw std::domain_error(
        "witness search expects a dependent pair; this one is independent");
  const auto& divs = field->splitting_modulus_divisors();
  for (const auto& r : divs)
    for (const auto& R : divs)
      if (count_free_pairs(module, h, H, f, r, F, R, degree_cap) == 0)
        return ZeroCountPair{r, R};
  return std::nullopt;
}

chars::CycSum char_sum_G(
    const std::shared_ptr<const modfree::ModuleCtx>& module, const FqPoly& h,
    const FqPoly& H, const chars::Character& psi,
    const chars::Character& kappa) {
  if (module->kind() != modfree::ModuleCtx::Kind::Additive)
    throw std::domain_error("character sums here use the additive module");
  const auto& field = module->field();
  require_ext_poly(field, h, "first pair member");
  require_ext_poly(field, H, "second pair member");
  for (const chars::Character* chi : {&psi, &kappa}) {
    if (!chi->ctx || chi->ctx->kind() != modfree::ModuleCtx::Kind::Additive ||
        chi->ctx->field().get() != field.get())
      throw std::domain_error("characters must belong to the same module");
  }
  uint64_t N = module->char_root_order();
  chars::CycSum s(N);
  for (uint64_t omega : module->carrier()) {
    uint64_t e1 = module->char_value_exp(psi.index, fq_eval(h, omega));
    uint64_t e2 = module->char_value_exp(kappa.index, fq_eval(H, omega));
    s.add_root((e1 + e2) % N);
  }
  return s;
}

SweepStats pair_sweep(const std::shared_ptr<const modfree::ModuleCtx>& module,
                      const std::vector<std::pair<FqPoly, FqPoly>>& pairs,
                      uint32_t degree_cap) {
  const auto& field = module->field();
  const auto& divs = field->splitting_modulus_divisors();
  SweepStats st;
  for (const auto& [h, H] : pairs) {
    for (const auto& f : divs) {
      for (const auto& F : divs) {
        auto indep = is_independent(field, h, H, f, F, degree_cap);
        ++st.pair_configs;
        if (!indep.independent) ++st.dependent_configs;
        for (const auto& r : divs) {
          for (const auto& R : divs) {
            PairReport rep =
                weil_report_given(module, h, H, f, r, F, R, indep, degree_cap);
            ++st.reports;
            if (rep.independent) {
              ++st.independent_reports;
              auto describe = [&](const char* what) {
                if (!st.first_violation.empty()) return;
                std::ostringstream os;
                os << what << ": h=" << poly_str(h) << " H=" << poly_str(H)
                   << " f=" << f.str() << " r=" << r.str() << " F=" << F.str()
                   << " R=" << R.str() << " count=" << rep.count.get_str()
                   << " error=" << rep.error_term.get_str()
                   << " D=" << rep.root_excess
                   << " Q=" << mpz_class(rep.q_fr * rep.q_FR).get_str();
                st.first_violation = os.str();
              };
              if (rep.bound_applicable) {
                ++st.bounds_checked;
                if (!rep.bound_satisfied) {
                  ++st.bound_violations;
                  describe("root-excess bound exceeded");
                }
                if (rep.corollary_predicts_positive) ++st.corollary_hits;
                if (!rep.corollary_holds) {
                  ++st.positivity_violations;
                  describe("predicted positive, counted zero");
                }
              }
              if (rep.aggregate_applicable) {
                ++st.aggregate_checked;
                if (!rep.aggregate_satisfied) {
                  ++st.aggregate_violations;
                  describe("aggregate estimate exceeded");
                }
              } else {
                // degeneracy scan incomplete or a degenerate pair was found
                ++st.aggregate_skipped;
              }
            }
          }
        }
        if (!indep.independent) {
          auto w = dependent_witness_search(module, h, H, f, F, degree_cap);
          if (w)
            ++st.witnesses_found;
          else
            ++st.witnesses_missing;
        }
      }
    }
  }
  return st;
}

std::vector<std::pair<FqPoly, FqPoly>> random_pairs(
    const std::shared_ptr<const gf::FieldCtx>& field, size_t count,
    uint32_t max_degree, uint64_t seed) {
  const auto& ext = field->ext_field();
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    uint32_t d = 1 + static_cast<uint32_t>(rng() % max_degree);
    std::vector<uint64_t> coeffs(d + 1);
    for (uint32_t i = 0; i < d; ++i) coeffs[i] = rng() % field->order();
    coeffs[d] = 1 + rng() % (field->order() - 1);
    return fq_from_coeffs(ext, coeffs);
  };
  std::vector<std::pair<FqPoly, FqPoly>> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    FqPoly a = draw();
    FqPoly b = draw();
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

}  // namespace freefield::polyvalues
