// ── heegner: modular parameterization and twisted Heegner points ─────────────

#include "thp/heegner.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace thp {

namespace {

/**
 * Smallest n_max with Σ_{n>n_max} n·x^n < 10^{−digits} for x = e^{−2πY},
 * using the closed form x^{M+1}·((M+1)(1−x) + x)/(1−x)² evaluated in log10.
 * The linear-in-n envelope dominates |a_n| ≤ 2√n·√n up to a factor absorbed
 * by one extra guard digit.
 */
long tail_terms(double Y, int digits) {
  const double log10_x = -2.0 * M_PI * Y / std::log(10.0);
  const double x = std::exp(-2.0 * M_PI * Y);               // may underflow to 0
  const double one_minus_x = -std::expm1(-2.0 * M_PI * Y);  // exact for tiny Y
  const double target = -(digits + 1);
  long M = std::max<long>(1, static_cast<long>((digits + 2) * std::log(10.0) /
                                               (2.0 * M_PI * Y)));
  for (;;) {
    const double head = static_cast<double>(M + 1) * one_minus_x + x;
    const double bound = static_cast<double>(M + 1) * log10_x +
                         std::log10(head) - 2.0 * std::log10(one_minus_x);
    if (bound < target) break;
    if (M > 10'000'000)
      throw std::runtime_error(
          "phi_log: truncation needs more than 1e7 terms; move tau to a "
          "translate with larger imaginary part before evaluating");
    M += std::max<long>(8, M / 8);
  }
  if (M > 10'000'000)
    throw std::runtime_error(
        "phi_log: truncation needs more than 1e7 terms; move tau to a "
        "translate with larger imaginary part before evaluating");
  return M;
}

BigInt pow10_int(long e) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return v;
}

}  // namespace

// ── ModularParam ─────────────────────────────────────────────────────────────

std::vector<long> ModularParam::hecke_prefix(long n_max) const {
  if (n_max < 1) throw std::invalid_argument("hecke_prefix: n_max must be >= 1");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (static_cast<long>(cache_->an.size()) < n_max + 1)
    cache_->an = an_sequence(model, n_max);
  return std::vector<long>(cache_->an.begin(), cache_->an.begin() + n_max + 1);
}

ModularParam make_modular_param(const LongModel& E, long N, int fricke, const BigInt& manin) {
  if (N <= 0) throw std::invalid_argument("make_modular_param: level must be positive");
  if (fricke != 1 && fricke != -1)
    throw std::invalid_argument("make_modular_param: fricke eigenvalue must be +1 or -1");
  if (manin == 0) throw std::invalid_argument("make_modular_param: manin constant must be nonzero");
  ModularParam mp;
  mp.model = E;
  auto [shortm, map] = long_to_short(E);
  mp.analytic = shortm;
  mp.to_analytic = map;
  mp.N = N;
  mp.fricke = fricke;
  mp.manin = manin;
  return mp;
}

// ── φ and divisor logs ───────────────────────────────────────────────────────

BigComplex phi_log(const ModularParam& mp, const BigComplex& tau, int digits) {
  if (digits < 10) throw std::invalid_argument("phi_log: need at least 10 digits");
  if (tau.im.sign() <= 0)
    throw std::invalid_argument("phi_log: tau must lie in the upper half-plane");

  const long n_max = tail_terms(tau.im.to_double(), digits);
  const std::vector<long> an = mp.hecke_prefix(n_max);

  const int wd = digits + 10;
  const BigReal two_pi = BigReal::pi(wd) * BigReal(2, wd);
  // q = e^{2πiτ}; |q| < 1 keeps the power iteration stable.
  const BigComplex q = cexp(BigComplex(-(two_pi * tau.im), two_pi * tau.re));

  BigComplex acc(BigReal(0L, wd), BigReal(0L, wd));
  BigComplex qn = q;
  for (long n = 1; n <= n_max; ++n) {
    if (an[n] != 0) acc = acc + qn * BigReal(BigRat(an[n], n), wd);
    if (n < n_max) qn = qn * q;
  }
  return acc;
}

BigComplex divisor_log(const ModularParam& mp, const HeegnerDivisor& D, int digits) {
  const int wd = digits + 10;
  BigComplex acc(BigReal(0L, wd), BigReal(0L, wd));
  for (const DivisorTerm& term : D.terms) {
    if (term.chi == 0) continue;
    const BigComplex alpha = heegner_tau(term.form, wd);
    const BigComplex value = phi_log(mp, alpha, digits);
    acc = acc + value * BigReal(BigRat(static_cast<long>(term.chi), term.w), wd);
  }
  return acc;
}

// ── Twisted Heegner points ───────────────────────────────────────────────────

HeegnerPointResult heegner_point(const ModularParam& mp,
                                 const std::vector<PrincipalTerm>& principal,
                                 const BigInt& delta, const BigInt& r, int digits) {
  if (principal.empty())
    throw std::invalid_argument("heegner_point: principal part is empty");
  if (delta <= 0)
    throw std::invalid_argument("heegner_point: delta must be a positive discriminant");
  for (const PrincipalTerm& term : principal)
    if (term.d >= 0)
      throw std::invalid_argument("heegner_point: principal-part exponents must be negative");

  const int wd = digits + 10;

  // z = c_E · Σ c(d,h) · divisor_log(Z_{Δ,r}(d,h)); track the lattice
  // denominator W = lcm of contributing stabilizer orders as we go.
  BigComplex z(BigReal(0L, wd), BigReal(0L, wd));
  long W = 1;
  for (const PrincipalTerm& term : principal) {
    const HeegnerDivisor D =
        twisted_divisor(delta, r, mp.N, BigInt(term.d), BigInt(term.h));
    for (const DivisorTerm& dt : D.terms)
      if (dt.chi != 0) W = std::lcm(W, dt.w);
    z = z + divisor_log(mp, D, digits) * BigReal(BigRat(term.coeff, BigInt(1)), wd);
  }
  z = z * BigReal(BigRat(mp.manin, BigInt(1)), wd);
  // Scaling by c_E coarsens the ambiguity lattice by the same factor.
  const long manin_abs = std::labs(mpz_get_si(mp.manin.get_mpz_t()));
  W *= std::max<long>(1, manin_abs);

  const PeriodLattice L(mp.analytic, digits);
  const auto [twisted, to_twisted] = twist(mp.analytic, delta);
  (void)to_twisted;
  const BigReal delta_real = BigReal(BigRat(delta, BigInt(1)), wd);
  const BigReal sqrt_delta = delta_real.sqrt();

  // Certification thresholds: a candidate must be real to half the working
  // digits, recognize through continued fractions well inside the convergent
  // gap, and then satisfy the twisted curve equation exactly.
  const BigReal one(1, wd);
  const BigReal band = BigReal::pow10(-(digits / 2), wd);
  const BigReal tol = BigReal::pow10(-((3 * digits) / 4), wd);
  const BigReal pole_guard = BigReal::pow10(-(digits / 2), wd);
  const BigInt max_den = pow10_int(std::max(12, digits / 5));

  std::vector<CurvePoint> found;
  std::vector<BigComplex> found_z;
  for (long a = 0; a < W; ++a) {
    for (long b = 0; b < W; ++b) {
      BigComplex cand = z + BigComplex(L.mu() * BigReal(BigRat(a, W), wd),
                                       L.nu_im() * BigReal(BigRat(b, W), wd));
      cand = L.reduce_mod_lattice(cand);
      if (cand.abs() < pole_guard) continue;  // ℘ pole: the image is O, not affine

      const auto [wp_val, wp_prime_val] = L.elliptic_exp(cand);
      const BigComplex xc = wp_val * delta_real;
      const BigComplex yc = wp_prime_val * (delta_real * sqrt_delta);
      if (xc.im.abs() > band * (one + xc.re.abs())) continue;
      if (yc.im.abs() > band * (one + yc.re.abs())) continue;

      const auto rx = recognize_rational(xc.re, max_den, tol * (one + xc.re.abs()));
      if (!rx) continue;
      const auto ry = recognize_rational(yc.re, max_den, tol * (one + yc.re.abs()));
      if (!ry) continue;

      CurvePoint P(*rx, *ry);
      if (!on_curve(twisted, P)) continue;
      bool duplicate = false;
      for (const CurvePoint& seen : found)
        if (seen == P) duplicate = true;
      if (duplicate) continue;
      found.push_back(std::move(P));
      found_z.push_back(cand);
    }
  }

  if (found.empty())
    throw std::runtime_error(
        "heegner_point: no lattice translate recognized as a rational point on "
        "the twist; retry with roughly twice the working precision");
  if (found.size() > 1)
    throw std::runtime_error(
        "heegner_point: recognition was ambiguous (multiple certified points); "
        "retry with higher precision");

  HeegnerPointResult result;
  result.point = found.front();
  result.twisted = twisted;
  result.z = found_z.front();
  result.shifts_scanned = W * W;
  return result;
}

}  // namespace thp
