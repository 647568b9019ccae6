// ── thirdkind: pole-free differentials, periods, table differences ───────────

#include "thp/thirdkind.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace thp {

namespace {

BigInt gcd(const BigInt& x, const BigInt& y) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return g;
}

/** Fundamental discriminant test: 1 (mod 4) squarefree, or 4m with m ≡ 2, 3 (mod 4) squarefree. */
bool is_fundamental(long D) {
  if (D == 0) return false;
  auto squarefree = [](long v) {
    v = std::labs(v);
    for (long p = 2; p * p <= v; ++p) {
      if (v % (p * p) == 0) return false;
      while (v % p == 0) v /= p;
    }
    return true;
  };
  long m4 = ((D % 4) + 4) % 4;
  if (m4 == 1) return squarefree(D);
  if (m4 == 0) {
    long q = D / 4;
    long q4 = ((q % 4) + 4) % 4;
    return (q4 == 2 || q4 == 3) && squarefree(q);
  }
  return false;
}

/** Shared recognition step for the difference operations. */
DifferenceResult finish_difference(BigReal value, BigRat t, const BigReal& c_plus, int digits) {
  DifferenceResult out;
  out.value = std::move(value);
  out.t = std::move(t);

  // The difference is only as accurate as the supplied coefficient, so the
  // recognition window is driven by min(c⁺ digits, working digits), with a
  // 4-digit guard band.  Denominators in this pipeline stay far below 10⁸,
  // and with that cap the continued-fraction step is unambiguous at 10⁻¹⁶.
  int eff = std::min(digits, c_plus.digits());
  BigReal tol = BigReal::pow10(-(eff - 4), out.value.digits());
  if (auto r = recognize_rational(out.value, BigInt(100000000), tol)) {
    out.recognized = true;
    out.rational = *r;
  }
  if (auto q = recognize_quarter_integer(out.value, tol)) {
    out.quarter_integer = true;
    out.half_integer = (q->den() <= 2);
  }
  return out;
}

}  // namespace

// ── Differentials ────────────────────────────────────────────────────────────

ThirdKindDiff beta(const ShortModel& E, const CurvePoint& Q) {
  if (Q.infinity) throw std::domain_error("beta: Q must be affine");
  if (!on_curve(E, Q)) throw std::invalid_argument("beta: Q is not on the given model");
  return ThirdKindDiff{E, Q, BigRat(0), BigRat(1, 2)};
}

BigRat find_t(const LongModel& W, const CurvePoint& P, FindTDiagnostics* diag) {
  if (P.infinity) throw std::domain_error("find_t: P must be affine");
  if (!on_curve(W, P)) throw std::invalid_argument("find_t: P is not on the given model");

  const BigInt a = P.x.num(), b = P.x.den();
  const BigInt c = P.y.num(), d = P.y.den();

  // On an integral model, b | d and d′ | b hold for every rational point;
  // a failure here means the inputs are inconsistent with such a model.
  if (d % b != 0)
    throw std::invalid_argument("find_t: denominator of x does not divide denominator of y");
  const BigInt dprime = d / b;
  if (b % dprime != 0)
    throw std::invalid_argument("find_t: d' does not divide the denominator of x");
  const BigInt bprime = b / dprime;

  // Unique 0 ≤ s < d′ with 2c ≡ a·s (mod d′); a is invertible since
  // gcd(a, b) = 1 and d′ | b.
  BigInt s(0);
  if (dprime > 1) {
    BigInt ainv;
    if (mpz_invert(ainv.get_mpz_t(), a.get_mpz_t(), dprime.get_mpz_t()) == 0)
      throw std::invalid_argument("find_t: x-numerator not invertible modulo d'");
    BigInt prod = 2 * c * ainv;
    mpz_mod(s.get_mpz_t(), prod.get_mpz_t(), dprime.get_mpz_t());
  }
  const BigInt u = (2 * c - a * s) / dprime;

  if (diag != nullptr) {
    diag->a = a;
    diag->b = b;
    diag->c = c;
    diag->d = d;
    diag->dprime = dprime;
    diag->bprime = bprime;
    diag->s = s;
    diag->u = u;
    // Cleared kernel (u + b′s·x)/(bx − a): no vertical poles ⟺ the integer
    // contents of numerator and denominator are coprime.
    diag->no_vertical_poles = (gcd(gcd(u, bprime * s), gcd(b, a)) == 1);
  }
  return BigRat(s, dprime);
}

ThirdKindDiff wm_differential(const LongModel& W, const CurvePoint& P) {
  BigRat t = find_t(W, P);
  return ThirdKindDiff{W, P, std::move(t), BigRat(1, 2)};
}

// ── Periods ──────────────────────────────────────────────────────────────────

BigReal period_of(const ThirdKindDiff& D, int digits, bool parallel) {
  ShortModel E;
  CurvePoint Q;
  if (const auto* Es = std::get_if<ShortModel>(&D.model)) {
    E = *Es;
    Q = D.Q;
  } else {
    // Transport x′ = x + b₂/12, y′ = 2y + A₁x + A₃ preserves both the kernel
    // and ω, so the period may be computed on the short model verbatim.
    auto [Es2, map] = long_to_short(std::get<LongModel>(D.model));
    E = Es2;
    Q = map.apply(D.Q);
  }
  PeriodLattice L(E, digits);
  const int wd = digits + 10;
  BigReal kernel = BigReal(2, wd) * third_kind_period(L, Q, parallel);
  return BigReal(D.scale, wd) * (kernel + BigReal(D.t, wd) * L.omega());
}

BigReal period_wm(const LongModel& W, const CurvePoint& P, int digits) {
  return period_of(wm_differential(W, P), digits);
}

// ── Differences ──────────────────────────────────────────────────────────────

DifferenceResult difference_raw(const ShortModel& base, const BigInt& delta,
                                const BigReal& c_plus, const CurvePoint& P, int eps,
                                const BigRat& c_E, int digits) {
  if (eps != 1 && eps != -1) throw std::invalid_argument("difference_raw: eps must be ±1");
  if (eps * delta <= 0) throw std::invalid_argument("difference_raw: need eps·delta > 0");
  auto [Ed, map] = twist(base, delta);
  if (!on_curve(Ed, P))
    throw std::invalid_argument("difference_raw: P is not on the twisted model");

  PeriodLattice L(Ed, digits);
  const int wd = digits + 10;
  BigReal I = third_kind_period(L, P);
  BigReal diff = BigReal(BigRat(delta, BigInt(1)), wd) * c_plus -
                 BigReal(BigRat(eps) * c_E, wd) / L.omega() * I;
  DifferenceResult out = finish_difference(std::move(diff), BigRat(0), c_plus, digits);
  out.period = std::move(I);
  out.omega = L.omega();
  return out;
}

DifferenceResult difference_wm(const ShortModel& base, const BigInt& delta,
                               const BigReal& c_plus, const CurvePoint& P, int eps,
                               const BigRat& c_E, int digits) {
  if (eps != 1 && eps != -1) throw std::invalid_argument("difference_wm: eps must be ±1");
  if (eps * delta <= 0) throw std::invalid_argument("difference_wm: need eps·delta > 0");
  auto [W, wmap] = minimal_twist_model(base, delta);
  if (!on_curve(W, P))
    throw std::invalid_argument("difference_wm: P is not on the minimal twist model");

  BigRat t = find_t(W, P);
  BigReal per = period_wm(W, P, digits);

  // The normalizing real period is that of E_Δ itself, independent of the
  // minimal model's coordinate scale.
  auto [Ed, map] = twist(base, delta);
  PeriodLattice L(Ed, digits);
  const int wd = digits + 10;
  BigReal diff = BigReal(BigRat(delta, BigInt(1)), wd) * c_plus -
                 BigReal(BigRat(eps) * c_E, wd) / L.omega() * per;
  DifferenceResult out = finish_difference(std::move(diff), std::move(t), c_plus, digits);
  out.period = std::move(per);
  out.omega = L.omega();
  return out;
}

// ── q-expansion ──────────────────────────────────────────────────────────────

std::vector<BigReal> eta_qexp(long delta, long r, const CoeffProvider& provider, int n_max,
                              int digits) {
  if (delta == 1)
    throw std::invalid_argument("eta_qexp: delta = 1 is not supported (unary character)");
  if (!is_fundamental(delta))
    throw std::invalid_argument("eta_qexp: delta must be a fundamental discriminant");
  if (n_max < 1) throw std::invalid_argument("eta_qexp: n_max must be positive");

  const int wd = digits + 10;
  const BigInt D(delta);
  BigReal prefactor = BigReal(BigRat(std::labs(delta)), wd).sqrt();
  if (delta > 0) prefactor = -prefactor;

  std::vector<BigReal> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (long n = 1; n <= n_max; ++n) {
    BigReal acc(0, wd);
    for (long dv = 1; dv <= n; ++dv) {
      if (n % dv != 0) continue;
      int chi = mpz_kronecker_si(D.get_mpz_t(), dv);
      if (chi == 0) continue;
      const long m = n / dv;
      const long idx_n = std::labs(delta) * m * m;
      const long idx_h = r * m;
      std::optional<BigReal> cv = provider(idx_n, idx_h);
      if (!cv)
        throw std::runtime_error("eta_qexp: missing coefficient c+(n,h) with n=" +
                                 std::to_string(idx_n) + ", h=" + std::to_string(idx_h));
      acc = acc + BigReal(BigRat(m * chi), wd) * *cv;
    }
    out.push_back(prefactor * acc);
  }
  return out;
}

}  // namespace thp
