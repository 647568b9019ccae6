#include "thp/curves.hpp"

#include <stdexcept>

namespace thp {

// ── Models ───────────────────────────────────────────────────────────────────

BigRat LongModel::j() const {
  BigInt d = disc();
  if (d == 0) throw std::domain_error("LongModel::j: singular model");
  BigInt C4 = c4();
  return BigRat(C4 * C4 * C4, d);
}

BigRat ShortModel::j() const {
  BigRat d = disc();
  if (d.is_zero()) throw std::domain_error("ShortModel::j: singular model");
  // For y² = 4x³ − g₂x − g₃: j = 1728·g₂³/(g₂³ − 27g₃²).
  BigRat g2c = g2 * g2 * g2;
  return BigRat(1728) * g2c / d;
}

// ── Points ───────────────────────────────────────────────────────────────────

bool on_curve(const ShortModel& E, const CurvePoint& P) {
  if (P.infinity) return true;
  BigRat lhs = P.y * P.y;
  BigRat rhs = BigRat(4) * P.x * P.x * P.x - E.g2 * P.x - E.g3;
  return lhs == rhs;
}

bool on_curve(const LongModel& E, const CurvePoint& P) {
  if (P.infinity) return true;
  BigRat a1(E.a1, BigInt(1)), a2(E.a2, BigInt(1)), a3(E.a3, BigInt(1));
  BigRat a4(E.a4, BigInt(1)), a6(E.a6, BigInt(1));
  BigRat lhs = P.y * P.y + a1 * P.x * P.y + a3 * P.y;
  BigRat rhs = P.x * P.x * P.x + a2 * P.x * P.x + a4 * P.x + a6;
  return lhs == rhs;
}

// ── Model maps ───────────────────────────────────────────────────────────────

CurvePoint ModelMap::apply(const CurvePoint& P) const {
  if (!is_rational())
    throw std::domain_error("ModelMap::apply: map involves sqrt scale; not rational");
  if (P.infinity) return CurvePoint::at_infinity();
  return CurvePoint(mx * P.x + cx, my * P.y + ml * P.x + cy);
}

ModelMap ModelMap::inverse() const {
  if (!is_rational())
    throw std::domain_error("ModelMap::inverse: map involves sqrt scale; not rational");
  if (mx.is_zero() || my.is_zero())
    throw std::domain_error("ModelMap::inverse: degenerate map");
  // x = (x' − cx)/mx ;  y = (y' − ml·x − cy)/my with x substituted.
  ModelMap inv;
  inv.mx = BigRat(1) / mx;
  inv.cx = -cx / mx;
  inv.my = BigRat(1) / my;
  inv.ml = -ml / (my * mx);
  inv.cy = (ml * cx / mx - cy) / my;
  return inv;
}

// ── Group law: short model y² = 4x³ − g₂x − g₃ ───────────────────────────────
//
// A chord y = λx + ν meets the curve where 4x³ − λ²x² − ... = 0, so the three
// intersection abscissae satisfy x₁+x₂+x₃ = λ²/4.

CurvePoint neg(const ShortModel&, const CurvePoint& P) {
  if (P.infinity) return P;
  return CurvePoint(P.x, -P.y);
}

CurvePoint add(const ShortModel& E, const CurvePoint& P, const CurvePoint& Q) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  BigRat lambda;
  if (P.x == Q.x) {
    if (P.y == -Q.y) return CurvePoint::at_infinity();  // P + (−P)
    // Tangent: 2y·y' = 12x² − g₂.
    lambda = (BigRat(12) * P.x * P.x - E.g2) / (BigRat(2) * P.y);
  } else {
    lambda = (Q.y - P.y) / (Q.x - P.x);
  }
  BigRat nu = P.y - lambda * P.x;
  BigRat x3 = lambda * lambda / BigRat(4) - P.x - Q.x;
  BigRat y3 = -(lambda * x3 + nu);
  return CurvePoint(x3, y3);
}

// ── Group law: long model ────────────────────────────────────────────────────

CurvePoint neg(const LongModel& E, const CurvePoint& P) {
  if (P.infinity) return P;
  BigRat a1(E.a1, BigInt(1)), a3(E.a3, BigInt(1));
  return CurvePoint(P.x, -P.y - a1 * P.x - a3);
}

CurvePoint add(const LongModel& E, const CurvePoint& P, const CurvePoint& Q) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  BigRat a1(E.a1, BigInt(1)), a2(E.a2, BigInt(1)), a3(E.a3, BigInt(1));
  BigRat a4(E.a4, BigInt(1));
  BigRat lambda, nu;
  if (P.x == Q.x) {
    if (Q.y == -P.y - a1 * P.x - a3) return CurvePoint::at_infinity();
    BigRat den = BigRat(2) * P.y + a1 * P.x + a3;
    lambda = (BigRat(3) * P.x * P.x + BigRat(2) * a2 * P.x + a4 - a1 * P.y) / den;
    nu = P.y - lambda * P.x;
  } else {
    lambda = (Q.y - P.y) / (Q.x - P.x);
    nu = P.y - lambda * P.x;
  }
  BigRat x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
  BigRat y3 = -(lambda + a1) * x3 - nu - a3;
  return CurvePoint(x3, y3);
}

// ── Scalar multiples (double-and-add, shared shape) ──────────────────────────

namespace {

template <typename Model>
CurvePoint smul_impl(const Model& E, const BigInt& n, const CurvePoint& P) {
  if (n == 0 || P.infinity) return CurvePoint::at_infinity();
  BigInt k = ::abs(n);
  CurvePoint base = (n < 0) ? neg(E, P) : P;
  CurvePoint acc = CurvePoint::at_infinity();
  // Plain left-to-right double-and-add.
  for (long i = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; i >= 0; --i) {
    acc = add(E, acc, acc);
    if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) acc = add(E, acc, base);
  }
  return acc;
}

}  // namespace

CurvePoint smul(const ShortModel& E, const BigInt& n, const CurvePoint& P) {
  return smul_impl(E, n, P);
}
CurvePoint smul(const LongModel& E, const BigInt& n, const CurvePoint& P) {
  return smul_impl(E, n, P);
}

// ── Model transport ──────────────────────────────────────────────────────────

std::pair<ShortModel, ModelMap> long_to_short(const LongModel& E) {
  ShortModel S{BigRat(E.c4(), BigInt(12)), BigRat(E.c6(), BigInt(216))};
  ModelMap m;
  m.mx = BigRat(1);
  m.cx = BigRat(E.b2(), BigInt(12));
  m.my = BigRat(2);
  m.ml = BigRat(E.a1, BigInt(1));
  m.cy = BigRat(E.a3, BigInt(1));
  return {S, m};
}

std::pair<ShortModel, ModelMap> twist(const ShortModel& E, const BigInt& delta) {
  if (delta == 0) throw std::invalid_argument("twist: delta must be nonzero");
  BigRat d(delta, BigInt(1));
  ShortModel T{d * d * E.g2, d * d * d * E.g3};
  ModelMap m;
  m.mx = d;
  m.cx = BigRat(0);
  m.my = d;
  m.ml = BigRat(0);
  m.cy = BigRat(0);
  m.hroot = delta;  // y picks up the extra √Δ
  return {T, m};
}

std::pair<LongModel, ModelMap> minimal_twist_model(const ShortModel& base, const BigInt& delta) {
  if (!(base.g2 == BigRat(4) && base.g3 == BigRat(-1)))
    throw std::invalid_argument(
        "minimal_twist_model: case table only covers the g2=4, g3=-1 family; "
        "supply a manual LongModel + ModelMap in the curve config for other curves");
  if (delta <= 0) throw std::invalid_argument("minimal_twist_model: delta must be positive");

  LongModel W;
  ModelMap m;
  m.cx = BigRat(0);
  m.ml = BigRat(0);
  const BigInt d2 = delta * delta, d3 = delta * delta * delta;

  if (delta % 4 == 1) {
    // y² + y = x³ − Δ²x + (Δ³−1)/4, map (u,v) ↦ (u, (v−1)/2).
    W = LongModel{BigInt(0), BigInt(0), BigInt(1), -d2, (d3 - 1) / 4};
    m.mx = BigRat(1);
    m.my = BigRat(1, 2);
    m.cy = BigRat(-1, 2);
  } else if (delta % 8 == 4) {
    // y² = x³ − Δ²x + Δ³/4, map (u,v) ↦ (u, v/2).
    W = LongModel{BigInt(0), BigInt(0), BigInt(0), -d2, d3 / 4};
    m.mx = BigRat(1);
    m.my = BigRat(1, 2);
    m.cy = BigRat(0);
  } else if (delta % 8 == 0) {
    // y² = x³ − 2⁻⁴Δ²x + 2⁻⁸Δ³, map (u,v) ↦ (u/4, v/16).
    if (d2 % 16 != 0 || d3 % 256 != 0)
      throw std::invalid_argument("minimal_twist_model: delta ≡ 0 (mod 8) violates integrality");
    W = LongModel{BigInt(0), BigInt(0), BigInt(0), -d2 / 16, d3 / 256};
    m.mx = BigRat(1, 4);
    m.my = BigRat(1, 16);
    m.cy = BigRat(0);
  } else {
    throw std::invalid_argument(
        "minimal_twist_model: delta ≡ 2,3 (mod 4) is not a fundamental discriminant > 0 "
        "congruent to a square mod 4N for this family");
  }
  return {W, m};
}

// ── Point counting ───────────────────────────────────────────────────────────

namespace {

long mod_reduce(const BigInt& a, long p) {
  BigInt r = a % p;
  long v = r.get_si();
  return v < 0 ? v + p : v;
}

/** Number of affine solutions mod 2, by exhaustive enumeration of the 4 pairs. */
long count_affine_f2(const LongModel& E) {
  long count = 0;
  long a1 = mod_reduce(E.a1, 2), a2 = mod_reduce(E.a2, 2), a3 = mod_reduce(E.a3, 2);
  long a4 = mod_reduce(E.a4, 2), a6 = mod_reduce(E.a6, 2);
  for (long x = 0; x < 2; ++x)
    for (long y = 0; y < 2; ++y) {
      long lhs = (y * y + a1 * x * y + a3 * y) % 2;
      long rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
      if (lhs == rhs) ++count;
    }
  return count;
}

}  // namespace

long ap(const LongModel& E, long p, ReductionKind* kind_out) {
  if (p < 2) throw std::invalid_argument("ap: p must be a prime >= 2");
  if (p > 1000000) throw std::invalid_argument("ap: p exceeds the 10^6 support bound");

  const BigInt disc = E.disc();
  ReductionKind kind = ReductionKind::kGood;
  if (disc % p == 0)
    kind = (E.c4() % p != 0) ? ReductionKind::kMultiplicative : ReductionKind::kAdditive;
  if (kind_out) *kind_out = kind;

  if (kind == ReductionKind::kAdditive) return 0;

  long a;
  if (p == 2) {
    // a₂ = 2 − #affine covers both cases: good because #E = #affine + 1, and
    // multiplicative because the node counts once so #E_ns = #affine.
    a = 2 - count_affine_f2(E);
  } else {
    // Complete the square: (2y + A₁x + A₃)² = 4x³ + b₂x² + 2b₄x + b₆ =: f(x).
    // #affine = Σ_x (1 + χ(f(x))), so a_p = −Σ_x χ(f(x)). The same sum gives
    // a_p in the multiplicative case (the node contributes χ(0) = 0 and the
    // singular point cancels against its missing smooth double cover).
    const long B2 = mod_reduce(E.b2(), p);
    const long B4 = mod_reduce(E.b4(), p);
    const long B6 = mod_reduce(E.b6(), p);
    const BigInt pz(p);
    long sum = 0;
    BigInt fx;
    for (long x = 0; x < p; ++x) {
      // Horner on f(x) = ((4x + b₂)x + 2b₄)x + b₆ mod p, 64-bit safe (p ≤ 10⁶).
      long v = (4 * x + B2) % p;
      v = (v * x + 2 * B4) % p;
      v = (v * x + B6) % p;
      fx = v;
      sum += mpz_legendre(fx.get_mpz_t(), pz.get_mpz_t());
    }
    a = -sum;
  }

  if (kind == ReductionKind::kGood) {
    if (static_cast<double>(a) * a > 4.0 * p)
      throw std::runtime_error("ap: Hasse bound violated — counting bug");
  } else {
    if (a != 1 && a != -1)
      throw std::runtime_error("ap: multiplicative reduction must give ±1");
  }
  return a;
}

std::vector<long> an_sequence(const LongModel& E, long n_max) {
  if (n_max < 1) throw std::invalid_argument("an_sequence: n_max must be >= 1");
  std::vector<long> a(static_cast<size_t>(n_max) + 1, 0);
  a[1] = 1;
  // Sieve of smallest prime factors over [2, n_max].
  std::vector<long> spf(static_cast<size_t>(n_max) + 1, 0);
  for (long i = 2; i <= n_max; ++i) {
    if (spf[i] == 0)
      for (long j = i; j <= n_max; j += i)
        if (spf[j] == 0) spf[j] = i;
  }
  for (long n = 2; n <= n_max; ++n) {
    long p = spf[n];
    long pk = p, m = n / p;
    while (m % p == 0) {
      pk *= p;
      m /= p;
    }
    if (m > 1) {
      a[n] = a[pk] * a[m];  // multiplicativity, gcd(pk, m) = 1
      continue;
    }
    // n = p^k. k = 1: direct count; k > 1: Hecke recursion / bad-prime power.
    if (pk == p) {
      ReductionKind kind;
      a[n] = ap(E, p, &kind);
      continue;
    }
    ReductionKind kind;
    long app = ap(E, p, &kind);
    if (kind == ReductionKind::kGood) {
      a[n] = app * a[n / p] - p * a[n / (p * p)];
    } else {
      a[n] = app * a[n / p];  // a_{p^k} = a_p^k (0 for additive)
    }
  }
  return a;
}

}  // namespace thp
