#include "thp/quadforms.hpp"

#include <algorithm>
#include <stdexcept>

namespace thp {

// ── Roots ────────────────────────────────────────────────────────────────────

BigComplex heegner_tau(const QuadForm& Q, int digits) {
  if (Q.A <= 0 || Q.disc() >= 0)
    throw std::invalid_argument("heegner_tau: form must be positive definite");
  BigReal two_a(2 * Q.A, digits);
  BigReal re = -BigReal(Q.B, digits) / two_a;
  BigReal im = BigReal(-Q.disc(), digits).sqrt() / two_a;
  return BigComplex(re, im);
}

// ── Hurwitz class numbers ────────────────────────────────────────────────────

namespace {

/** w ∈ {1,2,3} for an SL₂(ℤ)-reduced form, from its primitive part. */
long sl2_weight(const BigInt& a, const BigInt& b, const BigInt& c) {
  BigInt g = gcd(gcd(a, b), c);
  BigInt d0 = (b * b - 4 * a * c) / (g * g);
  if (d0 == -3) return 3;
  if (d0 == -4) return 2;
  return 1;
}

}  // namespace

BigRat hurwitz_H(long n) {
  if (n <= 0) throw std::invalid_argument("hurwitz_H: n must be positive");
  long m = n % 4;
  if (m == 1 || m == 2) return BigRat(0);
  // Enumerate reduced forms: −a < b ≤ a ≤ c, with b ≥ 0 when a = c or b = a.
  BigRat total(0);
  for (long a = 1; 3 * a * a <= n; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b + n;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && (a == c || -b == a)) continue;  // avoid double count
      total = total + BigRat(1, sl2_weight(BigInt(a), BigInt(b), BigInt(c)));
    }
  return total;
}

// ── Γ₀(N) equivalence ────────────────────────────────────────────────────────

namespace {

/** floor(√n) for n ≥ 0. */
BigInt isqrt(const BigInt& n) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

/** ceil(a/b) for b > 0. */
BigInt cdiv(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/** floor(a/b) for b > 0. */
BigInt fdiv(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/** Q ∘ M for M = (p q; r s): the form (X,Y) ↦ Q(pX+qY, rX+sY). */
QuadForm act(const QuadForm& Q, const BigInt& p, const BigInt& q, const BigInt& r,
             const BigInt& s) {
  QuadForm R;
  R.A = Q.eval(p, r);
  R.C = Q.eval(q, s);
  R.B = 2 * Q.A * p * q + Q.B * (p * s + q * r) + 2 * Q.C * r * s;
  return R;
}

}  // namespace

bool gamma0_equivalent(long N, const QuadForm& Q1, const QuadForm& Q2) {
  if (Q1.A <= 0 || Q2.A <= 0) throw std::invalid_argument("gamma0_equivalent: need A > 0");
  const BigInt D = Q1.disc();
  if (D >= 0) throw std::invalid_argument("gamma0_equivalent: need negative discriminant");
  if (D != Q2.disc()) return false;

  // A₂ = Q1(p, r) = A₁(p + B₁r/2A₁)² + (|D|/4A₁)r² bounds both r and p.
  const BigInt rbound = isqrt(4 * Q1.A * Q2.A / (-D));
  for (BigInt r = -fdiv(rbound, BigInt(N)) * N; r <= rbound; r += N) {
    // Integer p with A₁p² + B₁pr + C₁r² = A₂: roots of a quadratic in p.
    BigInt disc_p = D * r * r + 4 * Q1.A * Q2.A;
    if (disc_p < 0) continue;
    BigInt s = isqrt(disc_p);
    BigInt lo = cdiv(-Q1.B * r - s, 2 * Q1.A);
    BigInt hi = fdiv(-Q1.B * r + s, 2 * Q1.A);
    for (BigInt p = lo; p <= hi; ++p) {
      if (Q1.eval(p, r) != Q2.A) continue;
      if (gcd(p, r) != 1) continue;
      // Extend (p, r) to det-1: p·s0 − r·q0 = 1, general solution shifts by
      // (q, s) += k·(p, r), changing B by 2k·A₂.
      BigInt g, s0, t0;
      mpz_gcdext(g.get_mpz_t(), s0.get_mpz_t(), t0.get_mpz_t(), p.get_mpz_t(), r.get_mpz_t());
      BigInt q0 = -t0;
      QuadForm R = act(Q1, p, q0, r, s0);
      BigInt diff = Q2.B - R.B;
      if (diff % (2 * Q2.A) != 0) continue;
      BigInt k = diff / (2 * Q2.A);
      QuadForm full = act(Q1, p, q0 + k * p, r, s0 + k * r);
      if (full == Q2) return true;
      throw std::runtime_error("gamma0_equivalent: internal inconsistency in matrix solve");
    }
  }
  return false;
}

long stabilizer_order(long N, const QuadForm& Q) {
  if (Q.A <= 0 || Q.disc() >= 0)
    throw std::invalid_argument("stabilizer_order: form must be positive definite");
  BigInt g = gcd(gcd(Q.A, Q.B), Q.C);
  BigInt a0 = Q.A / g;
  BigInt d0 = Q.disc() / (g * g);
  if (d0 != -3 && d0 != -4) return 1;
  // Extra automorphs have lower-left entry a₀ (and a₀ for the square too),
  // so they lie in Γ₀(N) exactly when N | a₀.
  return (a0 % N == 0) ? (d0 == -3 ? 3 : 2) : 1;
}

std::vector<QuadForm> enumerate_classes(long N, const BigInt& D, const BigInt& h) {
  if (D >= 0) throw std::invalid_argument("enumerate_classes: need D < 0");
  if ((h * h - D) % (4 * N) != 0)
    throw std::invalid_argument("enumerate_classes: h² ≢ D (mod 4N)");

  const BigRat target = hurwitz_H(mpz_get_si(BigInt(-D).get_mpz_t()));
  const BigInt twoN = 2 * N;

  long amax = 2 * mpz_get_si(isqrt(BigInt(-D) / 3 + 1).get_mpz_t()) + 2;
  for (; amax <= 1 << 14; amax *= 2) {
    std::vector<QuadForm> reps;
    for (long a = 1; a <= amax; ++a) {
      const BigInt A = BigInt(N) * a;
      // Smallest B ≡ h (mod 2N) with −A < B ≤ A.
      BigInt m = (h + A) % twoN;
      if (m < 0) m += twoN;
      for (BigInt B = -A + (m > 0 ? m : twoN); B <= A; B += twoN) {
        BigInt num = B * B - D;
        if (num % (4 * A) != 0) continue;
        QuadForm Q{A, B, num / (4 * A)};
        bool fresh = true;
        for (const auto& rep : reps)
          if (gamma0_equivalent(N, rep, Q)) {
            fresh = false;
            break;
          }
        if (fresh) reps.push_back(Q);
      }
    }
    BigRat mass(0);
    for (const auto& rep : reps) mass = mass + BigRat(1, stabilizer_order(N, rep));
    if (mass == target) {
      std::sort(reps.begin(), reps.end(), [](const QuadForm& x, const QuadForm& y) {
        if (x.A != y.A) return x.A < y.A;
        if (x.B != y.B) return x.B < y.B;
        return x.C < y.C;
      });
      return reps;
    }
    if (mass > target)
      throw std::runtime_error(
          "enumerate_classes: mass exceeds the Hurwitz bound — equivalence test undercounts");
  }
  throw std::runtime_error("enumerate_classes: mass never reached the Hurwitz bound");
}

// ── Genus characters ─────────────────────────────────────────────────────────

int genus_char(const BigInt& delta, long N, const QuadForm& Q) {
  if (delta <= 0) throw std::invalid_argument("genus_char: delta must be positive");
  if (Q.A % N != 0) throw std::invalid_argument("genus_char: N must divide A");
  if (Q.disc() % delta != 0)
    throw std::invalid_argument("genus_char: delta must divide the discriminant");
  if (delta == 1) return 1;

  const BigInt a = Q.A / N;
  if (gcd(gcd(a, Q.B), gcd(Q.C, delta)) > 1) return 0;

  // Try each factorization N = N₁N₂ and a growing box of (x, y) until some
  // represented value is coprime to Δ; (Δ|n) is then the character value.
  for (long box = 4; box <= 64; box *= 4) {
    for (long n1 = 1; n1 <= N; ++n1) {
      if (N % n1 != 0) continue;
      long n2 = N / n1;
      QuadForm G{n1 * a, Q.B, n2 * Q.C};
      for (long x = -box; x <= box; ++x)
        for (long y = 0; y <= box; ++y) {
          if (x == 0 && y == 0) continue;
          BigInt n = G.eval(BigInt(x), BigInt(y));
          if (gcd(n, delta) != 1) continue;
          return mpz_kronecker(delta.get_mpz_t(), n.get_mpz_t());
        }
    }
  }
  throw std::runtime_error("genus_char: no represented value coprime to delta found");
}

// ── Twisted divisors ─────────────────────────────────────────────────────────

HeegnerDivisor twisted_divisor(const BigInt& delta, const BigInt& r, long N, const BigInt& d,
                               const BigInt& h) {
  const BigInt D = delta * d;
  if (D >= 0) throw std::invalid_argument("twisted_divisor: need delta·d < 0");
  const BigInt rh = r * h;
  if ((rh * rh - D) % (4 * N) != 0)
    throw std::invalid_argument("twisted_divisor: (rh)² ≢ Δd (mod 4N)");

  HeegnerDivisor div;
  div.degree = BigRat(0);
  for (const auto& Q : enumerate_classes(N, D, rh)) {
    DivisorTerm term;
    term.form = Q;
    term.chi = genus_char(delta, N, Q);
    term.w = stabilizer_order(N, Q);
    div.degree = div.degree + BigRat(term.chi, term.w);
    div.terms.push_back(term);
  }
  return div;
}

BigInt smallest_sqrt_mod(const BigInt& v, const BigInt& m) {
  if (m <= 0) throw std::invalid_argument("smallest_sqrt_mod: modulus must be positive");
  BigInt target = v % m;
  if (target < 0) target += m;
  for (BigInt r = 0; r < m; ++r)
    if ((r * r) % m == target) return r;
  throw std::invalid_argument("smallest_sqrt_mod: value is not a square mod m");
}

}  // namespace thp
