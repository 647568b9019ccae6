#pragma once
// ── quadforms: binary quadratic forms, Γ₀(N)-classes, genus characters ────────
//
// Positive definite integral forms Q = [A, B, C] = AX² + BXY + CY² of
// discriminant D = B² − 4AC < 0. The level-N families Q_{D,h} consist of the
// forms with N | A and B ≡ h (mod 2N); Γ₀(N) acts on them with finitely many
// orbits, and the weighted orbit count Σ 1/w_Q equals the Hurwitz class
// number H(|D|) — used here as a hard completeness check on the enumeration.

#include "thp/arith.hpp"

#include <vector>

namespace thp {

// ── Forms ────────────────────────────────────────────────────────────────────

/** Integral binary quadratic form AX² + BXY + CY². */
struct QuadForm {
  BigInt A, B, C;

  BigInt disc() const { return B * B - 4 * A * C; }
  /** Value AX² + BXY + CY² at integers (x, y). */
  BigInt eval(const BigInt& x, const BigInt& y) const {
    return A * x * x + B * x * y + C * y * y;
  }

  bool operator==(const QuadForm& o) const = default;
};

/** Root of AX² + BX + C in the upper half-plane: (−B + i√|D|)/(2A). */
BigComplex heegner_tau(const QuadForm& Q, int digits);

// ── Hurwitz class numbers (SL₂(ℤ) side; completeness oracle) ─────────────────

/**
 * Hurwitz class number H(n): the number of SL₂(ℤ)-classes of positive
 * definite forms of discriminant −n, counting classes with extra automorphisms
 * (multiples of X²+Y² resp. X²+XY+Y²) with weight 1/2 resp. 1/3.
 * Returns 0 for n ≡ 1, 2 (mod 4); throws for n ≤ 0.
 */
BigRat hurwitz_H(long n);

// ── Γ₀(N) orbit machinery ────────────────────────────────────────────────────

/**
 * Whether Q1 ∘ M = Q2 for some M = (p q; r s) ∈ Γ₀(N) (N | r, det 1).
 * Exact bounded search: positive definiteness confines r² ≤ 4·A₁A₂/|D| and,
 * per r, confines p to a short interval.
 */
bool gamma0_equivalent(long N, const QuadForm& Q1, const QuadForm& Q2);

/**
 * Order w of the stabilizer of Q in Γ₀(N)/{±1}: 2 or 3 when the primitive
 * part of Q has discriminant −4 or −3 AND its leading coefficient is
 * divisible by N (so the extra automorph lies in Γ₀(N)); otherwise 1.
 */
long stabilizer_order(long N, const QuadForm& Q);

/**
 * Representatives of Q_{D,h}/Γ₀(N) (N | A, A > 0, B ≡ h mod 2N, disc D < 0),
 * sorted by (A, B); each class is represented by its enumeration-minimal form.
 * Completeness is certified by the exact mass identity Σ 1/w = H(|D|); the
 * search radius doubles until the identity holds, and throws if it never does.
 */
std::vector<QuadForm> enumerate_classes(long N, const BigInt& D, const BigInt& h);

// ── Genus characters and twisted divisors ────────────────────────────────────

/**
 * Genus character χ_Δ(Q) ∈ {−1, 0, +1} for Q = [Na, B, C] of discriminant
 * divisible by Δ (a fundamental discriminant > 0 with gcd(Δ, N) allowed > 1):
 * 0 when gcd(a, B, C, Δ) > 1, else the Kronecker symbol (Δ|n) for any n
 * coprime to Δ represented by [N₁a, B, N₂C] with N₁N₂ = N; the value is
 * independent of the factorization and of the represented n.
 */
int genus_char(const BigInt& delta, long N, const QuadForm& Q);

/** One orbit's contribution to a Heegner divisor: form, χ_Δ, stabilizer w. */
struct DivisorTerm {
  QuadForm form;
  int chi = 0;
  long w = 1;
};

/** A twisted Heegner divisor Σ χ_Δ(Q)·(τ_Q)/w_Q on X₀(N). */
struct HeegnerDivisor {
  std::vector<DivisorTerm> terms;  // one per Γ₀(N)-class, χ = 0 included
  BigRat degree;                   // Σ χ/w; 0 unless Δ = 1, then H(|d|)
};

/**
 * The divisor supported on Q_{Δd, rh}/Γ₀(N) with multiplicities χ_Δ(Q)/w_Q.
 * Requires Δd < 0 and (rh)² ≡ Δd (mod 4N).
 */
HeegnerDivisor twisted_divisor(const BigInt& delta, const BigInt& r, long N, const BigInt& d,
                               const BigInt& h);

/** Smallest nonnegative r with r² ≡ v (mod m); throws if none exists. */
BigInt smallest_sqrt_mod(const BigInt& v, const BigInt& m);

}  // namespace thp
