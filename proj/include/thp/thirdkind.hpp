#pragma once

// ── Differentials of the third kind and their real-locus periods ─────────────
//
// Builds the β(Q) differential on short models, the pole-free minimal-model
// differential with its shift parameter t, the assembled real-locus periods,
// and the rational / quarter-integral period-coefficient differences that the
// verification tables are made of.

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "thp/arith.hpp"
#include "thp/curves.hpp"
#include "thp/periods.hpp"

namespace thp {

// ── ThirdKindDiff ────────────────────────────────────────────────────────────

/**
 * A differential of the third kind with poles at an affine point Q and its
 * negative, represented as
 *
 *   scale · ( k_Q + t ) · ω_model,
 *
 * where the kernel k_Q is y₀/(x−x₀) on short models (ω = dx/y) and
 * (2y₀ + A₁x₀ + A₃)/(x−x₀) on long models (ω = dx/(2y+A₁x+A₃)).  In both
 * representations k_Q·ω has residue +1 at Q and −1 at −Q, so the residue
 * divisor of the differential is scale·((Q) − (−Q)).
 */
struct ThirdKindDiff {
  std::variant<ShortModel, LongModel> model;
  CurvePoint Q;
  BigRat t;      // first-kind shift, multiplies ω inside the parentheses
  BigRat scale;  // overall scalar
};

/**
 * β(Q) = y₀/(2(x−x₀))·dx/y on a short model: scale 1/2, no shift; residue
 * divisor ½((Q)−(−Q)).  Q must be an affine point of E.
 */
ThirdKindDiff beta(const ShortModel& E, const CurvePoint& Q);

// ── Pole-free minimal-model differential ─────────────────────────────────────

/** Intermediate data of the t-search, exposed for verification. */
struct FindTDiagnostics {
  BigInt a, b;            // x₀ = a/b in lowest terms
  BigInt c, d;            // y₀ = c/d in lowest terms
  BigInt dprime, bprime;  // d = b·d′ and b = d′·b′
  BigInt s;               // the unique 0 ≤ s < |d′| with 2c ≡ a·s (mod d′)
  BigInt u;               // u = (2c − a·s)/d′
  bool no_vertical_poles = false;  // content certificate on (u + b′s·x)/(bx − a)
};

/**
 * The shift t = s/d′ ∈ [0,1) making δ_t(P) = (k_P + t)·ω_W pole-free on the
 * integral model: writes x₀ = a/b and y₀ = c/d in lowest terms, factors
 * d = b·d′ and b = d′·b′, and solves 2c ≡ a·s (mod d′) with 0 ≤ s < d′.
 * After clearing, δ_t's y-independent part takes the shape
 * (u + b′s·x)/(bx − a)·ω_W with u ∈ ℤ, and the no-vertical-poles certificate
 * is gcd(content(u, b′s), content(b, −a)) = 1.
 *
 * Requires an integral model W (A₁,…,A₆ ∈ ℤ) and an affine rational point on
 * it; throws std::invalid_argument when the divisibility chain b | d, d′ | b
 * fails, which signals a non-integral model.
 */
BigRat find_t(const LongModel& W, const CurvePoint& P, FindTDiagnostics* diag = nullptr);

/**
 * The pole-free differential attached to P on the integral model W:
 * (1/2)·(k_P + t)·ω_W with t from find_t.  Residue divisor ½((P)−(−P)).
 */
ThirdKindDiff wm_differential(const LongModel& W, const CurvePoint& P);

// ── Periods ──────────────────────────────────────────────────────────────────

/**
 * Real-locus period of a ThirdKindDiff over both components:
 * scale·(2·third_kind_period + t·Ω), evaluated on the short transport when
 * the underlying model is long (both the kernel and ω are preserved by the
 * transport).
 */
BigReal period_of(const ThirdKindDiff& D, int digits, bool parallel = true);

/** Re ∫_{W(ℝ)} of wm_differential(W, P): third-kind period of P plus (t/2)·Ω. */
BigReal period_wm(const LongModel& W, const CurvePoint& P, int digits);

// ── Period-coefficient differences ──────────────────────────────────────────

/** Outcome of one verification row. */
struct DifferenceResult {
  BigReal value;            // Δ·c⁺ − (ε·c_E/Ω(E_Δ))·period, numerically
  BigReal period;           // Re ∫ of the differential over the real locus
  BigReal omega;            // normalizing real period Ω(E_Δ)
  bool recognized = false;  // continued-fraction recognition succeeded
  BigRat rational;          // the recognized value, when recognized
  bool quarter_integer = false;  // recognized and ∈ (1/4)ℤ
  bool half_integer = false;     // recognized and ∈ (1/2)ℤ
  BigRat t;                 // shift used by the period (0 on the raw path)
};

/**
 * Δ·c⁺(εΔ) − (ε·c_E/Ω(E_Δ))·(third-kind period of P on E_Δ), where E_Δ is
 * the short quadratic twist of `base` and P an affine point on it.  The
 * difference is recognized as a rational with a tolerance driven by the
 * precision of c_plus.
 */
DifferenceResult difference_raw(const ShortModel& base, const BigInt& delta,
                                const BigReal& c_plus, const CurvePoint& P, int eps,
                                const BigRat& c_E, int digits);

/**
 * As difference_raw, but with the period of the pole-free minimal-model
 * differential: P lives on W = minimal_twist_model(base, Δ) and the period
 * acquires the (t/2)·Ω shift.  Also reports quarter-integrality.
 */
DifferenceResult difference_wm(const ShortModel& base, const BigInt& delta,
                               const BigReal& c_plus, const CurvePoint& P, int eps,
                               const BigRat& c_E, int digits);

// ── q-expansion generator ────────────────────────────────────────────────────

/** c⁺ lookup: (n, h) ↦ coefficient, or nullopt when the table has no entry. */
using CoeffProvider = std::function<std::optional<BigReal>(long n, long h)>;

/**
 * First n_max Fourier coefficients of the canonical differential attached to
 * (Δ, r): the n-th coefficient is
 *
 *   −sgn(Δ)·√|Δ| · Σ_{d|n} (n/d)·(Δ|d)·c⁺(|Δ|·(n/d)², r·(n/d)),
 *
 * with (Δ|d) the Kronecker symbol.  Δ must be a fundamental discriminant
 * ≠ 1; a provider miss raises an error naming the missing index pair.
 */
std::vector<BigReal> eta_qexp(long delta, long r, const CoeffProvider& provider, int n_max,
                              int digits);

}  // namespace thp
