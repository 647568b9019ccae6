#pragma once
// ── heegner: modular parameterization and twisted Heegner points ─────────────
//
// The modular parameterization of a rational elliptic curve of conductor N
// sends τ in the upper half-plane to the elliptic logarithm
//
//     φ(τ) = Σ_{n≥1} (a_n/n)·e^{2πinτ}   (mod L),
//
// where a_n are the L-series coefficients and L is the Néron lattice of the
// short model. Summing φ over a twisted Heegner divisor, scaling by the Manin
// constant, and exponentiating lands on a rational point of the quadratic
// twist E_Δ; this module carries out that pipeline and certifies the result
// exactly on the curve.

#include <memory>
#include <mutex>
#include <vector>

#include "thp/arith.hpp"
#include "thp/curves.hpp"
#include "thp/periods.hpp"
#include "thp/quadforms.hpp"

namespace thp {

// ── Modular parameterization data ────────────────────────────────────────────

/** A rational elliptic curve bundled with its modular data. */
struct ModularParam {
  LongModel model;           // integral model (a-invariants)
  ShortModel analytic;       // short model carrying the Néron lattice
  ModelMap to_analytic;      // coordinate change long → short
  long N = 0;                // conductor = level of the parameterization
  int fricke = 1;            // Fricke involution eigenvalue ε ∈ {−1, +1}
  BigInt manin = BigInt(1);  // Manin constant c_E

  /**
   * a_n for 1 ≤ n ≤ n_max as a prefix copy (index 0 unused). The underlying
   * cache grows on demand and is guarded by a mutex, so concurrent evaluation
   * of divisor entries may share one ModularParam.
   */
  std::vector<long> hecke_prefix(long n_max) const;

 private:
  struct HeckeCache {
    std::mutex mutex;
    std::vector<long> an;
  };
  std::shared_ptr<HeckeCache> cache_ = std::make_shared<HeckeCache>();
};

/**
 * Bundle an integral model with its level and modular constants. The short
 * model and coordinate change are derived; fricke must be ±1 and manin ≠ 0.
 */
ModularParam make_modular_param(const LongModel& E, long N, int fricke, const BigInt& manin);

// ── Elliptic logarithms of modular points ────────────────────────────────────

/**
 * φ(τ) = Σ_{n≥1} (a_n/n)·e^{2πinτ} to `digits` accuracy. The truncation point
 * n_max is chosen so the tail Σ_{n>n_max} n·e^{−2πn·Im τ} stays below
 * 10^{−digits}; throws std::invalid_argument for Im τ ≤ 0 and
 * std::runtime_error when n_max would exceed 10⁷ (move τ to a translate with
 * larger imaginary part first).
 */
BigComplex phi_log(const ModularParam& mp, const BigComplex& tau, int digits);

/**
 * Σ (χ/w)·φ(α_Q) over the divisor's terms, where α_Q is the CM point of the
 * stored class representative (the smallest-A form found by class
 * enumeration, so Im α_Q is maximal within the class). Terms with χ = 0 are
 * skipped. The value is an elliptic logarithm well defined modulo (1/W)L with
 * W = lcm of the contributing stabilizer orders.
 */
BigComplex divisor_log(const ModularParam& mp, const HeegnerDivisor& D, int digits);

// ── Twisted Heegner points ───────────────────────────────────────────────────

/** One term c·q^d of a principal part, attached to component h. */
struct PrincipalTerm {
  long d = -1;               // exponent, d < 0
  long h = 0;                // component index mod 2N with h² ≡ d (mod 4N)
  BigInt coeff = BigInt(1);  // integral coefficient c(d, h)
};

/** Outcome of the twisted Heegner point pipeline. */
struct HeegnerPointResult {
  CurvePoint point;        // rational point, certified exactly on `twisted`
  ShortModel twisted;      // the twisted model v² = 4u³ − Δ²g₂u − Δ³g₃
  BigComplex z;            // elliptic log (base lattice) that exponentiated to it
  long shifts_scanned = 1; // lattice translates examined (W²)
};

/**
 * The twisted Heegner point attached to a principal part Σ c(d,h)·q^d on the
 * twist by the fundamental discriminant Δ > 0 with square root r of Δ mod 4N:
 *
 *   z = c_E · Σ c(d,h) · divisor_log(Z_{Δ,r}(d, h)),
 *
 * followed by exponentiation through the base lattice and the twist map
 * (x, y) ↦ (Δx, Δ^{3/2}y). Because z is only defined modulo (1/W)L, all W²
 * translates z + (aμ + bν)/W are scanned; the one whose image recognizes as a
 * rational point satisfying the twisted curve equation exactly is returned.
 * Throws std::runtime_error (with a retry hint) when no translate or more
 * than one distinct point passes certification.
 */
HeegnerPointResult heegner_point(const ModularParam& mp,
                                 const std::vector<PrincipalTerm>& principal,
                                 const BigInt& delta, const BigInt& r, int digits);

}  // namespace thp
