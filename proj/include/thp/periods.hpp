#pragma once
// ── periods: lattice data, ℘-functions, elliptic log/exp, period integrals ────
//
// For y² = 4x³ − g₂x − g₃ with three real roots e₁ > e₂ > e₃, the period
// lattice is rectangular: L = ℤμ + ℤν with μ real and ν purely imaginary,
//   μ = π / AGM(√(e₁−e₃), √(e₁−e₂)),   ν = iπ / AGM(√(e₁−e₃), √(e₂−e₃)).
// E(ℝ) has two components: the identity component {℘(u) : u ∈ ℝ} with
// x ≥ e₁, and the bounded oval {℘(u + ν/2)} with e₃ ≤ x ≤ e₂. The real
// period of E(ℝ) is Ω = 2μ.

#include "thp/arith.hpp"
#include "thp/curves.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace thp {

// ── Period lattice and ℘ ─────────────────────────────────────────────────────

class PeriodLattice {
 public:
  /**
   * Computes roots and periods of the model at the given working precision.
   * Throws std::invalid_argument unless the cubic has three distinct real
   * roots (positive discriminant).
   */
  PeriodLattice(const ShortModel& model, int digits);

  const ShortModel& model() const { return model_; }
  int digits() const { return digits_; }
  const BigReal& e1() const { return e1_; }
  const BigReal& e2() const { return e2_; }
  const BigReal& e3() const { return e3_; }
  /** Real lattice generator μ > 0. */
  const BigReal& mu() const { return mu_; }
  /** Imaginary part of the second generator ν = i·nu_im, nu_im > 0. */
  const BigReal& nu_im() const { return nu_im_; }
  /** Number of connected components of E(ℝ); 2 here. */
  int components() const { return 2; }
  /** Real period Ω = ∫_{E(ℝ)} dx/y = 2μ. */
  const BigReal& omega() const { return omega_; }

  /** ℘(z) and ℘′(z) in one pass (q-series after lattice reduction). */
  std::pair<BigComplex, BigComplex> wp_pair(const BigComplex& z) const;
  BigComplex wp(const BigComplex& z) const { return wp_pair(z).first; }
  BigComplex wp_prime(const BigComplex& z) const { return wp_pair(z).second; }

  /** (℘(z), ℘′(z)) = (x, y): the analytic uniformization. */
  std::pair<BigComplex, BigComplex> elliptic_exp(const BigComplex& z) const {
    return wp_pair(z);
  }

  /**
   * z with ℘(z) = x(P), ℘′(z) = y(P) for a real point P: real z ∈ (0, μ) on
   * the identity component (x ≥ e₁), z = u + ν/2 on the oval (e₃ ≤ x ≤ e₂).
   * Throws std::domain_error for points off the real locus.
   */
  BigComplex elliptic_log(const CurvePoint& P) const;

  /** Translate z by lattice vectors into Re ∈ [−μ/2, μ/2), Im ∈ [−ν/2i, ν/2i). */
  BigComplex reduce_mod_lattice(const BigComplex& z) const;

 private:
  ShortModel model_;
  int digits_;
  BigReal e1_, e2_, e3_, mu_, nu_im_, omega_;
  long series_terms_;
};

/** Ω of the model at the given precision (= PeriodLattice(...).omega()). */
BigReal real_period(const ShortModel& E, int digits);

// ── Quadrature ───────────────────────────────────────────────────────────────

/**
 * Gauss–Legendre nodes and weights on [−1, 1] at the given precision,
 * computed once per (order, digits) and cached (thread-safe).
 */
const std::vector<std::pair<BigReal, BigReal>>& gauss_legendre_nodes(int order, int digits);

/**
 * ∫_a^b f(u) du by composite Gauss–Legendre with panel doubling until two
 * consecutive refinements agree to ~10^(−digits). The parallel variant maps
 * node evaluations across OpenMP threads and folds the stored values in a
 * fixed order, so serial and parallel results are bit-identical.
 * Throws std::runtime_error when refinement fails to converge.
 */
BigComplex integrate_gl(const std::function<BigComplex(const BigReal&)>& f, const BigReal& a,
                        const BigReal& b, int digits, int order = 48);
BigComplex integrate_gl_serial(const std::function<BigComplex(const BigReal&)>& f,
                               const BigReal& a, const BigReal& b, int digits, int order = 48);

// ── Third-kind periods ───────────────────────────────────────────────────────

/**
 * Re ∫_{E(ℝ)} y₀/(2(x − x₀)) · dx/y for a real point Q = (x₀, y₀) on the
 * lattice's curve: the real-locus period of the third-kind differential with
 * residue divisor ½(Q) − ½(−Q). Poles on the cycle are handled by shifting
 * the contour off the real axis; the real part is independent of the shift.
 */
BigReal third_kind_period(const PeriodLattice& L, const CurvePoint& Q, bool parallel = true);

}  // namespace thp
