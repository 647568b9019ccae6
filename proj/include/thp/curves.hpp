#pragma once
// ── curves: elliptic curve models over ℚ, group law, twists, a_p ─────────────
//
// Two model shapes appear throughout:
//   ShortModel   y² = 4x³ − g₂x − g₃          (the analytic/period model)
//   LongModel    y² + A₁xy + A₃y = x³ + A₂x² + A₄x + A₆   (integral models)
// plus affine ModelMaps transporting points between them.

#include "thp/arith.hpp"

#include <vector>

namespace thp {

// ── Models ───────────────────────────────────────────────────────────────────

/** Integral long Weierstrass model. */
struct LongModel {
  BigInt a1, a2, a3, a4, a6;

  BigInt b2() const { return a1 * a1 + 4 * a2; }
  BigInt b4() const { return 2 * a4 + a1 * a3; }
  BigInt b6() const { return a3 * a3 + 4 * a6; }
  BigInt b8() const {
    return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  }
  BigInt c4() const { return b2() * b2() - 24 * b4(); }
  BigInt c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
  BigInt disc() const {
    BigInt B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  }
  BigRat j() const;

  bool operator==(const LongModel& o) const = default;
};

/** Short model y² = 4x³ − g₂x − g₃. */
struct ShortModel {
  BigRat g2, g3;

  BigRat disc() const { return g2 * g2 * g2 - BigRat(27) * g3 * g3; }
  BigRat j() const;

  bool operator==(const ShortModel& o) const = default;
};

// ── Points ───────────────────────────────────────────────────────────────────

/** A rational point: infinity, or affine (x, y). */
struct CurvePoint {
  bool infinity = true;
  BigRat x, y;

  CurvePoint() = default;
  CurvePoint(BigRat px, BigRat py) : infinity(false), x(std::move(px)), y(std::move(py)) {}
  static CurvePoint at_infinity() { return CurvePoint(); }

  bool operator==(const CurvePoint& o) const {
    if (infinity != o.infinity) return false;
    return infinity || (x == o.x && y == o.y);
  }
};

bool on_curve(const ShortModel& E, const CurvePoint& P);
bool on_curve(const LongModel& E, const CurvePoint& P);

// ── Model maps ───────────────────────────────────────────────────────────────

/**
 * Affine substitution between models:
 *   x' = mx·x + cx
 *   y' = (my·y + ml·x + cy) · √hroot
 * with rational data; hroot = 1 for honest ℚ-isomorphisms and hroot = Δ for
 * the quadratic-twist map (x,y) ↦ (Δx, Δ·√Δ·y), where my = Δ.
 */
struct ModelMap {
  BigRat mx, cx;
  BigRat my, ml, cy;
  BigInt hroot = BigInt(1);

  bool is_rational() const { return hroot == 1; }

  /** Transport a rational point (requires is_rational()). */
  CurvePoint apply(const CurvePoint& P) const;

  /** Inverse affine map (requires is_rational()). */
  ModelMap inverse() const;
};

// ── Group law ────────────────────────────────────────────────────────────────

CurvePoint neg(const ShortModel& E, const CurvePoint& P);
CurvePoint add(const ShortModel& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint smul(const ShortModel& E, const BigInt& n, const CurvePoint& P);

CurvePoint neg(const LongModel& E, const CurvePoint& P);
CurvePoint add(const LongModel& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint smul(const LongModel& E, const BigInt& n, const CurvePoint& P);

// ── Model transport ──────────────────────────────────────────────────────────

/**
 * Completed-square short form of a long model: ξ = x + b₂/12, η = 2y + A₁x + A₃,
 * giving η² = 4ξ³ − g₂ξ − g₃ with g₂ = c₄/12, g₃ = c₆/216.
 * Returns the short model and the map long → short.
 */
std::pair<ShortModel, ModelMap> long_to_short(const LongModel& E);

/**
 * Quadratic twist E_Δ: g₂ ↦ Δ²g₂, g₃ ↦ Δ³g₃ (so v² = 4u³ − Δ²g₂u − Δ³g₃),
 * with map (x,y) ↦ (Δx, Δ^{3/2}y).
 */
std::pair<ShortModel, ModelMap> twist(const ShortModel& E, const BigInt& delta);

/**
 * Minimal integral model W_Δ for the twist family of E₃₇ (g₂=4, g₃=−1), per
 * the three congruence classes of Δ, together with the map E_Δ(short) → W_Δ.
 * Throws std::invalid_argument for other base curves with a message that a
 * manual model must be supplied.
 */
std::pair<LongModel, ModelMap> minimal_twist_model(const ShortModel& base, const BigInt& delta);

// ── Point counting ───────────────────────────────────────────────────────────

enum class ReductionKind { kGood, kMultiplicative, kAdditive };

/**
 * Trace of Frobenius a_p. Good reduction: a_p = p + 1 − #E(𝔽_p) via an O(p)
 * character sum (p = 2 by exhaustive enumeration). Multiplicative reduction:
 * a_p = ±1 (split/nonsplit). Additive reduction: 0, with kind flagged.
 * Enforces |a_p| ≤ 2√p for good p.
 */
long ap(const LongModel& E, long p, ReductionKind* kind = nullptr);

/**
 * a_n for 1 ≤ n ≤ n_max: Hecke recursion at prime powers
 * (good p: a_{p^{k+1}} = a_p·a_{p^k} − p·a_{p^{k−1}}; bad p: a_{p^k} = a_p^k)
 * and multiplicativity. Index 0 of the result is unused (set to 0).
 */
std::vector<long> an_sequence(const LongModel& E, long n_max);

}  // namespace thp
