// ── tests: modular parameterization and twisted Heegner points ───────────────

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thp/heegner.hpp"

#include <stdexcept>
#include <vector>

using namespace thp;

namespace {

LongModel curve37() {
  return LongModel{BigInt(0), BigInt(0), BigInt(1), BigInt(-1), BigInt(0)};
}

ModularParam param37() { return make_modular_param(curve37(), 37, +1, BigInt(1)); }

BigReal rtol(int digits10, int wd) { return BigReal::pow10(-digits10, wd); }

/** The fixed principal part q^{−3} on component h = 21 (21² ≡ −3 mod 148). */
std::vector<PrincipalTerm> principal_q3() {
  return {PrincipalTerm{-3, 21, BigInt(1)}};
}

/** γτ for γ = (a b; c d) acting by Möbius transformation. */
BigComplex moebius(long a, long b, long c, long d, const BigComplex& tau, int wd) {
  const BigComplex num = tau * BigReal(a, wd) + BigComplex(BigReal(b, wd), BigReal(0L, wd));
  const BigComplex den = tau * BigReal(c, wd) + BigComplex(BigReal(d, wd), BigReal(0L, wd));
  return num / den;
}

}  // namespace

// ── ModularParam construction and Hecke cache ────────────────────────────────

TEST_CASE("make_modular_param derives the analytic model and stores constants") {
  const ModularParam mp = param37();
  CHECK(mp.N == 37);
  CHECK(mp.fricke == 1);
  CHECK(mp.manin == BigInt(1));
  CHECK(mp.analytic == ShortModel{BigRat(4), BigRat(-1)});
  // The coordinate change must carry the integral model onto the short one.
  const CurvePoint gen(BigRat(0), BigRat(0));  // (0,0) lies on y²+y = x³−x
  CHECK(on_curve(mp.model, gen));
  CHECK(on_curve(mp.analytic, mp.to_analytic.apply(gen)));
}

TEST_CASE("hecke_prefix matches an_sequence and grows on demand") {
  const ModularParam mp = param37();
  const auto small = mp.hecke_prefix(10);
  const auto direct = an_sequence(curve37(), 10);
  REQUIRE(small.size() == 11);
  for (int n = 1; n <= 10; ++n) CHECK(small[n] == direct[n]);
  // Growing the cache keeps earlier entries stable.
  const auto larger = mp.hecke_prefix(200);
  REQUIRE(larger.size() == 201);
  for (int n = 1; n <= 10; ++n) CHECK(larger[n] == small[n]);
  CHECK(small[2] == -2);
  CHECK(small[3] == -3);
  CHECK(small[10] == 4);
}

TEST_CASE("make_modular_param and hecke_prefix validate their inputs") {
  CHECK_THROWS_AS(make_modular_param(curve37(), 0, 1, BigInt(1)), std::invalid_argument);
  CHECK_THROWS_AS(make_modular_param(curve37(), 37, 2, BigInt(1)), std::invalid_argument);
  CHECK_THROWS_AS(make_modular_param(curve37(), 37, 1, BigInt(0)), std::invalid_argument);
  const ModularParam mp = param37();
  CHECK_THROWS_AS(mp.hecke_prefix(0), std::invalid_argument);
}

// ── phi_log ──────────────────────────────────────────────────────────────────

TEST_CASE("phi_log vanishes toward the cusp at infinity") {
  const ModularParam mp = param37();
  const BigComplex tall(BigReal(0L, 50), BigReal(10, 50));
  // |φ(10i)| ≈ |a₁|·e^{−20π} ≈ 5·10^{−28}.
  CHECK(phi_log(mp, tall, 40).abs() < rtol(25, 50));
  CHECK(phi_log(mp, tall, 40).abs() > rtol(30, 50));
}

TEST_CASE("phi_log is Gamma0(37)-invariant modulo the Neron lattice") {
  const ModularParam mp = param37();
  const int d = 38;
  const int wd = d + 10;
  const PeriodLattice L(mp.analytic, d);
  const BigComplex tau0(BigReal(BigRat(1, 10), wd), BigReal(BigRat(3, 10), wd));
  const BigComplex v0 = phi_log(mp, tau0, d);

  // γ₁ = (1 0; 37 1) and γ₂ = (5 1; 74 15), both determinant 1 with 37 | c.
  const BigComplex v1 = phi_log(mp, moebius(1, 0, 37, 1, tau0, wd), d);
  CHECK(L.reduce_mod_lattice(v1 - v0).abs() < rtol(d - 8, wd));
  const BigComplex v2 = phi_log(mp, moebius(5, 1, 74, 15, tau0, wd), d);
  CHECK(L.reduce_mod_lattice(v2 - v0).abs() < rtol(d - 8, wd));
}

TEST_CASE("phi_log rejects bad arguments") {
  const ModularParam mp = param37();
  CHECK_THROWS_AS(phi_log(mp, BigComplex(BigReal(1, 40), BigReal(0L, 40)), 30),
                  std::invalid_argument);
  CHECK_THROWS_AS(phi_log(mp, BigComplex(BigReal(0L, 40), BigReal(-1, 40)), 30),
                  std::invalid_argument);
  CHECK_THROWS_AS(phi_log(mp, BigComplex(BigReal(0L, 40), BigReal(5, 40)), 5),
                  std::invalid_argument);
  // Im τ = 10⁻⁹ would need ~10¹⁰ series terms.
  CHECK_THROWS_AS(
      phi_log(mp, BigComplex(BigReal(0L, 40), BigReal(BigRat(1, 1000000000L), 40)), 30),
      std::runtime_error);
}

// ── divisor_log ──────────────────────────────────────────────────────────────

TEST_CASE("divisor_log of the empty divisor is zero") {
  const ModularParam mp = param37();
  CHECK(divisor_log(mp, HeegnerDivisor{}, 30).abs().is_zero());
}

TEST_CASE("divisor_log is odd under negating the divisor") {
  const ModularParam mp = param37();
  const HeegnerDivisor D = twisted_divisor(BigInt(12), BigInt(30), 37, BigInt(-3), BigInt(21));
  HeegnerDivisor neg = D;
  for (DivisorTerm& term : neg.terms) term.chi = -term.chi;
  const BigComplex z = divisor_log(mp, D, 40);
  const BigComplex zn = divisor_log(mp, neg, 40);
  // D + (−D) is the zero divisor; the logs cancel to working precision.
  CHECK((z + zn).abs() < rtol(40, 50));
  CHECK(z.abs() > rtol(5, 50));  // and not because both vanish
}

TEST_CASE("sigma-conjugate divisor gives sgn(delta) times z modulo the lattice") {
  // σ: τ ↦ −τ̄ sends the form [A,B,C] to [A,−B,C], i.e. the divisor with
  // h ↦ −h. The divisor satisfies σZ_{Δ,r}(d,h) = sgn(Δ)·Z_{Δ,r}(d,h); every
  // Δ in this family is positive, so the conjugate log must land on +z mod L
  // (for sgn(Δ) < 0 it would land on −z instead).
  const ModularParam mp = param37();
  const int d = 40;
  const PeriodLattice L(mp.analytic, d);
  for (long delta : {12L, 33L}) {
    const BigInt r = smallest_sqrt_mod(BigInt(delta), BigInt(148));
    const HeegnerDivisor D = twisted_divisor(BigInt(delta), r, 37, BigInt(-3), BigInt(21));
    const HeegnerDivisor Dc = twisted_divisor(BigInt(delta), r, 37, BigInt(-3), BigInt(-21));
    const BigComplex z = divisor_log(mp, D, d);
    const BigComplex zc = divisor_log(mp, Dc, d);
    // Analytically z(σZ) = conj(z(Z)) up to lattice elements …
    CHECK(L.reduce_mod_lattice(zc - z.conj()).abs() < rtol(d - 8, d + 10));
    // … and the divisor log sits on the real locus, so conj(z) ≡ +z mod L.
    CHECK(L.reduce_mod_lattice(zc - z).abs() < rtol(d - 8, d + 10));
  }
}

// ── heegner_point pipeline ───────────────────────────────────────────────────

TEST_CASE("twisted Heegner points land on the published rational points") {
  const ModularParam mp = param37();
  struct Row {
    long delta;
    const char* x;
    const char* y;
    long shifts;
  };
  // Δ=1 carries the weight-1/3 class [37,21,3], so nine translates are
  // scanned; the other discriminants have torsion-free class sets (W = 1).
  const Row rows[] = {
      {1, "0", "-1", 9},     {12, "1", "-34", 1},  {28, "-31", "-2", 1},
      {33, "4", "-137", 1},  {73, "19", "-107", 1},
  };
  for (const Row& row : rows) {
    CAPTURE(row.delta);
    const BigInt delta(row.delta);
    const BigInt r = smallest_sqrt_mod(delta, BigInt(148));
    const HeegnerPointResult res = heegner_point(mp, principal_q3(), delta, r, 60);
    CHECK(res.point.x == BigRat(std::string(row.x)));
    CHECK(res.point.y == BigRat(std::string(row.y)));
    CHECK(res.shifts_scanned == row.shifts);
    // Certified exactly on the twisted model, in exact arithmetic.
    CHECK(on_curve(res.twisted, res.point));
    CHECK(res.twisted == ShortModel{BigRat(4) * BigRat(delta * delta),
                                    BigRat(-1) * BigRat(delta * delta * delta)});
  }
}

TEST_CASE("the recognized point re-exponentiates to z modulo the lattice") {
  const ModularParam mp = param37();
  const int d = 60;
  const BigInt delta(12);
  const HeegnerPointResult res =
      heegner_point(mp, principal_q3(), delta, smallest_sqrt_mod(delta, BigInt(148)), d);
  const PeriodLattice L(mp.analytic, d);
  const auto [wp_val, wp_prime_val] = L.elliptic_exp(res.z);
  const BigReal delta_r(BigRat(delta, BigInt(1)), d + 10);
  CHECK((wp_val * delta_r - BigComplex(BigReal(res.point.x, d + 10), BigReal(0L, d + 10)))
            .abs() < rtol(d - 8, d + 10));
  const BigReal scale = delta_r * delta_r.sqrt();
  CHECK((wp_prime_val * scale - BigComplex(BigReal(res.point.y, d + 10), BigReal(0L, d + 10)))
            .abs() < rtol(d - 10, d + 10));
}

TEST_CASE("doubling the working precision does not change the point") {
  const ModularParam mp = param37();
  const BigInt delta(12);
  const BigInt r = smallest_sqrt_mod(delta, BigInt(148));
  const HeegnerPointResult lo = heegner_point(mp, principal_q3(), delta, r, 60);
  const HeegnerPointResult hi = heegner_point(mp, principal_q3(), delta, r, 120);
  CHECK(lo.point == hi.point);
}

TEST_CASE("conjugate principal component yields the same rational point") {
  // By the sgn(Δ) = +1 conjugation law the h = −21 component produces the
  // same divisor class, hence the same certified point.
  const ModularParam mp = param37();
  const BigInt delta(33);
  const BigInt r = smallest_sqrt_mod(delta, BigInt(148));
  const std::vector<PrincipalTerm> conj = {PrincipalTerm{-3, -21, BigInt(1)}};
  const HeegnerPointResult a = heegner_point(mp, principal_q3(), delta, r, 60);
  const HeegnerPointResult b = heegner_point(mp, conj, delta, r, 60);
  CHECK(a.point == b.point);
}

TEST_CASE("heegner_point validates its inputs") {
  const ModularParam mp = param37();
  CHECK_THROWS_AS(heegner_point(mp, {}, BigInt(12), BigInt(30), 40), std::invalid_argument);
  CHECK_THROWS_AS(heegner_point(mp, principal_q3(), BigInt(-3), BigInt(1), 40),
                  std::invalid_argument);
  CHECK_THROWS_AS(heegner_point(mp, {PrincipalTerm{3, 21, BigInt(1)}}, BigInt(12), BigInt(30), 40),
                  std::invalid_argument);
  // Δ = 5 is not a square modulo 148: the divisor construction must refuse.
  CHECK_THROWS_AS(heegner_point(mp, principal_q3(), BigInt(5), BigInt(1), 40),
                  std::invalid_argument);
}
