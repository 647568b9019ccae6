#pragma once
// ── arith: exact rationals, arbitrary-precision reals/complexes, recognition ─
//
// Every numeric value carries its precision explicitly (decimal digits).
// There is no hidden global precision state: BigReal stores its own mpfr_t
// with per-value precision, so values are immutable after construction and
// safe to share across threads.

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace thp {

using BigInt = mpz_class;

// ── BigRat ───────────────────────────────────────────────────────────────────

/** Exact rational number. Always canonical: den > 0, gcd(|num|, den) = 1. */
class BigRat {
 public:
  BigRat() : q_(0) {}
  BigRat(long n) : q_(n) {}  // NOLINT: implicit by design, mirrors integer use
  BigRat(long n, long d);
  BigRat(const BigInt& n, const BigInt& d);
  explicit BigRat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /** Parses "p", "p/q", or a plain decimal like "-39.75". Throws on garbage. */
  explicit BigRat(const std::string& s);

  /** Non-throwing variant of the string constructor. */
  static std::optional<BigRat> parse(const std::string& s);

  BigInt num() const { return BigInt(q_.get_num()); }
  BigInt den() const { return BigInt(q_.get_den()); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return q_ == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  BigRat operator-() const { return BigRat(mpq_class(-q_)); }
  BigRat operator+(const BigRat& o) const { return BigRat(mpq_class(q_ + o.q_)); }
  BigRat operator-(const BigRat& o) const { return BigRat(mpq_class(q_ - o.q_)); }
  BigRat operator*(const BigRat& o) const { return BigRat(mpq_class(q_ * o.q_)); }
  BigRat operator/(const BigRat& o) const;

  bool operator==(const BigRat& o) const { return q_ == o.q_; }
  bool operator!=(const BigRat& o) const { return q_ != o.q_; }
  bool operator<(const BigRat& o) const { return q_ < o.q_; }
  bool operator<=(const BigRat& o) const { return q_ <= o.q_; }
  bool operator>(const BigRat& o) const { return q_ > o.q_; }
  bool operator>=(const BigRat& o) const { return q_ >= o.q_; }

  BigRat abs() const { return BigRat(mpq_class(::abs(q_))); }

  /** "p/q", or just "p" when the denominator is 1. */
  std::string str() const;

  /** Fixed-point decimal with exactly `digits` fractional digits (rounded). */
  std::string decimal(int digits) const;

 private:
  mpq_class q_;
};

// ── BigReal ──────────────────────────────────────────────────────────────────

/**
 * Arbitrary-precision real number (MPFR), RAII-managed, with precision stated
 * in decimal digits. Binary ops produce results at the larger of the two
 * operand precisions; MPFR rounds correctly, so the result is faithful at
 * that precision (the documented guard loss of the contract is 0 digits).
 */
class BigReal {
 public:
  /** NaN at `digits` decimal digits of working precision. */
  explicit BigReal(int digits = 20);
  BigReal(long v, int digits);
  BigReal(const BigInt& v, int digits);
  BigReal(const BigRat& v, int digits);
  /** Parses a decimal string at the given precision. */
  BigReal(const std::string& s, int digits);

  BigReal(const BigReal& o);
  BigReal(BigReal&& o) noexcept;
  BigReal& operator=(BigReal o);
  ~BigReal();

  void swap(BigReal& o) noexcept;

  /** Working precision in decimal digits (as requested at construction). */
  int digits() const { return digits_; }
  /** Underlying binary precision. */
  mpfr_prec_t prec_bits() const { return mpfr_get_prec(x_); }
  /** Raw handle for read-only interop. */
  const mpfr_t& raw() const { return x_; }
  mpfr_t& raw_mut() { return x_; }

  static BigReal pi(int digits);
  /** Exact value of p/q? No: correctly rounded at `digits`. */
  static BigReal from_rat(const BigRat& v, int digits) { return BigReal(v, digits); }

  bool is_nan() const { return mpfr_nan_p(x_) != 0; }
  bool is_zero() const { return mpfr_zero_p(x_) != 0; }
  int sign() const { return mpfr_sgn(x_); }

  BigReal operator-() const;
  BigReal operator+(const BigReal& o) const;
  BigReal operator-(const BigReal& o) const;
  BigReal operator*(const BigReal& o) const;
  BigReal operator/(const BigReal& o) const;
  BigReal& operator+=(const BigReal& o) { *this = *this + o; return *this; }
  BigReal& operator-=(const BigReal& o) { *this = *this - o; return *this; }
  BigReal& operator*=(const BigReal& o) { *this = *this * o; return *this; }
  BigReal& operator/=(const BigReal& o) { *this = *this / o; return *this; }

  int cmp(const BigReal& o) const { return mpfr_cmp(x_, o.x_); }
  bool operator==(const BigReal& o) const { return cmp(o) == 0; }
  bool operator<(const BigReal& o) const { return cmp(o) < 0; }
  bool operator<=(const BigReal& o) const { return cmp(o) <= 0; }
  bool operator>(const BigReal& o) const { return cmp(o) > 0; }
  bool operator>=(const BigReal& o) const { return cmp(o) >= 0; }

  BigReal abs() const;
  BigReal sqrt() const;  // throws std::domain_error on negative input
  BigReal exp() const;
  BigReal log() const;  // natural log, throws on non-positive input
  /** Both sin and cos in one MPFR call. */
  std::pair<BigReal, BigReal> sin_cos() const;
  BigReal atan2(const BigReal& x) const;  // atan2(*this, x)
  BigReal floor() const;
  /** Nearest integer, ties away from zero (mpfr_round). */
  BigInt round_to_int() const;
  BigInt floor_to_int() const;

  /** 10^e at this value's precision. */
  static BigReal pow10(long e, int digits);
  /** this * 2^e, exact. */
  BigReal mul_2exp(long e) const;

  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
  /** Exact rational value of the underlying binary float. */
  BigRat to_rat_exact() const;

  /**
   * Fixed-point decimal string `-?d+.d+` with exactly `frac_digits` digits
   * after the point; no exponent notation ever.
   */
  std::string decimal(int frac_digits) const;
  /** Shorthand: decimal(digits()−5), for logs and reports. */
  std::string str() const { return decimal(digits_ > 6 ? digits_ - 5 : 1); }

 private:
  mpfr_t x_;
  int digits_;

  static mpfr_prec_t bits_for(int digits);
  BigReal peer(int digits) const;  // NaN with given decimal digits
};

inline BigReal max(const BigReal& a, const BigReal& b) { return a >= b ? a : b; }
inline BigReal min(const BigReal& a, const BigReal& b) { return a <= b ? a : b; }

// ── BigComplex ───────────────────────────────────────────────────────────────

/** Complex number as a pair of BigReal. Immutable-style value semantics. */
struct BigComplex {
  BigReal re, im;

  explicit BigComplex(int digits = 20) : re(0L, digits), im(0L, digits) {}
  BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}

  int digits() const { return re.digits() > im.digits() ? re.digits() : im.digits(); }

  BigComplex operator-() const { return {-re, -im}; }
  BigComplex operator+(const BigComplex& o) const { return {re + o.re, im + o.im}; }
  BigComplex operator-(const BigComplex& o) const { return {re - o.re, im - o.im}; }
  BigComplex operator*(const BigComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  BigComplex operator/(const BigComplex& o) const;
  BigComplex conj() const { return {re, -im}; }
  BigReal abs2() const { return re * re + im * im; }
  BigReal abs() const { return abs2().sqrt(); }

  BigComplex operator*(const BigReal& s) const { return {re * s, im * s}; }
  BigComplex operator/(const BigReal& s) const { return {re / s, im / s}; }
};

/** e^z for complex z. */
BigComplex cexp(const BigComplex& z);

// ── Recognition ──────────────────────────────────────────────────────────────

/**
 * Continued-fraction rational recognition: returns the first convergent p/q
 * of x with q ≤ max_den and |x − p/q| < tol; nullopt when no convergent
 * qualifies. For exact inputs the walk terminates at the exact value.
 */
std::optional<BigRat> recognize_rational(const BigReal& x, const BigInt& max_den,
                                         const BigReal& tol);

/** Default tolerance 10^(−P/2) at the input's working precision P. */
std::optional<BigRat> recognize_rational(const BigReal& x);

/** Returns k/4 (canonicalized) when |x − k/4| < tol for an integer k. */
std::optional<BigRat> recognize_quarter_integer(const BigReal& x, const BigReal& tol);

}  // namespace thp
