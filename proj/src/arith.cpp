#include "thp/arith.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <vector>

namespace thp {

// ── BigRat ───────────────────────────────────────────────────────────────────

BigRat::BigRat(long n, long d) {
  if (d == 0) throw std::domain_error("BigRat: zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

BigRat::BigRat(const BigInt& n, const BigInt& d) {
  if (d == 0) throw std::domain_error("BigRat: zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

BigRat::BigRat(const std::string& s) {
  auto r = parse(s);
  if (!r) throw std::invalid_argument("BigRat: cannot parse '" + s + "'");
  q_ = r->q_;
}

std::optional<BigRat> BigRat::parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
    if (!is_int(ns) || !is_int(ds)) return std::nullopt;
    BigInt n(ns), d(ds);
    if (d == 0) return std::nullopt;
    return BigRat(n, d);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (ip == "-" || ip == "+" || ip.empty()) ip += "0";
    if (!is_int(ip) || fp.empty()) return std::nullopt;
    for (char c : fp)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    BigInt whole(ip), frac(fp);
    BigInt n = whole * scale + (neg ? -frac : frac);
    return BigRat(n, scale);
  }
  if (!is_int(s)) return std::nullopt;
  return BigRat(BigInt(s), BigInt(1));
}

BigRat BigRat::operator/(const BigRat& o) const {
  if (o.is_zero()) throw std::domain_error("BigRat: division by zero");
  return BigRat(mpq_class(q_ / o.q_));
}

std::string BigRat::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string BigRat::decimal(int digits) const {
  if (digits < 0) throw std::invalid_argument("BigRat::decimal: negative digits");
  const bool neg = sign() < 0;
  BigInt n = ::abs(num()), d = den();
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  // Round half away from zero on the scaled integer value.
  BigInt scaled = (n * scale * 2 + d) / (2 * d);
  BigInt ip = scaled / scale, fp = scaled % scale;
  std::string fps = fp.get_str();
  fps.insert(fps.begin(), digits - fps.size(), '0');
  std::string out = (neg && (ip != 0 || fp != 0)) ? "-" : "";
  out += ip.get_str();
  out += ".";
  out += digits == 0 ? "0" : fps;
  return out;
}

// ── BigReal ──────────────────────────────────────────────────────────────────

mpfr_prec_t BigReal::bits_for(int digits) {
  if (digits < 1) throw std::invalid_argument("BigReal: precision must be >= 1 digit");
  // 1 digit = log2(10) ≈ 3.3219... bits; +16 guard bits.
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873626)) + 16;
}

BigReal::BigReal(int digits) : digits_(digits) { mpfr_init2(x_, bits_for(digits)); }

BigReal::BigReal(long v, int digits) : digits_(digits) {
  mpfr_init2(x_, bits_for(digits));
  mpfr_set_si(x_, v, MPFR_RNDN);
}

BigReal::BigReal(const BigInt& v, int digits) : digits_(digits) {
  mpfr_init2(x_, bits_for(digits));
  mpfr_set_z(x_, v.get_mpz_t(), MPFR_RNDN);
}

BigReal::BigReal(const BigRat& v, int digits) : digits_(digits) {
  mpfr_init2(x_, bits_for(digits));
  mpfr_set_q(x_, v.raw().get_mpq_t(), MPFR_RNDN);
}

BigReal::BigReal(const std::string& s, int digits) : digits_(digits) {
  mpfr_init2(x_, bits_for(digits));
  if (mpfr_set_str(x_, s.c_str(), 10, MPFR_RNDN) != 0)
    throw std::invalid_argument("BigReal: cannot parse '" + s + "'");
}

BigReal::BigReal(const BigReal& o) : digits_(o.digits_) {
  mpfr_init2(x_, mpfr_get_prec(o.x_));
  mpfr_set(x_, o.x_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& o) noexcept : digits_(o.digits_) {
  mpfr_init2(x_, mpfr_get_prec(o.x_));
  mpfr_swap(x_, o.x_);
}

BigReal& BigReal::operator=(BigReal o) {
  swap(o);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(x_); }

void BigReal::swap(BigReal& o) noexcept {
  mpfr_swap(x_, o.x_);
  std::swap(digits_, o.digits_);
}

BigReal BigReal::peer(int digits) const { return BigReal(digits); }

BigReal BigReal::pi(int digits) {
  BigReal r(digits);
  mpfr_const_pi(r.x_, MPFR_RNDN);
  return r;
}

#define THP_UNARY(op_name, mpfr_fn)                  \
  BigReal BigReal::op_name() const {                 \
    BigReal r(digits_);                              \
    mpfr_fn(r.x_, x_, MPFR_RNDN);                    \
    return r;                                        \
  }

THP_UNARY(operator-, mpfr_neg)
THP_UNARY(abs, mpfr_abs)
THP_UNARY(exp, mpfr_exp)
#undef THP_UNARY

BigReal BigReal::floor() const {
  BigReal r(digits_);
  mpfr_rint_floor(r.x_, x_, MPFR_RNDN);
  return r;
}

BigReal BigReal::sqrt() const {
  if (sign() < 0) throw std::domain_error("BigReal::sqrt: negative input");
  BigReal r(digits_);
  mpfr_sqrt(r.x_, x_, MPFR_RNDN);
  return r;
}

BigReal BigReal::log() const {
  if (sign() <= 0) throw std::domain_error("BigReal::log: non-positive input");
  BigReal r(digits_);
  mpfr_log(r.x_, x_, MPFR_RNDN);
  return r;
}

std::pair<BigReal, BigReal> BigReal::sin_cos() const {
  BigReal s(digits_), c(digits_);
  mpfr_sin_cos(s.x_, c.x_, x_, MPFR_RNDN);
  return {s, c};
}

BigReal BigReal::atan2(const BigReal& x) const {
  int d = digits_ > x.digits_ ? digits_ : x.digits_;
  BigReal r(d);
  mpfr_atan2(r.x_, x_, x.x_, MPFR_RNDN);
  return r;
}

#define THP_BINARY(op_name, mpfr_fn)                              \
  BigReal BigReal::op_name(const BigReal& o) const {              \
    BigReal r(digits_ > o.digits_ ? digits_ : o.digits_);         \
    mpfr_fn(r.x_, x_, o.x_, MPFR_RNDN);                           \
    return r;                                                     \
  }

THP_BINARY(operator+, mpfr_add)
THP_BINARY(operator-, mpfr_sub)
THP_BINARY(operator*, mpfr_mul)
THP_BINARY(operator/, mpfr_div)
#undef THP_BINARY

BigInt BigReal::round_to_int() const {
  BigReal r(digits_);
  mpfr_round(r.x_, x_);
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), r.x_, MPFR_RNDZ);
  return z;
}

BigInt BigReal::floor_to_int() const {
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), x_, MPFR_RNDD);
  return z;
}

BigReal BigReal::pow10(long e, int digits) {
  BigReal r(digits);
  mpfr_set_si(r.x_, 10, MPFR_RNDN);
  mpfr_pow_si(r.x_, r.x_, e, MPFR_RNDN);
  return r;
}

BigReal BigReal::mul_2exp(long e) const {
  BigReal r(*this);
  mpfr_mul_2si(r.x_, r.x_, e, MPFR_RNDN);
  return r;
}

BigRat BigReal::to_rat_exact() const {
  if (is_nan() || mpfr_inf_p(x_)) throw std::domain_error("BigReal::to_rat_exact: non-finite");
  if (is_zero()) return BigRat(0);
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x_);
  return BigRat(q);
}

std::string BigReal::decimal(int frac_digits) const {
  if (is_nan()) return "nan";
  if (frac_digits < 1) frac_digits = 1;
  // Go through the exact rational value of the float so the fixed-point
  // rendering is exact-then-rounded, with no exponent form possible.
  return to_rat_exact().decimal(frac_digits);
}

// ── BigComplex ───────────────────────────────────────────────────────────────

BigComplex BigComplex::operator/(const BigComplex& o) const {
  BigReal d = o.abs2();
  if (d.is_zero()) throw std::domain_error("BigComplex: division by zero");
  return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
}

BigComplex cexp(const BigComplex& z) {
  BigReal r = z.re.exp();
  auto [s, c] = z.im.sin_cos();
  return {r * c, r * s};
}

// ── Recognition ──────────────────────────────────────────────────────────────

std::optional<BigRat> recognize_rational(const BigReal& x, const BigInt& max_den,
                                         const BigReal& tol) {
  if (x.is_nan() || tol.sign() <= 0 || max_den < 1) return std::nullopt;
  const BigRat x_exact = x.to_rat_exact();
  const BigRat tol_r = tol.to_rat_exact();

  // Continued-fraction convergents h_k/k_k of the exact binary value.
  BigRat y = x_exact;
  BigInt h_prev(1), k_prev(0), h(y.num() / y.den()), k(1);  // floor for first term
  // Correct the floor for negative non-integers (mpz division truncates).
  {
    BigInt a0;
    mpz_fdiv_q(a0.get_mpz_t(), y.num().get_mpz_t(), y.den().get_mpz_t());
    h = a0;
  }
  BigRat frac = y - BigRat(h, BigInt(1));
  while (true) {
    if (k <= max_den) {
      BigRat cand(h, k);
      if ((x_exact - cand).abs() < tol_r) return cand;
    } else {
      return std::nullopt;
    }
    if (frac.is_zero()) return std::nullopt;  // walked past the exact value
    y = BigRat(frac.den(), frac.num());       // 1/frac
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), y.num().get_mpz_t(), y.den().get_mpz_t());
    frac = y - BigRat(a, BigInt(1));
    BigInt h_next = a * h + h_prev;
    BigInt k_next = a * k + k_prev;
    h_prev = h; k_prev = k;
    h = h_next; k = k_next;
  }
}

std::optional<BigRat> recognize_rational(const BigReal& x) {
  const int p = x.digits();
  BigInt max_den;
  mpz_ui_pow_ui(max_den.get_mpz_t(), 10, 12);
  return recognize_rational(x, max_den, BigReal::pow10(-(p / 2), p));
}

std::optional<BigRat> recognize_quarter_integer(const BigReal& x, const BigReal& tol) {
  if (x.is_nan() || tol.sign() <= 0) return std::nullopt;
  BigReal four(4, x.digits());
  BigInt k = (x * four).round_to_int();
  BigRat cand(k, BigInt(4));
  BigReal err = (x - BigReal(cand, x.digits())).abs();
  if (err < tol) return cand;
  return std::nullopt;
}

}  // namespace thp
