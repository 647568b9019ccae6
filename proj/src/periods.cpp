#include "thp/periods.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thp {

namespace {

BigReal from_double(double v, int digits) {
  BigReal x(digits);
  mpfr_set_d(x.raw_mut(), v, MPFR_RNDN);
  return x;
}

/** AGM of positive a, b to the working precision. */
BigReal agm(BigReal a, BigReal b, int digits) {
  if (a.sign() <= 0 || b.sign() <= 0) throw std::invalid_argument("agm: needs positive inputs");
  // Quadratic convergence halts at the working precision's ulp; asking for more
  // than `digits − 3` matching digits would spin forever at the rounding floor.
  BigReal tol = BigReal::pow10(-(digits - 3), digits);
  for (int i = 0; i < 300; ++i) {
    BigReal m = (a + b) * BigReal(1, digits) / BigReal(2, digits);
    BigReal g = (a * b).sqrt();
    if ((a - b).abs() < tol * m.abs()) return m;
    a = m;
    b = g;
  }
  throw std::runtime_error("agm: failed to converge");
}

}  // namespace

// ── PeriodLattice ────────────────────────────────────────────────────────────

PeriodLattice::PeriodLattice(const ShortModel& model, int digits)
    : model_(model), digits_(digits) {
  if (digits < 10) throw std::invalid_argument("PeriodLattice: need at least 10 digits");
  BigRat disc = model.disc();
  if (disc.sign() <= 0)
    throw std::invalid_argument(
        "PeriodLattice: the cubic must have three distinct real roots (disc > 0)");

  const int wd = digits + 10;
  BigReal g2(model.g2, wd), g3(model.g3, wd);

  // Trig seeds in double precision: 4x³ − g₂x − g₃ = 0 ⟺ x³ = px + q with
  // p = g₂/4, q = g₃/4; roots 2√(p/3)·cos((acos((q/2)(3/p)^{3/2}) ± 2πk)/3).
  double pd = g2.to_double() / 4.0, qd = g3.to_double() / 4.0;
  if (!(pd > 0)) throw std::invalid_argument("PeriodLattice: positive discriminant needs g2 > 0");
  double md = 2.0 * std::sqrt(pd / 3.0);
  double arg = (qd / 2.0) * std::pow(3.0 / pd, 1.5);
  arg = std::min(1.0, std::max(-1.0, arg));
  double theta = std::acos(arg) / 3.0;

  BigReal roots[3];
  for (int k = 0; k < 3; ++k) {
    double seed = md * std::cos(theta - 2.0 * M_PI * k / 3.0);
    BigReal x = from_double(seed, wd);
    // Newton on f = 4x³ − g₂x − g₃ at full precision.
    BigReal tol = BigReal::pow10(-(digits + 5), wd);
    for (int it = 0; it < 80; ++it) {
      BigReal f = BigReal(4, wd) * x * x * x - g2 * x - g3;
      BigReal fp = BigReal(12, wd) * x * x - g2;
      BigReal step = f / fp;
      x = x - step;
      if (step.abs() < tol * (BigReal(1, wd) + x.abs())) break;
    }
    roots[k] = x;
  }
  // Sort descending.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (roots[j] > roots[i]) std::swap(roots[i], roots[j]);
  e1_ = roots[0];
  e2_ = roots[1];
  e3_ = roots[2];
  BigReal sep = BigReal::pow10(-(digits / 2), wd);
  if ((e1_ - e2_).abs() < sep || (e2_ - e3_).abs() < sep)
    throw std::runtime_error("PeriodLattice: root separation lost — raise the precision");

  BigReal pi = BigReal::pi(wd);
  mu_ = pi / agm((e1_ - e3_).sqrt(), (e1_ - e2_).sqrt(), wd);
  nu_im_ = pi / agm((e1_ - e3_).sqrt(), (e2_ - e3_).sqrt(), wd);
  omega_ = BigReal(components(), wd) * mu_;

  const double bits = digits * 3.3219280948873623 + 16.0;
  const double im_tau = nu_im_.to_double() / mu_.to_double();
  series_terms_ =
      static_cast<long>(std::ceil((bits + 10.0) * 0.6931471805599453 / (2.0 * M_PI * im_tau))) +
      2;
}

std::pair<BigComplex, BigComplex> PeriodLattice::wp_pair(const BigComplex& z) const {
  const int wd = std::max(z.digits(), digits_ + 10);
  const BigReal one(1, wd), two(2, wd);

  // Normalize ẑ = z/μ = s + tτ with τ = i·ν_im/μ; reduce s, t to [−1/2, 1/2].
  BigReal s = z.re / mu_;
  BigReal t = z.im / nu_im_;
  s = s - BigReal(s.round_to_int(), wd);
  t = t - BigReal(t.round_to_int(), wd);

  const BigReal pi = BigReal::pi(wd);
  const BigReal two_pi = two * pi;
  // w = e^{2πi ẑ} with ẑ = s + i·t·ν_im/μ, so 2πiẑ = −2πt·ν_im/μ + 2πis.
  BigComplex w = cexp(BigComplex(-two_pi * t * nu_im_ / mu_, two_pi * s));
  const BigReal q_real = (-two_pi * nu_im_ / mu_).exp();
  const BigComplex q(q_real, BigReal(0, wd));
  const BigComplex cone(one, BigReal(0, wd));

  BigComplex winv = cone / w;
  BigComplex omw = cone - w;
  BigComplex sum_p = w / (omw * omw) + BigComplex(BigReal(1, wd) / BigReal(12, wd), BigReal(0, wd));
  BigComplex sum_pp = w * (cone + w) / (omw * omw * omw);

  BigComplex qn = q;
  for (long n = 1; n <= series_terms_; ++n) {
    BigComplex a = qn * w, b = qn * winv;
    BigComplex oma = cone - a, omb = cone - b, omq = cone - qn;
    sum_p = sum_p + a / (oma * oma) + b / (omb * omb) - (qn + qn) / (omq * omq);
    sum_pp = sum_pp + a * (cone + a) / (oma * oma * oma) - b * (cone + b) / (omb * omb * omb);
    qn = qn * q;
  }

  // ℘ = (2πi)²·sum_p/μ² = −4π²·sum_p/μ²;  ℘′ = (2πi)³·sum_pp/μ³ = −8π³i·sum_pp/μ³.
  BigReal mu2 = mu_ * mu_;
  BigReal scale_p = -(two_pi * two_pi) / mu2;
  BigReal scale_pp = two_pi * two_pi * two_pi / (mu2 * mu_);
  BigComplex wp_val = sum_p * scale_p;
  BigComplex wpp_val = BigComplex(BigReal(0, wd), -scale_pp) * sum_pp;
  return {wp_val, wpp_val};
}

BigComplex PeriodLattice::reduce_mod_lattice(const BigComplex& z) const {
  BigReal m = (z.re / mu_);
  BigReal n = (z.im / nu_im_);
  BigReal re = z.re - BigReal(m.round_to_int(), z.re.digits()) * mu_;
  BigReal im = z.im - BigReal(n.round_to_int(), z.im.digits()) * nu_im_;
  return BigComplex(re, im);
}

BigComplex PeriodLattice::elliptic_log(const CurvePoint& P) const {
  if (P.infinity) throw std::domain_error("elliptic_log: the point at infinity has no log");
  if (!on_curve(model_, P)) throw std::invalid_argument("elliptic_log: point is not on the curve");

  const int wd = digits_ + 10;
  const BigReal x0(P.x, wd), y0(P.y, wd);
  const BigReal tol_band = BigReal::pow10(-(digits_ / 2), wd);
  const BigReal zero(0, wd), two(2, wd);
  const BigReal half_mu = mu_ / two;
  const BigReal half_nu = nu_im_ / two;

  const bool identity_comp = x0 >= e1_ - tol_band;
  const bool egg_comp = !identity_comp && x0 <= e2_ + tol_band && x0 >= e3_ - tol_band;
  if (!identity_comp && !egg_comp)
    throw std::domain_error("elliptic_log: point lies off the real locus");

  // Exact 2-torsion: the roots themselves.
  if (P.y.is_zero()) {
    if ((x0 - e1_).abs() < tol_band) return BigComplex(half_mu, zero);
    if ((x0 - e2_).abs() < tol_band) return BigComplex(half_mu, half_nu);
    return BigComplex(zero, half_nu);
  }

  const BigReal v_im = identity_comp ? zero : half_nu;
  auto wp_at = [&](const BigReal& u) { return wp_pair(BigComplex(u, v_im)); };

  // Bisection bracket on [lo, hi] ⊂ (0, μ/2]. On the identity component
  // ℘(u) decreases from +∞ to e₁; on the oval ℘(u + ν/2) increases e₃ → e₂.
  BigReal lo, hi;
  if (identity_comp) {
    hi = half_mu;
    lo = half_mu;
    for (int i = 0; i < 80; ++i) {
      lo = lo / two;
      if (wp_at(lo).first.re > x0) break;
      if (i == 79) throw std::runtime_error("elliptic_log: failed to bracket the root");
    }
  } else {
    lo = mu_ * BigReal::pow10(-3, wd);
    hi = half_mu;
    while (wp_at(lo).first.re > x0) {
      lo = lo / two;
      if (lo < mu_ * BigReal::pow10(-30, wd))
        throw std::runtime_error("elliptic_log: failed to bracket the oval root");
    }
  }
  const int dir = identity_comp ? -1 : +1;  // sign of d℘/du on the bracket
  for (int i = 0; i < 90; ++i) {
    BigReal mid = (lo + hi) / two;
    BigReal val = wp_at(mid).first.re;
    const bool above = val > x0;
    if ((dir < 0) == above)
      lo = mid;
    else
      hi = mid;
  }
  BigReal u = (lo + hi) / two;

  // Newton polish at full precision.
  const BigReal step_tol = mu_ * BigReal::pow10(-(digits_ + 3), wd);
  for (int it = 0; it < 60; ++it) {
    auto [px, ppx] = wp_at(u);
    BigReal step = (px.re - x0) / ppx.re;
    u = u - step;
    if (step.abs() < step_tol) break;
  }
  if (u <= zero || u >= mu_) u = u - BigReal(((u / mu_).floor_to_int()), wd) * mu_;

  // Of the pair ±z, pick the one matching y = ℘′.
  BigReal yc = wp_at(u).second.re;
  if (yc.sign() != y0.sign()) u = mu_ - u;
  return BigComplex(u, v_im);
}

BigReal real_period(const ShortModel& E, int digits) {
  return PeriodLattice(E, digits).omega();
}

// ── Gauss–Legendre quadrature ────────────────────────────────────────────────

const std::vector<std::pair<BigReal, BigReal>>& gauss_legendre_nodes(int order, int digits) {
  if (order < 2 || order > 256) throw std::invalid_argument("gauss_legendre_nodes: bad order");
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<std::pair<BigReal, BigReal>>>>
      cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(order, digits);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  const int wd = digits + 10;
  auto nodes = std::make_unique<std::vector<std::pair<BigReal, BigReal>>>();
  nodes->reserve(order);
  const BigReal one(1, wd), two(2, wd);
  const BigReal tol = BigReal::pow10(-(digits + 5), wd);
  for (int i = 1; i <= order; ++i) {
    BigReal x = from_double(std::cos(M_PI * (i - 0.25) / (order + 0.5)), wd);
    BigReal dpn(0, wd);
    for (int it2 = 0; it2 < 100; ++it2) {
      // Evaluate P_n and P_{n−1} by the three-term recurrence.
      BigReal p0(1, wd), p1 = x;
      for (int k = 2; k <= order; ++k) {
        BigReal pk = (BigReal(2 * k - 1, wd) * x * p1 - BigReal(k - 1, wd) * p0) /
                     BigReal(k, wd);
        p0 = p1;
        p1 = pk;
      }
      dpn = BigReal(order, wd) * (x * p1 - p0) / (x * x - one);
      BigReal step = p1 / dpn;
      x = x - step;
      if (step.abs() < tol) break;
    }
    BigReal w = two / ((one - x * x) * dpn * dpn);
    nodes->emplace_back(x, w);
  }
  auto [pos, inserted] = cache.emplace(key, std::move(nodes));
  (void)inserted;
  return *pos->second;
}

namespace {

BigComplex integrate_impl(const std::function<BigComplex(const BigReal&)>& f, const BigReal& a,
                          const BigReal& b, int digits, int order, bool parallel) {
  const int wd = digits + 10;
  const auto& nodes = gauss_legendre_nodes(order, digits);
  const BigReal len = b - a;
  const BigReal tol = BigReal::pow10(-digits, wd);
  BigComplex prev(wd);
  bool have_prev = false;

  for (long panels = 4; panels <= (1L << 13); panels *= 2) {
    const long total = panels * order;
    std::vector<BigComplex> vals(static_cast<size_t>(total), BigComplex(wd));
    const BigReal pw = len / BigReal(panels, wd);
    const BigReal half_pw = pw / BigReal(2, wd);
    std::exception_ptr err;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (long idx = 0; idx < total; ++idx) {
      try {
        const long panel = idx / order;
        const int j = static_cast<int>(idx % order);
        BigReal center = a + pw * BigReal(panel, wd) + half_pw;
        BigReal u = center + half_pw * nodes[j].first;
        BigComplex fv = f(u);
        vals[static_cast<size_t>(idx)] =
            BigComplex(fv.re * nodes[j].second * half_pw, fv.im * nodes[j].second * half_pw);
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
        {
          if (!err) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);

    BigComplex sum(wd);
    sum = BigComplex(BigReal(0, wd), BigReal(0, wd));
    for (long idx = 0; idx < total; ++idx) sum = sum + vals[static_cast<size_t>(idx)];

    if (have_prev) {
      BigReal diff = (sum - prev).abs();
      if (diff < tol * (BigReal(1, wd) + sum.abs())) return sum;
    }
    prev = sum;
    have_prev = true;
  }
  throw std::runtime_error("integrate_gl: refinement did not converge");
}

}  // namespace

BigComplex integrate_gl(const std::function<BigComplex(const BigReal&)>& f, const BigReal& a,
                        const BigReal& b, int digits, int order) {
  return integrate_impl(f, a, b, digits, order, true);
}

BigComplex integrate_gl_serial(const std::function<BigComplex(const BigReal&)>& f,
                               const BigReal& a, const BigReal& b, int digits, int order) {
  return integrate_impl(f, a, b, digits, order, false);
}

// ── Third-kind periods ───────────────────────────────────────────────────────

BigReal third_kind_period(const PeriodLattice& L, const CurvePoint& Q, bool parallel) {
  if (Q.infinity) throw std::domain_error("third_kind_period: Q must be affine");
  if (!on_curve(L.model(), Q))
    throw std::invalid_argument("third_kind_period: Q is not on the lattice's curve");

  const int wd = L.digits() + 10;
  const BigReal x0(Q.x, wd), y0(Q.y, wd);
  const BigReal tol_band = BigReal::pow10(-(L.digits() / 2), wd);

  // Contour height: the poles ±log Q sit at Im = 0 (identity component) or
  // Im = ν_im/2 (oval), modulo ν_im; pick v in the middle of a pole-free band.
  const bool identity_comp = x0 >= L.e1() - tol_band;
  const bool egg_comp = !identity_comp && x0 <= L.e2() + tol_band && x0 >= L.e3() - tol_band;
  if (!identity_comp && !egg_comp)
    throw std::domain_error("third_kind_period: Q lies off the real locus");
  const BigReal v = identity_comp ? L.nu_im() / BigReal(2, wd) : L.nu_im() / BigReal(4, wd);

  auto f = [&L, &x0, &y0, &v, wd](const BigReal& u) {
    auto p = L.wp(BigComplex(u, v));
    BigComplex den(p.re - x0, p.im);
    BigComplex num(y0, BigReal(0, wd));
    BigComplex val = num / den;
    return BigComplex(val.re / BigReal(2, wd), val.im / BigReal(2, wd));
  };
  // Gauss–Legendre error decays like (panel width)^(2·order): scaling the
  // order with the precision keeps the panel count (and the number of ℘
  // evaluations) roughly flat as digits grow.
  const int order = std::min(200, std::max(48, L.digits()));
  BigComplex I = integrate_impl(f, BigReal(0, wd), L.mu(), L.digits(), order, parallel);
  return BigReal(L.components(), wd) * I.re;
}

}  // namespace thp
