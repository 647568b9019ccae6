// ── report: data ingestion, verification pipelines, JSON reports ─────────────

#include "thp/report.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "thp/heegner.hpp"
#include "thp/periods.hpp"
#include "thp/quadforms.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thp {

namespace {

using nlohmann::ordered_json;

/** Positive fundamental discriminants, with 1 allowed as the trivial one. */
bool valid_table_delta(long d) {
  if (d == 1) return true;
  if (d <= 0) return false;
  long m = d % 4 == 0 ? d / 4 : d;
  for (long p = 2; p * p <= m; ++p)
    if (m % (p * p) == 0) return false;
  if (d % 4 == 1) return true;
  if (d % 4 != 0) return false;
  const long q = (d / 4) % 4;
  return q == 2 || q == 3;
}

long to_long(const BigInt& v) {
  if (!v.fits_slong_p()) throw std::runtime_error("value does not fit in a machine long");
  return mpz_get_si(v.get_mpz_t());
}

/** Strip spaces and a trailing '\r' (CSV files may arrive with CRLF). */
std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int row_precision(long delta, const RunOptions& opts) {
  if (opts.prec_explicit) return opts.prec;
  if (opts.points == PointSource::kPipeline && (delta == 53 || delta == 77 || delta == 101))
    return std::max(opts.prec, 250);
  return opts.prec;
}

/**
 * Evaluate one row per Δ, concurrently but assembled in input order. A row
 * that throws becomes {"delta", "error"} and the run continues. Wall times
 * are attached only on request so default reports stay byte-identical.
 */
std::vector<ordered_json> run_rows(const std::vector<long>& deltas, const RunOptions& opts,
                                   const std::function<ordered_json(long, int)>& row_fn) {
  std::vector<ordered_json> rows(deltas.size());
#ifdef _OPENMP
  if (opts.threads > 0) omp_set_num_threads(opts.threads);
#endif
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(deltas.size()); ++i) {
    const auto start = std::chrono::steady_clock::now();
    ordered_json row;
    try {
      row = row_fn(deltas[i], row_precision(deltas[i], opts));
    } catch (const std::exception& e) {
      row = ordered_json{{"delta", deltas[i]}, {"error", std::string(e.what())}};
    }
    if (opts.timings)
      row["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    rows[i] = std::move(row);
  }
  return rows;
}

ordered_json envelope(const std::string& command, const CurveConfig* cfg,
                      const RunOptions& opts) {
  ordered_json rep;
  rep["command"] = command;
  if (cfg) {
    rep["curve"] = cfg->label;
    rep["level"] = cfg->N;
  }
  rep["precision"] = opts.prec;
  return rep;
}

/** The fixed principal part q^{−3} on the smallest component root. */
std::vector<PrincipalTerm> default_principal(long N) {
  const BigInt h0 = smallest_sqrt_mod(BigInt(-3), BigInt(4 * N));
  return {PrincipalTerm{-3, to_long(h0), BigInt(1)}};
}

}  // namespace

// ── Input files ──────────────────────────────────────────────────────────────

const CoeffRow* CoeffTable::find(long delta) const {
  for (const CoeffRow& row : rows)
    if (row.delta == delta) return &row;
  return nullptr;
}

CurveConfig load_curve_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_curve_config: cannot open " + path);
  const ordered_json j = ordered_json::parse(in);

  CurveConfig cfg;
  cfg.label = j.at("label").get<std::string>();
  cfg.N = j.at("N").get<long>();
  const auto& a = j.at("long");
  if (!a.is_array() || a.size() != 5)
    throw std::runtime_error("load_curve_config: `long` must be [a1,a2,a3,a4,a6]");
  cfg.model = LongModel{BigInt(a[0].get<long>()), BigInt(a[1].get<long>()),
                        BigInt(a[2].get<long>()), BigInt(a[3].get<long>()),
                        BigInt(a[4].get<long>())};
  cfg.analytic = ShortModel{BigRat(j.at("short").at("g2").get<std::string>()),
                            BigRat(j.at("short").at("g3").get<std::string>())};
  cfg.fricke = j.at("fricke").get<int>();
  cfg.manin = BigInt(j.at("manin").get<long>());

  if (cfg.N <= 0) throw std::runtime_error("load_curve_config: N must be positive");
  if (cfg.fricke != 1 && cfg.fricke != -1)
    throw std::runtime_error("load_curve_config: fricke must be +1 or -1");
  if (cfg.manin == 0) throw std::runtime_error("load_curve_config: manin must be nonzero");
  if (!(long_to_short(cfg.model).first == cfg.analytic))
    throw std::runtime_error(
        "load_curve_config: short model does not match the long model for " + cfg.label);
  return cfg;
}

CoeffTable load_coeff_csv(const std::string& path, long N) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_coeff_csv: cannot open " + path);

  CoeffTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "delta,c_plus,digits")
        throw std::runtime_error("load_coeff_csv: expected header `delta,c_plus,digits`");
      header_seen = true;
      continue;
    }
    std::istringstream fields(line);
    std::string d_str, c_str, g_str;
    if (!std::getline(fields, d_str, ',') || !std::getline(fields, c_str, ',') ||
        !std::getline(fields, g_str))
      throw std::runtime_error("load_coeff_csv: malformed row: " + line);

    CoeffRow row;
    row.delta = std::stol(strip(d_str));
    row.c_plus = strip(c_str);
    row.digits = std::stoi(strip(g_str));

    if (row.digits < 20)
      throw std::runtime_error("load_coeff_csv: delta " + std::to_string(row.delta) +
                               " carries fewer than 20 digits");
    if (!valid_table_delta(row.delta))
      throw std::runtime_error("load_coeff_csv: delta " + std::to_string(row.delta) +
                               " is not a positive fundamental discriminant");
    try {
      smallest_sqrt_mod(BigInt(row.delta), BigInt(4 * N));
    } catch (const std::exception&) {
      throw std::runtime_error("load_coeff_csv: delta " + std::to_string(row.delta) +
                               " is not a square modulo 4N");
    }
    BigReal parsed(row.c_plus, row.digits);  // validates the decimal string
    (void)parsed;
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::runtime_error("load_coeff_csv: no header found in " + path);
  return table;
}

std::vector<PointFixture> load_point_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_point_fixtures: cannot open " + path);
  const ordered_json j = ordered_json::parse(in);
  const ordered_json* arr = nullptr;
  if (j.is_array())
    arr = &j;
  else if (j.contains("points") && j.at("points").is_array())
    arr = &j.at("points");
  else
    throw std::runtime_error("load_point_fixtures: expected an array or {\"points\": [...]}");

  std::vector<PointFixture> fixtures;
  for (const auto& e : *arr) {
    PointFixture f;
    f.delta = e.at("delta").get<long>();
    f.model = e.at("model").get<std::string>();
    if (f.model != "E_delta" && f.model != "W_delta")
      throw std::runtime_error("load_point_fixtures: unknown model tag " + f.model);
    f.x = BigRat(e.at("x").get<std::string>());
    f.y = BigRat(e.at("y").get<std::string>());
    f.t = e.contains("t") ? BigRat(e.at("t").get<std::string>()) : BigRat(0);
    fixtures.push_back(std::move(f));
  }
  return fixtures;
}

const PointFixture* find_fixture(const std::vector<PointFixture>& fixtures, long delta) {
  for (const PointFixture& f : fixtures)
    if (f.delta == delta) return &f;
  return nullptr;
}

CoeffProvider make_provider(const CoeffTable& table, long N) {
  const CoeffTable* t = &table;
  return [t, N](long n, long h) -> std::optional<BigReal> {
    const CoeffRow* row = t->find(n);
    if (!row) return std::nullopt;
    // The table stores c⁺(n, r) for the canonical root r; the value answers
    // (n, h) exactly when h ≡ ±r (mod 2N).
    BigInt r;
    try {
      r = smallest_sqrt_mod(BigInt(n), BigInt(4 * N));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    const long two_n = 2 * N;
    const long rl = to_long(r) % two_n;
    const long hm = ((h % two_n) + two_n) % two_n;
    if (hm != rl && hm != (two_n - rl) % two_n) return std::nullopt;
    return BigReal(row->c_plus, row->digits);
  };
}

std::string default_data_path(const std::string& name) {
  if (const char* dir = std::getenv("THP_DATA_DIR"))
    return std::string(dir) + "/" + name;
  return "data/" + name;
}

// ── Pipelines ────────────────────────────────────────────────────────────────

ordered_json run_periods(const CurveConfig& cfg, const std::vector<long>& deltas,
                         const RunOptions& opts) {
  ordered_json rep = envelope("periods", &cfg, opts);
  auto rows = run_rows(deltas, opts, [&](long delta, int prec) {
    const auto [tw, map] = twist(cfg.analytic, BigInt(delta));
    const PeriodLattice L(tw, prec);
    ordered_json row;
    row["delta"] = delta;
    row["g2"] = tw.g2.str();
    row["g3"] = tw.g3.str();
    row["mu"] = L.mu().decimal(prec);
    row["nu_im"] = L.nu_im().decimal(prec);
    row["omega"] = L.omega().decimal(prec);
    row["components"] = L.components();
    row["precision"] = prec;
    return row;
  });
  rep["rows"] = std::move(rows);
  return rep;
}

ordered_json run_heegner(const CurveConfig& cfg, const std::vector<long>& deltas,
                         const RunOptions& opts) {
  RunOptions o = opts;
  o.points = PointSource::kPipeline;
  ordered_json rep = envelope("heegner", &cfg, o);
  rep["points"] = "pipeline";

  const ModularParam mp = make_modular_param(cfg.model, cfg.N, cfg.fricke, cfg.manin);
  const std::vector<PrincipalTerm> principal = default_principal(cfg.N);
  auto rows = run_rows(deltas, o, [&](long delta, int prec) {
    const BigInt D(delta);
    const BigInt r = smallest_sqrt_mod(D, BigInt(4 * cfg.N));
    const HeegnerPointResult res = heegner_point(mp, principal, D, r, prec);
    ordered_json row;
    row["delta"] = delta;
    row["r"] = r.get_str();
    row["model"] = "E_delta";
    row["x"] = res.point.x.str();
    row["y"] = res.point.y.str();
    row["shifts_scanned"] = res.shifts_scanned;
    row["precision"] = prec;
    return row;
  });
  rep["rows"] = std::move(rows);
  return rep;
}

namespace {

/** Shared body of run_table2/run_table3; `minimal` selects the W_Δ path. */
ordered_json run_table(const CurveConfig& cfg, const CoeffTable& coeffs,
                       const std::vector<long>& deltas, const RunOptions& opts, bool minimal) {
  ordered_json rep = envelope(minimal ? "table3" : "table2", &cfg, opts);
  rep["points"] = opts.points == PointSource::kPaper ? "paper" : "pipeline";

  std::vector<PointFixture> fixtures;
  std::optional<ModularParam> mp;
  std::vector<PrincipalTerm> principal;
  if (opts.points == PointSource::kPaper) {
    const std::string path =
        opts.fixtures_path.empty()
            ? default_data_path(minimal ? "points_table3.json" : "points_table2.json")
            : opts.fixtures_path;
    fixtures = load_point_fixtures(path);
    rep["fixtures"] = path;
  } else {
    mp = make_modular_param(cfg.model, cfg.N, cfg.fricke, cfg.manin);
    principal = default_principal(cfg.N);
  }

  auto rows = run_rows(deltas, opts, [&](long delta, int prec) {
    const CoeffRow* c = coeffs.find(delta);
    if (!c)
      throw std::runtime_error("no coefficient entry for delta = " + std::to_string(delta));
    const BigInt D(delta);
    const BigInt r = smallest_sqrt_mod(D, BigInt(4 * cfg.N));

    ordered_json row;
    row["delta"] = delta;
    row["r"] = r.get_str();
    row["source"] = opts.points == PointSource::kPaper ? "paper" : "pipeline";
    row["c_plus"] = c->c_plus;
    row["c_plus_digits"] = c->digits;

    const std::string model_tag = minimal ? "W_delta" : "E_delta";
    CurvePoint P;
    if (opts.points == PointSource::kPaper) {
      const PointFixture* f = find_fixture(fixtures, delta);
      if (!f)
        throw std::runtime_error("no point fixture for delta = " + std::to_string(delta));
      if (f->model != model_tag)
        throw std::runtime_error("fixture for delta = " + std::to_string(delta) +
                                 " lives on " + f->model + ", expected " + model_tag);
      P = CurvePoint(f->x, f->y);
    } else {
      const CurvePoint on_twist = heegner_point(*mp, principal, D, r, prec).point;
      if (minimal) {
        const auto [W, wmap] = minimal_twist_model(cfg.analytic, D);
        P = wmap.apply(on_twist);
      } else {
        P = on_twist;
      }
    }
    row["model"] = model_tag;
    row["x"] = P.x.str();
    row["y"] = P.y.str();

    const BigReal c_plus(c->c_plus, c->digits);
    const BigRat c_E(cfg.manin, BigInt(1));
    const DifferenceResult dr =
        minimal ? difference_wm(cfg.analytic, D, c_plus, P, cfg.fricke, c_E, prec)
                : difference_raw(cfg.analytic, D, c_plus, P, cfg.fricke, c_E, prec);
    if (minimal) row["t"] = dr.t.str();
    row["omega"] = dr.omega.decimal(prec);
    row["period"] = dr.period.decimal(prec);
    row["difference_decimal"] = dr.value.decimal(std::min(prec, std::max(20, c->digits)));
    row["difference"] = dr.recognized ? dr.rational.str() : "unrecognized";
    row["quarter_integer"] = dr.quarter_integer;
    row["half_integer"] = dr.half_integer;
    row["precision"] = prec;
    return row;
  });
  rep["rows"] = std::move(rows);
  return rep;
}

}  // namespace

ordered_json run_table2(const CurveConfig& cfg, const CoeffTable& coeffs,
                        const std::vector<long>& deltas, const RunOptions& opts) {
  return run_table(cfg, coeffs, deltas, opts, /*minimal=*/false);
}

ordered_json run_table3(const CurveConfig& cfg, const CoeffTable& coeffs,
                        const std::vector<long>& deltas, const RunOptions& opts) {
  return run_table(cfg, coeffs, deltas, opts, /*minimal=*/true);
}

ordered_json run_eta_qexp(const CoeffTable& coeffs, long N, long delta, long r, int n_max,
                          const RunOptions& opts) {
  ordered_json rep;
  rep["command"] = "eta-qexp";
  rep["delta"] = delta;
  rep["r"] = r;
  rep["n_max"] = n_max;
  rep["precision"] = opts.prec;
  const CoeffProvider provider = make_provider(coeffs, N);
  const std::vector<BigReal> values = eta_qexp(delta, r, provider, n_max, opts.prec);
  ordered_json out = ordered_json::array();
  for (const BigReal& v : values) out.push_back(v.decimal(std::min(opts.prec, 30)));
  rep["coefficients"] = std::move(out);
  return rep;
}

// ── Self test ────────────────────────────────────────────────────────────────

int run_selftest(int prec, std::ostream& out) {
  int failures = 0;
  const auto check = [&](const std::string& label, bool ok) {
    out << (ok ? "[PASS] " : "[FAIL] ") << label << "\n";
    if (!ok) ++failures;
  };
  const ShortModel E{BigRat(4), BigRat(-1)};
  const LongModel M{BigInt(0), BigInt(0), BigInt(1), BigInt(-1), BigInt(0)};
  const int wd = prec + 10;

  {  // ℘ satisfies (℘′)² = 4℘³ − g₂℘ − g₃ at random points
    const PeriodLattice L(E, prec);
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> mag(80, 420);
    std::uniform_int_distribution<int> flip(0, 1);
    const BigReal tol = BigReal::pow10(-(prec - 15), wd);
    bool ok = true;
    for (int i = 0; i < 20 && ok; ++i) {
      const long an = mag(rng) * (flip(rng) ? 1 : -1);
      const long bn = mag(rng) * (flip(rng) ? 1 : -1);
      const BigComplex z(L.mu() * BigReal(BigRat(an, 1000), wd),
                         L.nu_im() * BigReal(BigRat(bn, 1000), wd));
      const auto [p, pp] = L.wp_pair(z);
      const BigComplex lhs = pp * pp;
      const BigComplex rhs = p * p * p * BigReal(4, wd) - p * BigReal(E.g2, wd) -
                             BigComplex(BigReal(E.g3, wd), BigReal(0L, wd));
      const BigReal pa = p.abs();
      const BigReal scale = BigReal(1, wd) + pa * pa * pa;
      ok = (lhs - rhs).abs() < tol * scale;
    }
    check("wp differential equation at 20 random points", ok);
  }

  {  // exp/log round-trip on both real components
    const PeriodLattice L(E, prec);
    const BigReal tol = BigReal::pow10(-(prec - 10), wd);
    bool ok = true;
    for (const CurvePoint& P :
         {CurvePoint(BigRat(0), BigRat(-1)), CurvePoint(BigRat(1), BigRat(-1))}) {
      const BigComplex z = L.elliptic_log(P);
      const auto [p, pp] = L.elliptic_exp(z);
      ok = ok && (p - BigComplex(BigReal(P.x, wd), BigReal(0L, wd))).abs() < tol &&
           (pp - BigComplex(BigReal(P.y, wd), BigReal(0L, wd))).abs() < tol;
    }
    check("elliptic exp/log round-trip", ok);
  }

  {  // log homomorphism: log P + log P ≡ log 2P (mod L)
    const PeriodLattice L(E, prec);
    const CurvePoint P(BigRat(0), BigRat(-1));
    const CurvePoint P2 = smul(E, BigInt(2), P);
    const BigComplex resid =
        L.reduce_mod_lattice(L.elliptic_log(P) + L.elliptic_log(P) - L.elliptic_log(P2));
    check("elliptic log homomorphism", resid.abs() < BigReal::pow10(-(prec - 10), wd));
  }

  {  // AGM period against direct Gauss–Legendre quadrature
    const int d = 30, wq = 40;
    const PeriodLattice L(E, d);
    const auto f = [&](const BigReal& theta) {
      const auto [s, c] = theta.sin_cos();
      const BigReal under = (L.e1() - L.e3()) - (L.e2() - L.e3()) * s * s;
      return BigComplex(BigReal(1, wq) / under.sqrt(), BigReal(0L, wq));
    };
    const BigReal half_pi = BigReal::pi(wq) / BigReal(2, wq);
    const BigComplex I = integrate_gl(f, BigReal(0L, wq), half_pi, d);
    check("AGM period matches direct quadrature",
          (I.re * BigReal(2, wq) - L.mu()).abs() < BigReal::pow10(-22, wq));
  }

  {  // Δ=1 divisor degrees against the Hurwitz class number oracle
    bool ok = true;
    for (long d : {-3L, -4L, -7L, -11L, -12L}) {
      const BigInt h = smallest_sqrt_mod(BigInt(d), BigInt(148));
      const HeegnerDivisor div = twisted_divisor(BigInt(1), BigInt(1), 37, BigInt(d), h);
      if (!(div.degree == hurwitz_H(-d))) ok = false;
    }
    check("twisted divisor degree equals Hurwitz class number at delta = 1", ok);
  }

  {  // Hasse bound |a_p| ≤ 2√p for p < 100
    bool ok = true;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L,
                   53L, 59L, 61L, 67L, 71L, 73L, 79L, 83L, 89L, 97L}) {
      const long a = ap(M, p);
      if (a * a > 4 * p) ok = false;
    }
    check("Hasse bound on a_p for p < 100", ok);
  }

  {  // find_t reproduces the shipped shifts, all in [0,1)
    bool ok = true;
    try {
      const auto fixtures = load_point_fixtures(default_data_path("points_table3.json"));
      if (fixtures.empty()) ok = false;
      for (const PointFixture& f : fixtures) {
        const auto [W, wmap] = minimal_twist_model(E, BigInt(f.delta));
        const BigRat t = find_t(W, CurvePoint(f.x, f.y));
        if (!(t == f.t) || t < BigRat(0) || t >= BigRat(1)) ok = false;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    check("find_t reproduces shipped shifts in [0,1)", ok);
  }

  out << (failures == 0 ? "selftest: all suites passed\n"
                        : "selftest: " + std::to_string(failures) + " suite(s) FAILED\n");
  return failures;
}

}  // namespace thp
