#pragma once
// ── report: data ingestion, verification pipelines, JSON reports ─────────────
//
// Everything the CLI does lives here as library functions so the pipelines
// can be driven and byte-compared in tests. Reports are nlohmann JSON objects
// with insertion order preserved; all decimals are emitted as plain strings,
// and default runs contain no volatile fields (wall times are opt-in), so a
// report is byte-identical across runs and thread counts.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "thp/curves.hpp"
#include "thp/thirdkind.hpp"

namespace thp {

// ── Input files ──────────────────────────────────────────────────────────────

/** Curve description: integral model plus level and modular constants. */
struct CurveConfig {
  std::string label;
  long N = 0;
  LongModel model;
  ShortModel analytic;
  int fricke = 1;
  BigInt manin = BigInt(1);
};

/**
 * Load a curve config JSON {label, N, long:[a1,a2,a3,a4,a6], short:{g2,g3},
 * fricke, manin}. The short model is cross-checked against the long one.
 */
CurveConfig load_curve_config(const std::string& path);

/** One row of the coefficient table: c⁺(Δ, r) as a decimal string. */
struct CoeffRow {
  long delta = 0;
  std::string c_plus;
  int digits = 0;
};

/** The published coefficient table (read from CSV, never computed here). */
struct CoeffTable {
  std::vector<CoeffRow> rows;
  const CoeffRow* find(long delta) const;
};

/**
 * Load a coefficient CSV with header `delta,c_plus,digits`; lines starting
 * with '#' are comments. Validates that each Δ is a fundamental discriminant,
 * a square mod 4N, and carries at least 20 digits.
 */
CoeffTable load_coeff_csv(const std::string& path, long N);

/** A published point fixture on E_Δ ("E_delta") or W_Δ ("W_delta"). */
struct PointFixture {
  long delta = 0;
  std::string model;
  BigRat x, y, t;
};

/** Load a fixtures JSON ({"points": [...]} or a bare array). */
std::vector<PointFixture> load_point_fixtures(const std::string& path);

const PointFixture* find_fixture(const std::vector<PointFixture>& fixtures, long delta);

/**
 * c⁺ lookup backed by the coefficient table: answers (n, h) when the table
 * has Δ = n and h ≡ ±r (mod 2N) for the canonical root r of n mod 4N.
 * The table must outlive the provider.
 */
CoeffProvider make_provider(const CoeffTable& table, long N);

/** "$THP_DATA_DIR/<name>" when the environment variable is set, else "data/<name>". */
std::string default_data_path(const std::string& name);

// ── Pipelines ────────────────────────────────────────────────────────────────

enum class PointSource { kPaper, kPipeline };

struct RunOptions {
  int prec = 160;               // working precision in decimal digits
  bool prec_explicit = false;   // true when the user passed --prec
  PointSource points = PointSource::kPaper;
  std::string fixtures_path;    // fixture file for PointSource::kPaper
  bool timings = false;         // add wall_ms per row (breaks byte-identity)
  int threads = 0;              // >0: cap the OpenMP team for row processing
};

/** μ, ν, Ω of the twists E_Δ for each requested Δ. */
nlohmann::ordered_json run_periods(const CurveConfig& cfg, const std::vector<long>& deltas,
                                   const RunOptions& opts);

/** Pipeline-computed twisted Heegner points for each requested Δ. */
nlohmann::ordered_json run_heegner(const CurveConfig& cfg, const std::vector<long>& deltas,
                                   const RunOptions& opts);

/**
 * Verification of Δ·c⁺(Δ) − (ε·c_E/Ω(E_Δ))·(period of α_Δ over E_Δ(ℝ)) for
 * each Δ: points from fixtures or the Heegner pipeline, differences
 * recognized as exact rationals. Per-row failures are recorded in the row and
 * the run continues. Rows are processed concurrently, assembled in Δ order.
 */
nlohmann::ordered_json run_table2(const CurveConfig& cfg, const CoeffTable& coeffs,
                                  const std::vector<long>& deltas, const RunOptions& opts);

/** As run_table2, but on the minimal models W_Δ with the pole-free shift t. */
nlohmann::ordered_json run_table3(const CurveConfig& cfg, const CoeffTable& coeffs,
                                  const std::vector<long>& deltas, const RunOptions& opts);

/** First n_max q-expansion coefficients of the canonical differential. */
nlohmann::ordered_json run_eta_qexp(const CoeffTable& coeffs, long N, long delta, long r,
                                    int n_max, const RunOptions& opts);

/** Quick property suites over all modules; prints one line each, returns #failures. */
int run_selftest(int prec, std::ostream& out);

}  // namespace thp
