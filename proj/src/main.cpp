// ── thp: command-line driver ─────────────────────────────────────────────────
//
// Subcommands: periods | heegner | table2 | table3 | eta-qexp | selftest.
// All heavy lifting lives in the report module; this file only parses flags,
// resolves default inputs, and writes the JSON report.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thp/quadforms.hpp"
#include "thp/report.hpp"

namespace {

struct CommonArgs {
  std::string curve_path;
  std::string coeffs_path;
  std::vector<long> deltas;
  int prec = 160;
  std::string points = "paper";
  std::string fixtures_path;
  std::string out_path;
  int threads = 0;
  bool timings = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_coeffs, bool with_points) {
  cmd->add_option("--curve", a.curve_path, "Curve config JSON")->capture_default_str();
  if (with_coeffs)
    cmd->add_option("--coeffs", a.coeffs_path, "Coefficient CSV")->capture_default_str();
  cmd->add_option("--delta", a.deltas,
                  "Comma-separated discriminants (default: all available)")
      ->delimiter(',');
  cmd->add_option("--prec", a.prec, "Working precision in decimal digits")
      ->capture_default_str();
  if (with_points) {
    cmd->add_option("--points", a.points, "Point source: paper | pipeline")
        ->check(CLI::IsMember({"paper", "pipeline"}))
        ->capture_default_str();
    cmd->add_option("--fixtures", a.fixtures_path,
                    "Point fixtures JSON (used with --points paper)");
  }
  cmd->add_option("--out", a.out_path, "Write the JSON report here (default: stdout)");
  cmd->add_option("--threads", a.threads, "OpenMP threads for row processing");
  cmd->add_flag("--timings", a.timings, "Attach wall_ms to each row");
}

thp::RunOptions make_opts(const CommonArgs& a, CLI::App* cmd) {
  thp::RunOptions o;
  o.prec = a.prec;
  o.prec_explicit = cmd->count("--prec") > 0;
  o.points = a.points == "pipeline" ? thp::PointSource::kPipeline : thp::PointSource::kPaper;
  o.fixtures_path = a.fixtures_path;
  o.timings = a.timings;
  o.threads = a.threads;
  return o;
}

void emit(const nlohmann::ordered_json& rep, const std::string& out_path) {
  const std::string text = rep.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << text;
}

/** Default Δ list: rows of the coefficient table, filtered to the fixture
 *  file's entries when points come from fixtures. */
std::vector<long> default_deltas(const thp::CoeffTable& coeffs, const thp::RunOptions& opts,
                                 const std::string& fallback_fixture) {
  std::vector<long> deltas;
  if (opts.points == thp::PointSource::kPaper) {
    const std::string path =
        opts.fixtures_path.empty() ? thp::default_data_path(fallback_fixture)
                                   : opts.fixtures_path;
    const auto fixtures = thp::load_point_fixtures(path);
    for (const thp::CoeffRow& row : coeffs.rows)
      if (thp::find_fixture(fixtures, row.delta)) deltas.push_back(row.delta);
  } else {
    for (const thp::CoeffRow& row : coeffs.rows) deltas.push_back(row.delta);
  }
  return deltas;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted Heegner points and third-kind periods on rational elliptic curves"};
  app.require_subcommand(1);

  CommonArgs args;
  args.curve_path = thp::default_data_path("curve37a.json");
  args.coeffs_path = thp::default_data_path("coefficients.csv");

  auto* cmd_periods =
      app.add_subcommand("periods", "Period lattice of the twisted curves E_delta");
  add_common(cmd_periods, args, /*with_coeffs=*/false, /*with_points=*/false);

  auto* cmd_heegner =
      app.add_subcommand("heegner", "Twisted Heegner points via the modular parameterization");
  add_common(cmd_heegner, args, /*with_coeffs=*/false, /*with_points=*/false);
  cmd_heegner->get_option("--delta")->required();

  auto* cmd_table2 =
      app.add_subcommand("table2", "Verify differences delta*c+ - (eps*c_E/Omega)*period on E_delta");
  add_common(cmd_table2, args, /*with_coeffs=*/true, /*with_points=*/true);

  auto* cmd_table3 =
      app.add_subcommand("table3", "Verify the minimal-model differences with the shift t");
  add_common(cmd_table3, args, /*with_coeffs=*/true, /*with_points=*/true);

  long eta_delta = 0;
  long eta_r = -1;
  int eta_nmax = 1;
  auto* cmd_eta = app.add_subcommand("eta-qexp",
                                     "q-expansion of the canonical differential for (delta, r)");
  cmd_eta->add_option("--coeffs", args.coeffs_path, "Coefficient CSV")->capture_default_str();
  cmd_eta->add_option("--curve", args.curve_path, "Curve config JSON")->capture_default_str();
  cmd_eta->add_option("--delta", eta_delta, "Fundamental discriminant (not 1)")->required();
  cmd_eta->add_option("--r", eta_r, "Square root of delta mod 4N (default: smallest)");
  cmd_eta
      ->add_option("--nmax", eta_nmax,
                   "Number of coefficients (n > 1 needs c+(delta*n^2) rows in the table)")
      ->capture_default_str();
  cmd_eta->add_option("--prec", args.prec, "Working precision")->capture_default_str();
  cmd_eta->add_option("--out", args.out_path, "Write the JSON report here");

  int selftest_prec = 80;
  auto* cmd_selftest = app.add_subcommand("selftest", "Run the quick property suites");
  cmd_selftest->add_option("--prec", selftest_prec, "Working precision")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_selftest->parsed()) {
      const int failures = thp::run_selftest(selftest_prec, std::cout);
      return failures == 0 ? 0 : 1;
    }

    const thp::CurveConfig cfg = thp::load_curve_config(args.curve_path);

    if (cmd_periods->parsed()) {
      const thp::RunOptions opts = make_opts(args, cmd_periods);
      const std::vector<long> deltas = args.deltas.empty() ? std::vector<long>{1} : args.deltas;
      emit(thp::run_periods(cfg, deltas, opts), args.out_path);
      return 0;
    }
    if (cmd_heegner->parsed()) {
      const thp::RunOptions opts = make_opts(args, cmd_heegner);
      emit(thp::run_heegner(cfg, args.deltas, opts), args.out_path);
      return 0;
    }
    if (cmd_eta->parsed()) {
      const thp::RunOptions opts = make_opts(args, cmd_eta);
      const thp::CoeffTable coeffs = thp::load_coeff_csv(args.coeffs_path, cfg.N);
      const long r = eta_r >= 0
                         ? eta_r
                         : mpz_get_si(thp::smallest_sqrt_mod(thp::BigInt(eta_delta),
                                                             thp::BigInt(4 * cfg.N))
                                          .get_mpz_t());
      emit(thp::run_eta_qexp(coeffs, cfg.N, eta_delta, r, eta_nmax, opts), args.out_path);
      return 0;
    }

    // table2 / table3
    CLI::App* cmd = cmd_table2->parsed() ? cmd_table2 : cmd_table3;
    const bool minimal = cmd == cmd_table3;
    const thp::RunOptions opts = make_opts(args, cmd);
    const thp::CoeffTable coeffs = thp::load_coeff_csv(args.coeffs_path, cfg.N);
    const std::vector<long> deltas =
        args.deltas.empty()
            ? default_deltas(coeffs, opts, minimal ? "points_table3.json" : "points_table2.json")
            : args.deltas;
    const nlohmann::ordered_json rep = minimal ? thp::run_table3(cfg, coeffs, deltas, opts)
                                               : thp::run_table2(cfg, coeffs, deltas, opts);
    emit(rep, args.out_path);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
