#pragma once

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

#include "gaugeoco/losses.hpp"
#include "gaugeoco/reduction.hpp"
#include "gaugeoco/stochastic.hpp"
#include "gaugeoco/trace.hpp"
#include "gaugeoco/types.hpp"

namespace gaugeoco {

// Invalid experiment configuration; `fields` names every offending entry.
struct ConfigError : UsageError {
  explicit ConfigError(std::vector<std::string> bad_fields);
  std::vector<std::string> fields;
};

struct ParamOverrides {
  std::optional<double> eta;
  std::optional<double> nu;
  std::optional<double> c;
  std::optional<double> eps;
  std::optional<int> m;
  std::optional<long> full_reinversion_period;
};

// One experiment grid: (algorithm x horizon x seed) over a single body and
// stream family. Parsed from a JSON file; see README for the schema.
struct ExperimentConfig {
  std::string body_kind;           // ball | box | ellipsoid | polytope | l1ball
  std::vector<double> body_lo, body_hi;       // box
  double body_radius = 1.0;                   // ball / l1ball
  int body_dim = 0;                           // ball / l1ball
  std::vector<double> ellipsoid_diag;         // ellipsoid (diagonal form)
  std::vector<std::vector<double>> poly_a;    // polytope rows
  std::vector<double> poly_b;
  double r_override = 0.0;  // trusted tighter sandwich radii, 0 = derive
  double R_override = 0.0;

  std::string stream_kind;  // linear_adversarial | linear_stochastic | quadratic | zero
  std::string stream_variant = "sign";  // sign | rademacher | killer_kappa
  double stream_G = 1.0;
  std::vector<double> stream_direction;  // sign variant / linear objective
  std::vector<double> stream_gbar;       // linear_stochastic
  double stream_sigma = 0.0;             // linear_stochastic
  std::vector<double> stream_wstar;      // quadratic
  int killer_axis = 0;
  double killer_block_scale = 0.0;
  double killer_drift = 0.0;
  double killer_punish_rate = 8.0;

  std::vector<std::string> algorithms;  // gauge_oco_bons | gauge_oco_ogd | ogd_exact_projection
  std::vector<long> horizons;           // ascending
  std::vector<std::uint64_t> seeds;
  std::string mode = "oco";  // oco | sco | solve_to_eps
  double sco_sigma = 0.0;
  double eps_target = 0.0;
  long solve_hard_cap = 2000000;
  int record_stride = 0;

  ParamOverrides overrides;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  void validate() const;

  BodyPtr build_body() const;
  std::unique_ptr<LossStream> build_stream(std::uint64_t seed, long T) const;
  std::unique_ptr<Objective> build_objective() const;  // sco / solve_to_eps
  std::string body_label() const;
  std::string stream_label() const;
};

struct RunRow {
  std::string algorithm;
  std::string body;
  std::string stream;
  int d = 0;
  long T = 0;
  std::uint64_t seed = 0;
  double regret_or_gap = 0.0;
  long sep_calls = 0;
  long inversions = 0;
  long z_updates = 0;
  double eta = 0.0;
  double nu = 0.0;
  double wall_ms = 0.0;

  // Extra diagnostics, emitted in the JSON mirror only.
  double comparator_value = 0.0;
  double comparator_tol = 0.0;
  double max_gauge_of_w = 0.0;
  double max_u_norm = 0.0;
  double max_g_tilde_norm = 0.0;
  long max_round_sep_calls = 0;
  bool eta_compliant = true;
  bool nu_compliant = true;
};

using Report = std::vector<RunRow>;

// Executes the full grid; cells run concurrently on `threads` workers and the
// report comes back in canonical (algorithm, T, seed) order regardless of
// scheduling. Deterministic for a fixed config.
Report run_experiment(const ExperimentConfig& config, int threads = 1);

// Cumulative regret of a finished trace against the exact offline comparator
// (support-function optimum for linear streams, objective gap for stationary
// objectives). Nonnegative up to float error when the comparator is exact.
double regret(const RunTrace& trace, const ConvexBody& body,
              const LossStream& stream);

struct EmitOptions {
  std::string out_dir = ".";
  bool write_csv = true;
  bool write_json = false;
  // Measured wall times are nondeterministic, so the wall_ms column holds 0
  // unless timing output is requested explicitly.
  bool timing = false;
};

// Writes report.csv / report.json; returns the paths written. Output is
// byte-stable for a fixed report (timing off).
std::vector<std::string> emit(const Report& report, const ExperimentConfig& config,
                              const EmitOptions& options);

std::string report_to_csv(const Report& report, bool timing);
std::string report_to_json(const Report& report, const ExperimentConfig& config,
                           bool timing);

}  // namespace gaugeoco
