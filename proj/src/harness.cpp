#include "gaugeoco/harness.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace gaugeoco {

using nlohmann::json;

namespace {

std::string join_fields(const std::vector<std::string>& fields) {
  std::string msg = "invalid config fields:";
  for (const auto& f : fields) msg += " " + f;
  return msg;
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<long>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
  return out;
}

// Fixed-format double so emission is byte-stable across runs.
std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> bad_fields)
    : UsageError(join_fields(bad_fields)), fields(std::move(bad_fields)) {}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw UsageError("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(j);
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  std::vector<std::string> bad;

  auto get_doubles = [](const json& arr) {
    std::vector<double> v;
    for (const auto& x : arr) v.push_back(x.get<double>());
    return v;
  };

  try {
    if (!j.contains("body") || !j["body"].is_object() || !j["body"].contains("kind")) {
      bad.push_back("body");
    } else {
      const json& b = j["body"];
      c.body_kind = b["kind"].get<std::string>();
      if (b.contains("lo")) c.body_lo = get_doubles(b["lo"]);
      if (b.contains("hi")) c.body_hi = get_doubles(b["hi"]);
      if (b.contains("radius")) c.body_radius = b["radius"].get<double>();
      if (b.contains("dim")) c.body_dim = b["dim"].get<int>();
      if (b.contains("diag")) c.ellipsoid_diag = get_doubles(b["diag"]);
      if (b.contains("A")) {
        for (const auto& row : b["A"]) c.poly_a.push_back(get_doubles(row));
      }
      if (b.contains("b")) c.poly_b = get_doubles(b["b"]);
      if (b.contains("r")) c.r_override = b["r"].get<double>();
      if (b.contains("R")) c.R_override = b["R"].get<double>();
    }

    if (!j.contains("stream") || !j["stream"].is_object() ||
        !j["stream"].contains("kind")) {
      bad.push_back("stream");
    } else {
      const json& s = j["stream"];
      c.stream_kind = s["kind"].get<std::string>();
      if (s.contains("variant")) c.stream_variant = s["variant"].get<std::string>();
      if (s.contains("G")) c.stream_G = s["G"].get<double>();
      if (s.contains("direction")) c.stream_direction = get_doubles(s["direction"]);
      if (s.contains("gbar")) c.stream_gbar = get_doubles(s["gbar"]);
      if (s.contains("sigma")) c.stream_sigma = s["sigma"].get<double>();
      if (s.contains("wstar")) c.stream_wstar = get_doubles(s["wstar"]);
      if (s.contains("axis")) c.killer_axis = s["axis"].get<int>();
      if (s.contains("block_scale")) c.killer_block_scale = s["block_scale"].get<double>();
      if (s.contains("drift")) c.killer_drift = s["drift"].get<double>();
      if (s.contains("punish_rate")) c.killer_punish_rate = s["punish_rate"].get<double>();
    }

    if (j.contains("algorithm")) {
      c.algorithms.push_back(j["algorithm"].get<std::string>());
    }
    if (j.contains("algorithms")) {
      for (const auto& a : j["algorithms"]) c.algorithms.push_back(a.get<std::string>());
    }
    if (j.contains("horizons")) {
      for (const auto& t : j["horizons"]) c.horizons.push_back(t.get<long>());
    }
    if (j.contains("seeds")) {
      for (const auto& s : j["seeds"]) c.seeds.push_back(s.get<std::uint64_t>());
    }
    if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
    if (j.contains("sigma")) c.sco_sigma = j["sigma"].get<double>();
    if (j.contains("eps_target")) c.eps_target = j["eps_target"].get<double>();
    if (j.contains("solve_hard_cap")) c.solve_hard_cap = j["solve_hard_cap"].get<long>();
    if (j.contains("record_stride")) c.record_stride = j["record_stride"].get<int>();

    if (j.contains("overrides")) {
      const json& o = j["overrides"];
      if (o.contains("eta")) c.overrides.eta = o["eta"].get<double>();
      if (o.contains("nu")) c.overrides.nu = o["nu"].get<double>();
      if (o.contains("c")) c.overrides.c = o["c"].get<double>();
      if (o.contains("eps")) c.overrides.eps = o["eps"].get<double>();
      if (o.contains("m")) c.overrides.m = o["m"].get<int>();
      if (o.contains("full_reinversion_period")) {
        c.overrides.full_reinversion_period = o["full_reinversion_period"].get<long>();
      }
    }
  } catch (const json::exception& e) {
    throw UsageError("config has mistyped fields: " + std::string(e.what()));
  }

  if (!bad.empty()) throw ConfigError(std::move(bad));
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;

  static const std::vector<std::string> kBodyKinds = {"ball", "box", "ellipsoid",
                                                      "polytope", "l1ball"};
  if (std::find(kBodyKinds.begin(), kBodyKinds.end(), body_kind) == kBodyKinds.end()) {
    bad.push_back("body.kind");
  } else {
    if (body_kind == "ball" || body_kind == "l1ball") {
      if (body_dim < 1) bad.push_back("body.dim");
      if (!(body_radius > 0.0)) bad.push_back("body.radius");
    } else if (body_kind == "box") {
      if (body_lo.empty() || body_lo.size() != body_hi.size()) bad.push_back("body.lo/hi");
    } else if (body_kind == "ellipsoid") {
      if (ellipsoid_diag.empty()) bad.push_back("body.diag");
    } else if (body_kind == "polytope") {
      if (poly_a.empty() || poly_a.size() != poly_b.size()) bad.push_back("body.A/b");
    }
  }

  static const std::vector<std::string> kStreamKinds = {
      "linear_adversarial", "linear_stochastic", "quadratic", "linear", "zero"};
  if (std::find(kStreamKinds.begin(), kStreamKinds.end(), stream_kind) ==
      kStreamKinds.end()) {
    bad.push_back("stream.kind");
  }
  if (stream_kind == "linear_adversarial") {
    static const std::vector<std::string> kVariants = {"sign", "rademacher",
                                                       "killer_kappa"};
    if (std::find(kVariants.begin(), kVariants.end(), stream_variant) ==
        kVariants.end()) {
      bad.push_back("stream.variant");
    }
  }
  if (stream_kind == "linear_stochastic" &&
      (stream_gbar.empty() || stream_sigma < 0.0)) {
    bad.push_back("stream.gbar/sigma");
  }
  if (stream_kind == "quadratic" && stream_wstar.empty()) {
    bad.push_back("stream.wstar");
  }
  if (stream_kind == "linear" && stream_direction.empty()) {
    bad.push_back("stream.direction");
  }
  if (stream_G < 0.0) bad.push_back("stream.G");

  // Stream vectors must live in the body's dimension.
  size_t body_d = 0;
  if (body_kind == "ball" || body_kind == "l1ball") {
    body_d = body_dim > 0 ? static_cast<size_t>(body_dim) : 0;
  } else if (body_kind == "box") {
    body_d = body_lo.size();
  } else if (body_kind == "ellipsoid") {
    body_d = ellipsoid_diag.size();
  } else if (body_kind == "polytope" && !poly_a.empty()) {
    body_d = poly_a[0].size();
  }
  auto check_dim = [&](const std::vector<double>& v, const char* field) {
    if (!v.empty() && body_d > 0 && v.size() != body_d) {
      bad.push_back(std::string(field) + ".dim");
    }
  };
  check_dim(stream_direction, "stream.direction");
  check_dim(stream_gbar, "stream.gbar");
  check_dim(stream_wstar, "stream.wstar");

  static const std::vector<std::string> kAlgorithms = {
      "gauge_oco_bons", "gauge_oco_ogd", "ogd_exact_projection"};
  if (algorithms.empty()) bad.push_back("algorithms");
  for (const auto& a : algorithms) {
    if (std::find(kAlgorithms.begin(), kAlgorithms.end(), a) == kAlgorithms.end()) {
      bad.push_back("algorithms:" + a);
    }
  }

  if (mode != "oco" && mode != "sco" && mode != "solve_to_eps") bad.push_back("mode");
  const bool closed_form_projection = body_kind == "ball" || body_kind == "box";
  if (!closed_form_projection &&
      std::find(algorithms.begin(), algorithms.end(), "ogd_exact_projection") !=
          algorithms.end()) {
    bad.push_back("algorithms:ogd_exact_projection(body." + body_kind + ")");
  }
  if (mode == "sco" || mode == "solve_to_eps") {
    for (const auto& a : algorithms) {
      if (a != "gauge_oco_bons") bad.push_back("algorithms(" + mode + "):" + a);
    }
    if (stream_kind == "linear_adversarial" || stream_kind == "zero") {
      bad.push_back("stream.kind(" + mode + ")");
    }
  }
  if (mode == "sco" && sco_sigma < 0.0) bad.push_back("sigma");
  if (mode == "solve_to_eps" && !(eps_target > 0.0)) bad.push_back("eps_target");

  if (horizons.empty()) bad.push_back("horizons");
  for (size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1 || (i > 0 && horizons[i] < horizons[i - 1])) {
      bad.push_back("horizons[" + std::to_string(i) + "]");
    }
  }
  if (seeds.empty()) bad.push_back("seeds");

  if (overrides.c && !(*overrides.c > 0.0 && *overrides.c < 1.0)) bad.push_back("overrides.c");
  if (overrides.eta && !(*overrides.eta > 0.0)) bad.push_back("overrides.eta");
  if (overrides.nu && !(*overrides.nu > 0.0)) bad.push_back("overrides.nu");
  if (overrides.eps && !(*overrides.eps > 0.0)) bad.push_back("overrides.eps");
  if (overrides.m && *overrides.m < 1) bad.push_back("overrides.m");

  if (!bad.empty()) throw ConfigError(std::move(bad));
}

BodyPtr ExperimentConfig::build_body() const {
  BodyPtr body;
  if (body_kind == "ball") {
    body = make_ball(body_dim, body_radius);
  } else if (body_kind == "box") {
    body = make_box(to_vector(body_lo), to_vector(body_hi));
  } else if (body_kind == "ellipsoid") {
    Matrix A = to_vector(ellipsoid_diag).asDiagonal();
    body = make_ellipsoid(A);
  } else if (body_kind == "polytope") {
    const int m = static_cast<int>(poly_a.size());
    const int d = static_cast<int>(poly_a[0].size());
    Matrix A(m, d);
    for (int i = 0; i < m; ++i) A.row(i) = to_vector(poly_a[i]).transpose();
    body = make_polytope(A, to_vector(poly_b), R_override);
  } else if (body_kind == "l1ball") {
    body = make_l1_ball(body_dim, body_radius);
  } else {
    throw ConfigError({"body.kind"});
  }
  return body;
}

std::unique_ptr<LossStream> ExperimentConfig::build_stream(std::uint64_t seed,
                                                           long T) const {
  const BodyPtr body = build_body();
  const int d = body->dim();
  if (stream_kind == "zero") {
    Vector e1 = Vector::Zero(d);
    e1[0] = 1.0;
    return make_sign_stream(e1, 0.0, seed);
  }
  if (stream_kind == "linear_adversarial") {
    if (stream_variant == "sign") {
      Vector dir;
      if (!stream_direction.empty()) {
        dir = to_vector(stream_direction);
      } else {
        dir = Vector::Zero(d);
        dir[0] = 1.0;
      }
      return make_sign_stream(std::move(dir), stream_G, seed);
    }
    if (stream_variant == "rademacher") {
      return make_rademacher_stream(d, stream_G, seed);
    }
    return make_killer_kappa_stream(d, killer_axis, stream_G, T,
                                    killer_block_scale, killer_drift,
                                    killer_punish_rate, seed);
  }
  if (stream_kind == "linear_stochastic") {
    return make_linear_stochastic_stream(to_vector(stream_gbar), stream_sigma,
                                         stream_G, seed);
  }
  if (stream_kind == "quadratic") {
    return make_quadratic_stream(to_vector(stream_wstar), stream_G, seed);
  }
  if (stream_kind == "linear") {
    // Stationary linear objective as a degenerate stream (sco comparators).
    return make_linear_stochastic_stream(to_vector(stream_direction), 0.0,
                                         stream_G, seed);
  }
  throw ConfigError({"stream.kind"});
}

std::unique_ptr<Objective> ExperimentConfig::build_objective() const {
  if (stream_kind == "quadratic") {
    return make_quadratic_objective(to_vector(stream_wstar), stream_G);
  }
  if (stream_kind == "linear" || stream_kind == "linear_stochastic") {
    const auto& dir = stream_kind == "linear" ? stream_direction : stream_gbar;
    return make_linear_objective(to_vector(dir));
  }
  throw ConfigError({"stream.kind(" + mode + ")"});
}

std::string ExperimentConfig::body_label() const {
  return build_body()->describe();
}

std::string ExperimentConfig::stream_label() const {
  if (stream_kind == "linear_adversarial") return stream_variant;
  return stream_kind;
}

namespace {

// Projected OGD with the body's own closed-form Euclidean projection; the
// no-reduction baseline for bodies where that projection is cheap.
RunTrace run_ogd_exact(const BodyPtr& body, LossStream& stream, long T, double G,
                       int record_stride) {
  if (!body->has_euclidean_projection()) {
    throw UsageError("ogd_exact_projection requires a closed-form projection (" +
                     body->kind() + " has none)");
  }
  const int d = body->dim();
  const double R = body->outer_radius();
  RunTrace trace;
  trace.T = T;
  trace.d = d;
  trace.stride = record_stride > 0 ? record_stride : default_record_stride(T);
  trace.grad_sum = Vector::Zero(d);
  trace.play_sum = Vector::Zero(d);
  trace.has_values = stream.has_objective();

  Vector u = Vector::Zero(d);
  for (long t = 1; t <= T; ++t) {
    const Vector g = stream.next_subgradient(u, t);
    RoundRecord rec;
    rec.t = t;
    rec.u = u;
    rec.w = u;
    rec.g = g;
    rec.g_tilde = g;
    trace.linear_loss_sum += g.dot(u);
    trace.grad_sum += g;
    trace.play_sum += u;
    if (trace.has_values) trace.value_sum += stream.objective().value(u);
    trace.max_gauge_of_w = std::max(trace.max_gauge_of_w, body->exact_gauge(u));
    trace.max_u_norm = std::max(trace.max_u_norm, u.norm());
    trace.max_g_norm = std::max(trace.max_g_norm, g.norm());
    trace.max_g_tilde_norm = trace.max_g_norm;
    if ((t - 1) % trace.stride == 0) trace.records.push_back(std::move(rec));

    const double step = G > 0.0 ? R / (G * std::sqrt(static_cast<double>(t))) : 0.0;
    u = body->euclidean_project(u - step * g);
  }
  return trace;
}

struct GridCell {
  std::string algorithm;
  long T = 0;
  std::uint64_t seed = 0;
};

RunRow execute_cell(const ExperimentConfig& config, const GridCell& cell) {
  const auto started = std::chrono::steady_clock::now();

  BodyPtr body = config.build_body();
  const int d = body->dim();
  auto [r, R] = body->sandwich_radii();
  if (config.r_override > 0.0) r = config.r_override;
  if (config.R_override > 0.0) R = config.R_override;
  const double kappa = R / r;

  RunRow row;
  row.algorithm = cell.algorithm;
  row.body = body->describe();
  row.stream = config.stream_label();
  row.d = d;
  row.T = cell.T;
  row.seed = cell.seed;

  if (config.mode == "sco") {
    auto objective = config.build_objective();
    ScoParams params = tune_sco(objective->gradient_bound(), R, kappa, d, cell.T,
                                config.sco_sigma);
    if (config.overrides.eta) params.eta = *config.overrides.eta;
    if (config.overrides.nu) params.nu = *config.overrides.nu;
    if (config.overrides.c) params.c = *config.overrides.c;
    if (config.overrides.m) params.m = *config.overrides.m;
    if (config.overrides.full_reinversion_period) {
      params.full_reinversion_period = *config.overrides.full_reinversion_period;
    }
    params.r = r;
    ScoResult res = run_sco(body, *objective, config.sco_sigma, cell.seed, cell.T,
                            &params, config.record_stride);
    row.regret_or_gap = res.gap;
    row.comparator_value = res.comparator_value;
    row.comparator_tol = res.comparator_tol;
    row.sep_calls = res.trace.sep_oracle_calls;
    row.inversions = res.trace.full_inversions;
    row.z_updates = res.trace.z_updates;
    row.eta = params.eta;
    row.nu = params.nu;
    row.max_gauge_of_w = res.trace.max_gauge_of_w;
    row.max_u_norm = res.trace.max_u_norm;
    row.max_g_tilde_norm = res.trace.max_g_tilde_norm;
    row.max_round_sep_calls = res.trace.max_round_sep_calls;
  } else if (config.mode == "solve_to_eps") {
    auto objective = config.build_objective();
    SolveResult res = solve_to_eps(body, *objective, config.eps_target,
                                   objective->gradient_bound(), R, kappa, d,
                                   config.solve_hard_cap);
    row.T = res.T_used;
    row.regret_or_gap = res.achieved_gap;
    row.comparator_tol = res.comparator_tol;
    row.eta = 0.0;
    row.nu = 0.0;
  } else {
    auto stream = config.build_stream(cell.seed, cell.T);
    const double G = stream->gradient_bound();
    RunTrace trace;
    OcoParams params;
    if (cell.algorithm == "ogd_exact_projection") {
      trace = run_ogd_exact(body, *stream, cell.T, G, config.record_stride);
      params.eta = 0.0;
      params.nu = 0.0;
    } else {
      params = tune_oco(std::max(G, 1e-12), R, kappa, d, cell.T);
      if (config.overrides.eta) params.eta = *config.overrides.eta;
      if (config.overrides.nu) params.nu = *config.overrides.nu;
      if (config.overrides.c) params.c = *config.overrides.c;
      if (config.overrides.eps) params.eps = *config.overrides.eps;
      if (config.overrides.m) params.m = *config.overrides.m;
      if (config.overrides.full_reinversion_period) {
        params.full_reinversion_period = *config.overrides.full_reinversion_period;
      }
      params.r = r;
      const SubroutineKind kind = cell.algorithm == "gauge_oco_bons"
                                      ? SubroutineKind::barrier_ons
                                      : SubroutineKind::ogd_ball;
      trace = run_oco(body, *stream, params, kind, config.record_stride);
    }
    row.regret_or_gap = regret(trace, *body, *stream);
    OfflineOptimum opt = offline_optimum(*stream, *body);
    row.comparator_value = opt.value;
    row.comparator_tol = opt.tol;
    row.sep_calls = trace.sep_oracle_calls;
    row.inversions = trace.full_inversions;
    row.z_updates = trace.z_updates;
    row.eta = params.eta;
    row.nu = params.nu;
    row.max_gauge_of_w = trace.max_gauge_of_w;
    row.max_u_norm = trace.max_u_norm;
    row.max_g_tilde_norm = trace.max_g_tilde_norm;
    row.max_round_sep_calls = trace.max_round_sep_calls;
    if (cell.algorithm == "gauge_oco_bons") {
      BarrierOnsParams bp = params.bons();
      const double g_bound = 2.0 * kappa * std::max(G, 1e-12);
      row.eta_compliant = bp.eta_compliant(g_bound);
      row.nu_compliant = bp.nu_compliant(g_bound, d);
    }
  }

  const auto finished = std::chrono::steady_clock::now();
  row.wall_ms =
      std::chrono::duration<double, std::milli>(finished - started).count();
  return row;
}

}  // namespace

double regret(const RunTrace& trace, const ConvexBody& body,
              const LossStream& stream) {
  OfflineOptimum opt = offline_optimum(stream, body);
  if (opt.per_round) {
    return trace.value_sum - static_cast<double>(trace.T) * opt.value;
  }
  return trace.linear_loss_sum - opt.value;
}

Report run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();

  std::vector<GridCell> cells;
  for (const auto& algorithm : config.algorithms) {
    for (long T : config.horizons) {
      for (std::uint64_t seed : config.seeds) {
        cells.push_back({algorithm, T, seed});
      }
    }
  }

  Report report(cells.size());
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  if (workers == 1) {
    for (size_t i = 0; i < cells.size(); ++i) report[i] = execute_cell(config, cells[i]);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            report[i] = execute_cell(config, cells[i]);
          }
        } catch (...) {
          errors[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }
  return report;
}

std::string report_to_csv(const Report& report, bool timing) {
  std::string out =
      "algorithm,body,stream,d,T,seed,regret_or_gap,sep_calls,inversions,"
      "z_updates,eta,nu,wall_ms\n";
  for (const RunRow& row : report) {
    out += row.algorithm + "," + row.body + "," + row.stream + ",";
    out += std::to_string(row.d) + "," + std::to_string(row.T) + ",";
    out += std::to_string(row.seed) + ",";
    out += fmt_double(row.regret_or_gap) + ",";
    out += std::to_string(row.sep_calls) + "," + std::to_string(row.inversions) + ",";
    out += std::to_string(row.z_updates) + ",";
    out += fmt_double(row.eta) + "," + fmt_double(row.nu) + ",";
    out += fmt_double(timing ? row.wall_ms : 0.0) + "\n";
  }
  return out;
}

std::string report_to_json(const Report& report, const ExperimentConfig& config,
                           bool timing) {
  json j;
  j["mode"] = config.mode;
  j["body"] = config.body_label();
  j["stream"] = config.stream_label();
  j["rows"] = json::array();
  for (const RunRow& row : report) {
    json r;
    r["algorithm"] = row.algorithm;
    r["body"] = row.body;
    r["stream"] = row.stream;
    r["d"] = row.d;
    r["T"] = row.T;
    r["seed"] = row.seed;
    r["regret_or_gap"] = fmt_double(row.regret_or_gap);
    r["sep_calls"] = row.sep_calls;
    r["inversions"] = row.inversions;
    r["z_updates"] = row.z_updates;
    r["eta"] = fmt_double(row.eta);
    r["nu"] = fmt_double(row.nu);
    r["wall_ms"] = fmt_double(timing ? row.wall_ms : 0.0);
    r["comparator_value"] = fmt_double(row.comparator_value);
    r["comparator_tol"] = fmt_double(row.comparator_tol);
    r["max_gauge_of_w"] = fmt_double(row.max_gauge_of_w);
    r["max_u_norm"] = fmt_double(row.max_u_norm);
    r["max_g_tilde_norm"] = fmt_double(row.max_g_tilde_norm);
    r["max_round_sep_calls"] = row.max_round_sep_calls;
    r["eta_compliant"] = row.eta_compliant;
    r["nu_compliant"] = row.nu_compliant;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::vector<std::string> emit(const Report& report, const ExperimentConfig& config,
                              const EmitOptions& options) {
  config.validate();
  if (report.empty()) throw UsageError("emit: empty report");

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + options.out_dir);

  std::vector<std::string> written;
  if (options.write_csv) {
    const std::string path = (fs::path(options.out_dir) / "report.csv").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << report_to_csv(report, options.timing);
    written.push_back(path);
  }
  if (options.write_json) {
    const std::string path = (fs::path(options.out_dir) / "report.json").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << report_to_json(report, config, options.timing);
    written.push_back(path);
  }
  return written;
}

}  // namespace gaugeoco
