#include "gaugeoco/stochastic.hpp"

#include <algorithm>
#include <cmath>

namespace gaugeoco {

OcoParams ScoParams::oco() const {
  OcoParams p;
  p.T = T;
  p.G = G;
  p.R = R;
  p.r = r;
  p.kappa = kappa;
  p.eta = eta;
  p.nu = nu;
  p.c = c;
  p.eps = 1.0 / static_cast<double>(T);
  p.m = m;
  p.full_reinversion_period = full_reinversion_period;
  return p;
}

ScoParams tune_sco(double G, double R, double kappa, int d, long T, double sigma) {
  if (!(G > 0.0) || !(R > 0.0) || !(kappa >= 1.0) || d < 1 || T < 1 || sigma < 0.0) {
    throw UsageError("tune_sco: invalid inputs");
  }
  ScoParams p;
  p.sigma = sigma;
  p.G = G;
  p.R = R;
  p.r = R / kappa;
  p.kappa = kappa;
  p.d = d;
  p.T = T;
  p.c = 0.5;
  const double dd = static_cast<double>(d);
  const double tt = static_cast<double>(T);
  const double log_term = std::log(1.0 + tt / dd);
  if (sigma == 0.0) {
    // The noise branch of the min/max degenerates; take the limit explicitly.
    p.eta = (1.0 / R) * (1.0 / (10.0 * G * kappa));
    p.nu = R * 20.0 * G * kappa * dd;
  } else {
    p.eta = (1.0 / R) * std::min(1.0 / (10.0 * G * kappa),
                                 (1.0 / sigma) * std::sqrt(2.0 * dd * log_term / tt));
    p.nu = R * std::max(20.0 * G * kappa * dd, sigma * std::sqrt(dd * tt / log_term));
  }
  return p;
}

ScoResult run_sco(BodyPtr body, const Objective& objective, double sigma,
                  std::uint64_t seed, long T, const ScoParams* params_override,
                  int record_stride) {
  if (objective.dim() != body->dim()) {
    throw DimensionMismatch(body->dim(), objective.dim());
  }
  ScoParams params;
  if (params_override != nullptr) {
    params = *params_override;
    params.T = T;
  } else {
    const auto [r, R] = body->sandwich_radii();
    params = tune_sco(objective.gradient_bound(), R, R / r, body->dim(), T, sigma);
  }

  auto stream = make_noisy_objective_stream(objective, sigma, seed);
  RunTrace trace = run_oco(body, *stream, params.oco(), SubroutineKind::barrier_ons,
                           record_stride);

  ScoResult res;
  res.w_hat = trace.average_play();
  res.objective_at_w_hat = objective.value(res.w_hat);
  OfflineOptimum opt = objective.optimum(*body);
  res.comparator_value = opt.value;
  res.comparator_tol = opt.tol;
  res.gap = res.objective_at_w_hat - opt.value;
  res.noise_draws = stream->noise_draws();
  res.noise_clipped = stream->noise_clipped();
  res.trace = std::move(trace);
  return res;
}

SolveResult solve_to_eps(BodyPtr body, const Objective& objective,
                         double eps_target, double G, double R, double kappa,
                         int d, long hard_cap) {
  if (!(eps_target > 0.0)) throw UsageError("solve_to_eps: eps_target must be > 0");
  SolveResult out;
  out.c_log = 100.0 * std::log(2.0 + static_cast<double>(d) / eps_target);
  const double t_real = std::ceil(out.c_log * G * R * kappa * d / eps_target);
  out.T_requested = t_real > 9e18 ? static_cast<long>(9e18) : static_cast<long>(t_real);
  out.T_used = out.T_requested;
  if (out.T_requested > hard_cap) {
    out.budget_exceeded = true;
    out.T_used = hard_cap;
  }
  ScoResult sco = run_sco(std::move(body), objective, 0.0, 0, out.T_used);
  out.point = std::move(sco.w_hat);
  out.achieved_gap = sco.gap;
  out.comparator_tol = sco.comparator_tol;
  return out;
}

}  // namespace gaugeoco
