#pragma once

#include <memory>

#include "gaugeoco/losses.hpp"
#include "gaugeoco/reduction.hpp"
#include "gaugeoco/trace.hpp"
#include "gaugeoco/types.hpp"

namespace gaugeoco {

struct ScoParams {
  double sigma = 0.0;
  double G = 1.0;
  double R = 1.0;
  double r = 1.0;
  double kappa = 1.0;
  int d = 1;
  long T = 1;
  double eta = 0.1;
  double nu = 10.0;
  double c = 0.5;
  int m = 0;
  long full_reinversion_period = 2048;

  OcoParams oco() const;
};

// eta = (1/R) min(1/(10 G kappa), (1/sigma) sqrt(2 d log(1+T/d)/T)),
// nu  = R max(20 G kappa d, sigma sqrt(d T / log(1+T/d))), c = 1/2.
// sigma = 0 takes the deterministic branch explicitly (no floating-point inf).
ScoParams tune_sco(double G, double R, double kappa, int d, long T, double sigma);

struct ScoResult {
  Vector w_hat;
  RunTrace trace;
  double objective_at_w_hat = 0.0;
  double comparator_value = 0.0;
  double comparator_tol = 0.0;
  double gap = 0.0;
  long noise_draws = 0;
  long noise_clipped = 0;
};

// Online-to-batch driver: runs the gauge reduction with the barrier learner
// on noisy subgradients of `objective` and returns the averaged play. With
// sigma = 0 the run is bit-deterministic given the seed.
ScoResult run_sco(BodyPtr body, const Objective& objective, double sigma,
                  std::uint64_t seed, long T,
                  const ScoParams* params_override = nullptr,
                  int record_stride = 0);

struct SolveResult {
  Vector point;
  double achieved_gap = 0.0;
  double comparator_tol = 0.0;
  long T_used = 0;
  long T_requested = 0;
  bool budget_exceeded = false;
  double c_log = 0.0;
};

// Offline driver: picks T = ceil(C_log * G R kappa d / eps_target) with
// C_log = 100 * ln(2 + d/eps_target) and runs the sigma = 0 conversion. When
// T would exceed `hard_cap`, runs at the cap and flags the result instead of
// failing.
SolveResult solve_to_eps(BodyPtr body, const Objective& objective,
                         double eps_target, double G, double R, double kappa,
                         int d, long hard_cap = 2000000);

}  // namespace gaugeoco
