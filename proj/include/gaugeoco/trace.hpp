#pragma once

#include <vector>

#include "gaugeoco/types.hpp"

namespace gaugeoco {

// One round of the reduction loop. Kept for every round when T <= 10^4,
// strided above that; the totals in RunTrace are always exact.
struct RoundRecord {
  long t = 0;
  Vector u;
  Vector w;
  Vector g;
  Vector g_tilde;
  double S = 0.0;
  long sep_calls = 0;
};

struct RunTrace {
  std::vector<RoundRecord> records;
  int stride = 1;

  long T = 0;
  int d = 0;

  // Exact reductions over all rounds, independent of record striding.
  double linear_loss_sum = 0.0;  // sum_t <g_t, w_t>
  Vector grad_sum;               // sum_t g_t
  Vector play_sum;               // sum_t w_t
  double value_sum = 0.0;        // sum_t f(w_t) when the objective has values
  bool has_values = false;

  long sep_oracle_calls = 0;
  long full_inversions = 0;
  long z_updates = 0;
  long max_round_sep_calls = 0;

  // Feasibility watermarks.
  double max_gauge_of_w = 0.0;
  double max_u_norm = 0.0;
  double max_g_tilde_norm = 0.0;
  double max_g_norm = 0.0;

  double wall_ms = 0.0;

  // Parameter echo.
  double eta = 0.0;
  double nu = 0.0;
  double c = 0.0;
  double eps = 0.0;
  double kappa = 0.0;

  Vector average_play() const {
    if (T == 0) return play_sum;
    return play_sum / static_cast<double>(T);
  }
};

inline int default_record_stride(long T) { return T <= 10000 ? 1 : 10; }

}  // namespace gaugeoco
