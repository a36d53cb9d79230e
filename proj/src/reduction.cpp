#include "gaugeoco/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "gaugeoco/losses.hpp"

namespace gaugeoco {

OcoParams tune_oco(double G, double R, double kappa, int d, long T) {
  if (!(G > 0.0) || !(R > 0.0) || !(kappa >= 1.0) || d < 1 || T < 1) {
    throw UsageError("tune_oco: inputs must be positive (kappa >= 1, T >= 1)");
  }
  OcoParams p;
  p.T = T;
  p.G = G;
  p.R = R;
  p.r = R / kappa;
  p.kappa = kappa;
  p.c = 0.5;
  p.eps = 1.0 / static_cast<double>(T);
  const double dd = static_cast<double>(d);
  const double tt = static_cast<double>(T);
  const double log_term = std::log(1.0 + tt / dd);
  p.eta = (1.0 / (G * R)) *
          std::min(1.0 / (10.0 * kappa), std::sqrt(2.0 * dd * log_term / tt));
  p.nu = G * R * std::max(20.0 * kappa * dd, std::sqrt(dd * tt / log_term));
  return p;
}

Vector surrogate_gradient(const Vector& g, const Vector& u, const Vector& w,
                          const Vector& s) {
  if (g.dot(u) < 0.0) return g - g.dot(w) * s;
  return g;
}

Vector ogd_ball_step(const Vector& u, const Vector& g_tilde, long t,
                     double g_bound, double R) {
  if (t < 1) throw UsageError("ogd_ball_step: t must be >= 1");
  if (g_bound <= 0.0) return u;  // degenerate stream; nothing to follow
  const double step = R / (g_bound * std::sqrt(static_cast<double>(t)));
  Vector next = u - step * g_tilde;
  const double n = next.norm();
  if (n > R) next *= R / n;
  return next;
}

GaugeOcoRunner::GaugeOcoRunner(BodyPtr body,
                               std::unique_ptr<BallAlgorithm> subroutine,
                               const OcoParams& params)
    : body_(std::move(body)), subroutine_(std::move(subroutine)), params_(params) {
  if (!body_) throw UsageError("GaugeOcoRunner: body is null");
  if (!subroutine_) throw UsageError("GaugeOcoRunner: subroutine is null");
  if (!(params_.eps > 0.0)) throw UsageError("GaugeOcoRunner: eps must be > 0");
}

void GaugeOcoRunner::prepare() {
  if (prepared_) return;
  u_ = subroutine_->iterate();
  if (u_.norm() > params_.R * (1.0 + 1e-9)) {
    throw InvariantViolation("subroutine iterate escaped B(R): ||u||=" +
                             std::to_string(u_.norm()));
  }
  est_ = gauge_dist(*body_, u_, params_.eps, params_.r);
  w_ = est_.S == 0.0 ? u_ : Vector(u_ / (1.0 + est_.S));
  sep_calls_total_ += est_.oracle_calls;
  last_round_sep_calls_ = est_.oracle_calls;
  prepared_ = true;
}

const Vector& GaugeOcoRunner::current_play() {
  prepare();
  return w_;
}

RoundRecord GaugeOcoRunner::step(const Vector& g) {
  prepare();
  require_finite(g, "loss subgradient");

  RoundRecord rec;
  rec.t = ++t_;
  rec.u = u_;
  rec.w = w_;
  rec.g = g;
  rec.g_tilde = surrogate_gradient(g, u_, w_, est_.s);
  rec.S = est_.S;
  rec.sep_calls = est_.oracle_calls;

  subroutine_->observe(rec.g_tilde);
  prepared_ = false;
  return rec;
}

RunTrace run_oco(BodyPtr body, LossStream& stream, const OcoParams& params,
                 SubroutineKind kind, int record_stride) {
  const int d = body->dim();
  if (stream.dim() != d) throw DimensionMismatch(d, stream.dim());

  std::unique_ptr<BallAlgorithm> alg;
  if (kind == SubroutineKind::barrier_ons) {
    alg = std::make_unique<BarrierOnsSubroutine>(params.bons(), d);
  } else {
    const double surrogate_bound = 2.0 * params.kappa * params.G;
    alg = std::make_unique<OgdBallSubroutine>(d, surrogate_bound, params.R);
  }
  GaugeOcoRunner runner(body, std::move(alg), params);

  RunTrace trace;
  trace.T = params.T;
  trace.d = d;
  trace.stride = record_stride > 0 ? record_stride : default_record_stride(params.T);
  trace.grad_sum = Vector::Zero(d);
  trace.play_sum = Vector::Zero(d);
  trace.eta = params.eta;
  trace.nu = params.nu;
  trace.c = params.c;
  trace.eps = params.eps;
  trace.kappa = params.kappa;
  trace.has_values = stream.has_objective();

  for (long t = 1; t <= params.T; ++t) {
    const Vector& w = runner.current_play();
    const Vector g = stream.next_subgradient(w, t);
    RoundRecord rec = runner.step(g);

    trace.linear_loss_sum += rec.g.dot(rec.w);
    trace.grad_sum += rec.g;
    trace.play_sum += rec.w;
    if (trace.has_values) trace.value_sum += stream.objective().value(rec.w);
    trace.max_round_sep_calls = std::max(trace.max_round_sep_calls, rec.sep_calls);
    trace.max_gauge_of_w = std::max(trace.max_gauge_of_w, body->exact_gauge(rec.w));
    trace.max_u_norm = std::max(trace.max_u_norm, rec.u.norm());
    trace.max_g_tilde_norm = std::max(trace.max_g_tilde_norm, rec.g_tilde.norm());
    trace.max_g_norm = std::max(trace.max_g_norm, rec.g.norm());
    if ((t - 1) % trace.stride == 0) trace.records.push_back(std::move(rec));
  }

  trace.sep_oracle_calls = runner.sep_oracle_calls();
  trace.full_inversions = runner.subroutine().inversion_count();
  trace.z_updates = runner.subroutine().z_update_count();
  return trace;
}

}  // namespace gaugeoco
