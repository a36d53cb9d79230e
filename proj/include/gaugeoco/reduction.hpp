#pragma once

#include <memory>

#include "gaugeoco/barrier_ons.hpp"
#include "gaugeoco/gauge.hpp"
#include "gaugeoco/geometry.hpp"
#include "gaugeoco/trace.hpp"
#include "gaugeoco/types.hpp"

namespace gaugeoco {

class LossStream;

// Tuned configuration of the gauge-projection reduction wrapped around the
// barrier learner. eps is pinned to 1/T.
struct OcoParams {
  long T = 1;
  double G = 1.0;
  double R = 1.0;
  double r = 1.0;
  double kappa = 1.0;
  double eta = 0.1;
  double nu = 10.0;
  double c = 0.5;
  double eps = 1.0;
  int m = 0;  // 0 -> auto Taylor order
  long full_reinversion_period = 2048;

  BarrierOnsParams bons() const {
    BarrierOnsParams p;
    p.T = T;
    p.eta = eta;
    p.nu = nu;
    p.c = c;
    p.R = R;
    p.m = m;
    p.full_reinversion_period = full_reinversion_period;
    return p;
  }
};

// eta = (1/GR) min(1/(10 kappa), sqrt(2 d log(1+T/d) / T)),
// nu  = GR max(20 kappa d, sqrt(d T / log(1+T/d))), c = 1/2.
OcoParams tune_oco(double G, double R, double kappa, int d, long T);

// g_tilde = g - 1{<g,u> < 0} <g,w> s.
Vector surrogate_gradient(const Vector& g, const Vector& u, const Vector& w,
                          const Vector& s);

// One anytime projected-gradient step over B(R) with step R/(g_bound sqrt(t));
// the ball projection is the O(d) radial clip.
Vector ogd_ball_step(const Vector& u, const Vector& g_tilde, long t,
                     double g_bound, double R);

// Any online learner over the ball B(R) usable as the reduction subroutine.
class BallAlgorithm {
 public:
  virtual ~BallAlgorithm() = default;
  virtual const Vector& iterate() const = 0;
  virtual void observe(const Vector& g_tilde) = 0;
  virtual long inversion_count() const { return 0; }
  virtual long z_update_count() const { return 0; }
};

class BarrierOnsSubroutine final : public BallAlgorithm {
 public:
  BarrierOnsSubroutine(const BarrierOnsParams& p, int dim) : learner_(p, dim) {}
  const Vector& iterate() const override { return learner_.iterate(); }
  void observe(const Vector& g_tilde) override { learner_.update(g_tilde); }
  long inversion_count() const override { return learner_.inversion_count(); }
  long z_update_count() const override { return learner_.z_update_count(); }
  const BarrierOns& learner() const { return learner_; }

 private:
  BarrierOns learner_;
};

class OgdBallSubroutine final : public BallAlgorithm {
 public:
  OgdBallSubroutine(int dim, double g_bound, double R)
      : u_(Vector::Zero(dim)), g_bound_(g_bound), R_(R) {}
  const Vector& iterate() const override { return u_; }
  void observe(const Vector& g_tilde) override {
    ++t_;
    u_ = ogd_ball_step(u_, g_tilde, t_, g_bound_, R_);
  }

 private:
  Vector u_;
  double g_bound_;
  double R_;
  long t_ = 0;
};

enum class SubroutineKind { barrier_ons, ogd_ball };

// Plays gauge projections of a ball-domain subroutine's iterates and feeds it
// surrogate loss vectors, making any stream over `body` look like a stream
// over B(R) to the subroutine. Strictly sequential; one instance per run.
class GaugeOcoRunner {
 public:
  GaugeOcoRunner(BodyPtr body, std::unique_ptr<BallAlgorithm> subroutine,
                 const OcoParams& params);

  // Feasible point for the current round (computes the gauge projection of
  // the subroutine iterate on first use each round).
  const Vector& current_play();

  // Complete the round with the observed subgradient of the round loss at
  // current_play(); returns the finished record.
  RoundRecord step(const Vector& g);

  long round() const { return t_; }
  const OcoParams& params() const { return params_; }
  const BallAlgorithm& subroutine() const { return *subroutine_; }
  long sep_oracle_calls() const { return sep_calls_total_; }
  long last_round_sep_calls() const { return last_round_sep_calls_; }

 private:
  void prepare();

  BodyPtr body_;
  std::unique_ptr<BallAlgorithm> subroutine_;
  OcoParams params_;
  long t_ = 0;
  bool prepared_ = false;
  Vector u_;
  Vector w_;
  GaugeEstimate est_;
  long sep_calls_total_ = 0;
  long last_round_sep_calls_ = 0;
};

// Full driver: runs the reduction for params.T rounds against `stream`.
RunTrace run_oco(BodyPtr body, LossStream& stream, const OcoParams& params,
                 SubroutineKind kind, int record_stride = 0);

}  // namespace gaugeoco
