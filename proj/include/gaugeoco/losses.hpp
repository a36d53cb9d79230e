#pragma once

#include <memory>
#include <string>

#include "gaugeoco/geometry.hpp"
#include "gaugeoco/types.hpp"

namespace gaugeoco {

// Comparator for a finished run. For linear stream kinds `value` is the
// minimal cumulative linearized loss; for stationary objectives it is the
// per-round optimal objective value. `tol` is 0 when the comparator is exact
// and the achieved tolerance when the iterative fallback produced it.
struct OfflineOptimum {
  double value = 0.0;
  Vector point;
  double tol = 0.0;
  bool per_round = false;
};

// Stationary convex objective with bounded subgradients. The quadratic kind
// is distance-based and switches to its linear extension once the gradient
// cap binds, so values and subgradients always agree.
class Objective {
 public:
  virtual ~Objective() = default;
  int dim() const { return dim_; }
  double gradient_bound() const { return G_; }
  virtual Vector subgradient(const Vector& w) const = 0;
  virtual double value(const Vector& w) const = 0;
  virtual OfflineOptimum optimum(const ConvexBody& body) const = 0;
  virtual std::string kind() const = 0;

 protected:
  Objective(int dim, double G) : dim_(dim), G_(G) {}
  int dim_;
  double G_;
};

std::unique_ptr<Objective> make_linear_objective(Vector direction);
std::unique_ptr<Objective> make_quadratic_objective(Vector wstar, double G);

// Zero-mean spherical noise with E||xi||^2 <= sigma^2 (per-coordinate std
// sigma/sqrt(d), radially clipped at 5 sigma; the clip keeps the second
// moment under sigma^2 with margin and preserves the zero mean).
class NoiseModel {
 public:
  NoiseModel(double sigma, int dim);
  Vector draw(Rng& rng);
  long draws() const { return draws_; }
  long clipped() const { return clipped_; }
  double sigma() const { return sigma_; }

 private:
  double sigma_;
  int dim_;
  long draws_ = 0;
  long clipped_ = 0;
};

// Deterministic-seeded subgradient stream. Emitted subgradients are clipped
// to the declared bound G; the same seed always reproduces the same stream.
class LossStream {
 public:
  virtual ~LossStream() = default;

  int dim() const { return dim_; }
  double gradient_bound() const { return G_; }
  std::uint64_t seed() const { return seed_; }
  long emissions() const { return last_t_; }
  const Vector& grad_sum() const { return grad_sum_; }

  // t must be strictly increasing across calls.
  Vector next_subgradient(const Vector& w, long t);

  virtual std::string kind() const = 0;
  virtual bool has_objective() const { return false; }
  virtual const Objective& objective() const;
  virtual std::unique_ptr<LossStream> clone_with_seed(std::uint64_t seed) const = 0;
  virtual long noise_draws() const { return 0; }
  virtual long noise_clipped() const { return 0; }

 protected:
  LossStream(int dim, double G, std::uint64_t seed, bool clip_to_bound = true);
  virtual Vector raw_subgradient(const Vector& w, long t) = 0;

  int dim_;
  double G_;
  std::uint64_t seed_;
  bool clip_to_bound_;
  long last_t_ = 0;
  Vector grad_sum_;
};

// Seeded Rademacher signs on a fixed direction; independent of the play.
std::unique_ptr<LossStream> make_sign_stream(Vector direction, double G,
                                             std::uint64_t seed);

// Fresh seeded Rademacher coordinate signs each round, scaled to norm G.
std::unique_ptr<LossStream> make_rademacher_stream(int dim, double G,
                                                   std::uint64_t seed);

// Thin-axis adversary: sign-punishment on a sqrt(t)-paced schedule of density
// punish_rate/sqrt(t), a deterministic ~drift*sqrt(T) needle of +1 rounds,
// and otherwise square-wave blocks of half-period block_scale*sqrt(T) (zero
// losses when block_scale = 0). Bills each subroutine its own oscillation
// width along the axis on a sqrt(T)-size schedule.
std::unique_ptr<LossStream> make_killer_kappa_stream(int dim, int axis, double G,
                                                     long T, double block_scale,
                                                     double drift, double punish_rate,
                                                     std::uint64_t seed);

// Fixed mean gradient plus seeded noise, clipped to G.
std::unique_ptr<LossStream> make_linear_stochastic_stream(Vector gbar,
                                                          double sigma, double G,
                                                          std::uint64_t seed);

// Exact subgradients of the (capped) quadratic centred at wstar.
std::unique_ptr<LossStream> make_quadratic_stream(Vector wstar, double G,
                                                  std::uint64_t seed);

// Exact subgradients of `objective` plus fresh noise each round; not clipped
// to G (only the mean gradient is bounded). Internal to the stochastic driver.
std::unique_ptr<LossStream> make_noisy_objective_stream(const Objective& objective,
                                                        double sigma,
                                                        std::uint64_t seed);

OfflineOptimum offline_optimum(const LossStream& stream, const ConvexBody& body);

// Gauge-projected subgradient descent fallback for comparators without a
// closed form. Returns the best visited point and a tolerance estimate.
OfflineOptimum minimize_over_body(
    const ConvexBody& body, const Objective& objective, long iterations = 100000);

}  // namespace gaugeoco
