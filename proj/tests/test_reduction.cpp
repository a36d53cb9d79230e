#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "gaugeoco/harness.hpp"
#include "gaugeoco/losses.hpp"
#include "gaugeoco/reduction.hpp"

using namespace gaugeoco;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector unit(int d, int axis) {
  Vector v = Vector::Zero(d);
  v[axis] = 1.0;
  return v;
}

// Thin first axis, wide remainder; the standard ill-conditioned instance.
BodyPtr aniso_box(int d, double width) {
  Vector lo = Vector::Constant(d, -width), hi = Vector::Constant(d, width);
  lo[0] = -1.0;
  hi[0] = 1.0;
  return make_box(lo, hi);
}

Vector interior_grid_point(const ConvexBody& body, Rng& rng) {
  const Vector dir = rng.unit_vector(body.dim());
  return dir * (0.95 * rng.next_double() / body.exact_gauge(dir));
}

}  // namespace

TEST_CASE("surrogate gradient branches") {
  // Indicator off when <g, u> >= 0.
  const Vector g = vec2(1.0, 0.5);
  const Vector u = vec2(2.0, 0.0);
  const Vector s = vec2(1.0, 0.0);
  CHECK(surrogate_gradient(g, u, u / 2.0, s) == g);

  // Member branch: s = 0 keeps g.
  CHECK(surrogate_gradient(vec2(-1, 0), vec2(0.5, 0), vec2(0.5, 0), vec2(0, 0)) ==
        vec2(-1, 0));

  // Unit ball, u = (-2, 0): exact gauge subgradient s = (-1, 0), w = (-1, 0),
  // <g, u> = -2 < 0 and <g, w> = -1, so the correction cancels g entirely.
  const Vector gt = surrogate_gradient(vec2(1, 0), vec2(-2, 0), vec2(-1, 0),
                                       vec2(-1, 0));
  CHECK(gt.norm() == 0.0);
}

TEST_CASE("surrogate transfer inequality on the ball example") {
  auto ball = make_ball(2, 1.0);
  const long T = 100;
  const double G = 1.0, R = 1.0;
  const Vector u = vec2(-2.0, 0.0);
  const auto est = gauge_dist(*ball, u, 1.0 / T, 1.0);
  const Vector w = u / (1.0 + est.S);
  const Vector g = vec2(1.0, 0.0);
  const Vector gt = surrogate_gradient(g, u, w, est.s);
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const Vector x = interior_grid_point(*ball, rng);
    CHECK(g.dot(w - x) <= gt.dot(u - x) + 2.0 * G * R / T + 1e-9);
  }
}

TEST_CASE("tuned parameters match the closed forms") {
  const double G = 1.0, R = 1.0, kappa = 1.0;
  const int d = 4;
  const long T = 10000;
  const auto p = tune_oco(G, R, kappa, d, T);
  const double log_term = std::log(1.0 + double(T) / d);
  CHECK(p.c == 0.5);
  CHECK(p.eps == doctest::Approx(1e-4));
  CHECK(p.eta == doctest::Approx(std::min(0.1, std::sqrt(8.0 * log_term / T))));
  CHECK(p.nu == doctest::Approx(std::max(80.0, std::sqrt(4.0 * T / log_term))));

  // kappa-dominated branch.
  const auto pk = tune_oco(G, R, 1e6, d, T);
  CHECK(pk.eta == doctest::Approx(1.0 / (10.0 * 1e6 * G * R)));
  CHECK(pk.nu == doctest::Approx(20.0 * 1e6 * d * G * R));

  // Large-T branch: eta ~ sqrt(d log T / T), nu ~ sqrt(dT / log T).
  const long big = 100000000;
  const auto pt = tune_oco(G, R, 1.0, d, big);
  const double lt = std::log(1.0 + double(big) / d);
  CHECK(pt.eta == doctest::Approx(std::sqrt(2.0 * d * lt / big)));
  CHECK(pt.nu == doctest::Approx(std::sqrt(double(d) * big / lt)));
}

TEST_CASE("ogd ball step examples") {
  const double R = 1.0, Gt = 2.0;
  // Full-length first step lands exactly on the boundary.
  const Vector u1 = ogd_ball_step(Vector::Zero(2), Gt * unit(2, 0), 1, Gt, R);
  CHECK((u1 - vec2(-1, 0)).norm() <= 1e-15);
  // Zero gradient: no movement.
  CHECK(ogd_ball_step(vec2(0.3, 0.1), Vector::Zero(2), 5, Gt, R) == vec2(0.3, 0.1));
  // Interior step: pure gradient step, no clipping.
  const Vector u2 = ogd_ball_step(vec2(0.1, 0.0), vec2(0.0, 0.2), 4, Gt, R);
  CHECK((u2 - vec2(0.1, -0.05)).norm() <= 1e-15);
}

TEST_CASE("fresh runner plays the origin") {
  auto ball = make_ball(3, 1.0);
  auto p = tune_oco(1.0, 1.0, 1.0, 3, 100);
  GaugeOcoRunner runner(ball, std::make_unique<BarrierOnsSubroutine>(p.bons(), 3),
                        p);
  CHECK(runner.current_play().norm() == 0.0);
}

TEST_CASE("interior runs make the reduction an identity wrapper") {
  // Tiny gradients on the unit ball keep every iterate strictly inside K, so
  // w_t == u_t and g_tilde == g_t round for round.
  auto ball = make_ball(2, 1.0);
  auto p = tune_oco(0.01, 1.0, 1.0, 2, 200);
  auto stream = make_sign_stream(unit(2, 0), 0.01, 17);
  auto trace = run_oco(ball, *stream, p, SubroutineKind::barrier_ons, 1);
  for (const auto& rec : trace.records) {
    CHECK(rec.w == rec.u);
    CHECK(rec.g_tilde == rec.g);
    CHECK(rec.S == 0.0);
    CHECK(rec.sep_calls == 1);
  }
}

TEST_CASE("repeated linear loss stays feasible and beats no comparator") {
  const int d = 3;
  const long T = 100;
  auto ball = make_ball(d, 1.0);
  auto p = tune_oco(1.0, 1.0, 1.0, d, T);
  GaugeOcoRunner runner(ball, std::make_unique<BarrierOnsSubroutine>(p.bons(), d),
                        p);
  const Vector g = unit(d, 0);
  double algo_loss = 0.0;
  for (long t = 1; t <= T; ++t) {
    const Vector& w = runner.current_play();
    CHECK(ball->exact_gauge(w) <= 1.0 + 1e-10);
    algo_loss += g.dot(w);
    runner.step(g);
  }
  // Comparator optimum is -e1 with cumulative loss -T.
  CHECK(algo_loss >= -double(T));
}

TEST_CASE("zero losses produce zero regret and zero plays") {
  auto ball = make_ball(3, 1.0);
  auto p = tune_oco(1e-9, 1.0, 1.0, 3, 50);
  auto stream = make_sign_stream(unit(3, 0), 0.0, 1);
  auto trace = run_oco(ball, *stream, p, SubroutineKind::barrier_ons, 1);
  CHECK(trace.linear_loss_sum == 0.0);
  CHECK(trace.grad_sum.norm() == 0.0);
  for (const auto& rec : trace.records) CHECK(rec.w.norm() == 0.0);
}

TEST_CASE("round records satisfy the projection identities") {
  auto box = aniso_box(4, 5.0);
  const long T = 300;
  auto p = tune_oco(1.0, box->outer_radius(), box->asphericity(), 4, T);
  auto stream = make_rademacher_stream(4, 1.0, 23);
  auto trace = run_oco(box, *stream, p, SubroutineKind::barrier_ons, 1);
  REQUIRE(trace.records.size() == size_t(T));
  for (const auto& rec : trace.records) {
    CHECK((rec.w - rec.u / (1.0 + rec.S)).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK(box->exact_gauge(rec.w) <= 1.0 + 1e-10);
  }
  CHECK(trace.max_gauge_of_w <= 1.0 + 1e-10);
  CHECK(trace.max_u_norm < p.R);
}

TEST_CASE("reduction invariants over both subroutines") {
  const int d = 3;
  const long T = 500;
  auto box = aniso_box(d, 4.0);
  const double G = 1.0;
  const double kappa = box->asphericity();
  const double R = box->outer_radius();
  auto p = tune_oco(G, R, kappa, d, T);

  for (auto kind : {SubroutineKind::barrier_ons, SubroutineKind::ogd_ball}) {
    auto stream = make_rademacher_stream(d, G, 31);
    auto trace = run_oco(box, *stream, p, kind, 1);

    // Surrogate norm bound 2 kappa G.
    CHECK(trace.max_g_tilde_norm <= 2.0 * kappa * G + 1e-9);

    // Per-round separation budget 2 + ceil(log2(4 R^2 T / r^2)) + guard.
    const double r = box->inner_radius();
    const long budget = 2 +
        long(std::ceil(std::log2(4.0 * R * R * double(T) / (r * r)))) +
        long(std::ceil(std::log2(std::max(2.0, R / r)))) + 1;
    CHECK(trace.max_round_sep_calls <= budget);

    // Instantaneous transfer and cumulative transfer on grid comparators.
    Rng rng(37);
    for (int k = 0; k < 16; ++k) {
      const Vector x = interior_grid_point(*box, rng);
      double lhs_sum = 0.0, rhs_sum = 0.0;
      for (const auto& rec : trace.records) {
        const double lhs = rec.g.dot(rec.w - x);
        const double rhs = rec.g_tilde.dot(rec.u - x) + 2.0 * G * R / double(T);
        CHECK(lhs <= rhs + 1e-9);
        lhs_sum += rec.g.dot(rec.w - x);
        rhs_sum += rec.g_tilde.dot(rec.u - x);
      }
      CHECK(lhs_sum <= rhs_sum + 2.0 * G * R + 1e-9);
    }
  }
}

TEST_CASE("regret transfer bound holds on compliant runs") {
  // The pre-tuning inequality: for comparators in the interior,
  // sum <g_t, w_t - w> <= eta/2 sum <g_t, w_t - w>^2 + 5 kappa G R
  //   - nu log(1 - ||w||^2/R^2) + 4 d log(1+T/d)/eta.
  const int d = 3;
  const long T = 800;
  auto box = aniso_box(d, 3.0);
  const double G = 1.0;
  const double R = box->outer_radius();
  const double kappa = box->asphericity();
  auto p = tune_oco(G, R, kappa, d, T);
  auto stream = make_rademacher_stream(d, G, 41);
  auto trace = run_oco(box, *stream, p, SubroutineKind::barrier_ons, 1);

  const double log_term = std::log(1.0 + double(T) / d);
  Rng rng(43);
  for (int k = 0; k < 24; ++k) {
    const Vector w = interior_grid_point(*box, rng);
    double lin = 0.0, sq = 0.0;
    for (const auto& rec : trace.records) {
      const double inner = rec.g.dot(rec.w - w);
      lin += inner;
      sq += inner * inner;
    }
    const double rhs = 0.5 * p.eta * sq + 5.0 * kappa * G * R -
                       p.nu * std::log(1.0 - w.squaredNorm() / (R * R)) +
                       4.0 * d * log_term / p.eta;
    CHECK(lin <= rhs + 1e-6);
  }
}

TEST_CASE("trace counters equal the per-round instrumentation") {
  auto box = aniso_box(3, 4.0);
  const long T = 400;
  auto p = tune_oco(1.0, box->outer_radius(), box->asphericity(), 3, T);
  auto stream = make_rademacher_stream(3, 1.0, 57);
  auto trace = run_oco(box, *stream, p, SubroutineKind::barrier_ons, 1);
  long sum = 0;
  for (const auto& rec : trace.records) sum += rec.sep_calls;
  CHECK(sum == trace.sep_oracle_calls);
}

TEST_CASE("baseline's fitted constant is stable under horizon doubling") {
  // regret <= C kappa G R sqrt(T) with C not growing across doublings.
  const int d = 6;
  auto box = aniso_box(d, 10.0);
  const double G = 1.0, R = box->outer_radius(), kappa = box->asphericity();
  std::vector<double> fitted;
  for (long T : {4000L, 8000L, 16000L, 32000L}) {
    auto p = tune_oco(G, R, kappa, d, T);
    auto stream = make_killer_kappa_stream(d, 0, G, T, 0.0, 0.0, 8.0, 1);
    auto trace = run_oco(box, *stream, p, SubroutineKind::ogd_ball, 0);
    const double reg = regret(trace, *box, *stream);
    CHECK(reg > 0.0);
    fitted.push_back(reg / (kappa * G * R * std::sqrt(double(T))));
  }
  for (size_t i = 1; i < fitted.size(); ++i) {
    CHECK(fitted[i] <= 1.5 * fitted[i - 1]);
  }
}

TEST_CASE("subroutine escape is detected") {
  // An adversarial subroutine that jumps outside B(R) must trip the fault.
  class Escaper final : public BallAlgorithm {
   public:
    explicit Escaper(int d) : u_(Vector::Zero(d)) {}
    const Vector& iterate() const override { return u_; }
    void observe(const Vector&) override { u_ = Vector::Constant(u_.size(), 100.0); }

   private:
    Vector u_;
  };
  auto ball = make_ball(2, 1.0);
  OcoParams p = tune_oco(1.0, 1.0, 1.0, 2, 10);
  GaugeOcoRunner runner(ball, std::make_unique<Escaper>(2), p);
  runner.step(unit(2, 0));
  CHECK_THROWS_AS(runner.current_play(), InvariantViolation);
}
