#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gaugeoco/barrier_ons.hpp"

using namespace gaugeoco;

namespace {

BarrierOnsParams compliant_params(long T, double g_bound, double R) {
  BarrierOnsParams p;
  p.T = T;
  p.R = R;
  p.eta = 1.0 / (5.0 * g_bound * R);
  p.nu = 10.0 * g_bound * R;
  p.c = 0.5;
  return p;
}

Matrix hessian_of_state(const BarrierOns& state) {
  const auto& p = state.params();
  const Vector& u = state.iterate();
  const double gap = p.R * p.R - u.squaredNorm();
  Matrix H = (4.0 * p.nu / (gap * gap)) * (u * u.transpose());
  H.diagonal().array() += 2.0 * p.nu / gap;
  H += p.eta * state.gram();
  return H;
}

}  // namespace

TEST_CASE("initial state") {
  BarrierOnsParams p;
  p.T = 10;
  p.nu = 1.0;
  p.R = 1.0;
  BarrierOns a(p, 3);
  CHECK((a.sigma_prime() - 0.5 * Matrix::Identity(3, 3)).norm() == 0.0);
  CHECK(a.iterate().norm() == 0.0);

  p.nu = 2.0;
  p.R = 3.0;
  BarrierOns b(p, 2);
  CHECK((b.sigma_prime() - 2.25 * Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("parameter validation and compliance flags") {
  BarrierOnsParams p;
  p.c = 1.5;
  CHECK_THROWS_AS(p.validate(), UsageError);

  BarrierOnsParams q = compliant_params(100, 1.0, 2.0);
  CHECK(q.eta_compliant(1.0));
  CHECK(q.nu_compliant(1.0, 4));
  CHECK_FALSE(q.eta_compliant(10.0));
  CHECK_FALSE(BarrierOnsParams{.T = 1, .eta = 0.1, .nu = 1e9, .c = 0.5, .R = 1.0}
                  .nu_compliant(1.0, 2));
}

TEST_CASE("first update matches the rank-one closed form") {
  BarrierOnsParams p;
  p.T = 5;
  p.eta = 0.1;
  p.nu = 2.0;
  p.R = 1.5;
  Vector g(3);
  g << 0.3, -0.4, 0.2;

  BarrierOns state(p, 3);
  state.update(g);
  const double R2 = p.R * p.R;
  const Vector expected = -g * R2 / (2.0 * p.nu + p.eta * R2 * g.squaredNorm());
  CHECK((state.iterate() - expected).norm() <= 1e-12);
}

TEST_CASE("zero loss vector leaves the iterate unchanged") {
  BarrierOnsParams p = compliant_params(5, 1.0, 1.0);
  BarrierOns state(p, 4);
  state.update(Vector::Zero(4));
  CHECK(state.iterate().norm() == 0.0);
  CHECK(state.round() == 1);
  CHECK(state.gram().norm() == 0.0);
}

TEST_CASE("grad_phi matches the history gradient and finite differences") {
  const int d = 4;
  BarrierOnsParams p = compliant_params(50, 1.0, 1.3);
  BarrierOns state(p, d);
  BonsHistory history;
  Rng rng(31);

  // After round 1 with u_1 = 0: gradient of the next objective at 0 is g_1.
  const Vector g1 = 0.5 * rng.unit_vector(d);
  state.update(g1);
  history.emplace_back(Vector::Zero(d), g1);
  CHECK((state.grad_phi_at(Vector::Zero(d)) - g1).norm() <= 1e-14);

  for (int t = 0; t < 20; ++t) {
    const Vector u = state.iterate();
    const Vector g = 0.8 * rng.unit_vector(d) * rng.next_double();
    state.update(g);
    history.emplace_back(u, g);
  }

  const Vector x = state.iterate();
  const Vector grad = state.grad_phi();
  CHECK((grad - phi_gradient(history, p, x)).norm() <= 1e-10 * (1.0 + grad.norm()));

  // Central differences of the potential, step 1e-6 * R.
  const double h = 1e-6 * p.R;
  for (int i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = h;
    const double fd = (phi_value(history, p, x + e) - phi_value(history, p, x - e)) /
                      (2.0 * h);
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("taylor_apply with a fresh expansion point is one curvature solve") {
  BarrierOnsParams p = compliant_params(10, 1.0, 1.0);
  BarrierOns state(p, 3);
  // At init z == u == 0, so all higher-order terms vanish.
  Vector grad(3);
  grad << 1.0, -2.0, 0.5;
  const Vector expected = state.sigma_matrix() * grad;
  CHECK((state.taylor_apply(grad) - expected).norm() <= 1e-13);
}

TEST_CASE("taylor_apply order one is the hand-expanded two-term sum") {
  const int d = 3;
  BarrierOnsParams p = compliant_params(100, 1.0, 1.0);
  p.m = 1;
  BarrierOns state(p, d);
  Rng rng(43);
  // Drift away from the origin so gamma is nonzero but z has not moved.
  for (int t = 0; t < 12; ++t) {
    Vector g = Vector::Constant(d, 0.4) + 0.2 * rng.gaussian_vector(d);
    state.update(g);
  }
  const Vector u = state.iterate();
  const Vector z = state.expansion_point();
  REQUIRE((u - z).norm() > 0.0);

  const double R2 = p.R * p.R;
  const double gamma =
      2.0 * p.nu / (R2 - z.squaredNorm()) - 2.0 * p.nu / (R2 - u.squaredNorm());
  REQUIRE(gamma != 0.0);

  const Matrix sigma = state.sigma_matrix();
  const Vector grad = rng.unit_vector(d);
  const Vector expected = sigma * grad + gamma * (sigma * (sigma * grad));
  CHECK((state.taylor_apply(grad) - expected).norm() <= 1e-12);
}

TEST_CASE("taylor series approximates the exact inverse curvature") {
  const int d = 5;
  Rng rng(57);
  for (int m : {3, 6, 10}) {
    BarrierOnsParams p = compliant_params(400, 1.0, 1.0);
    p.m = m;
    BarrierOns state(p, d);
    double worst = 0.0;
    for (int t = 0; t < 300; ++t) {
      Vector g = rng.unit_vector(d) * rng.next_double();
      if (t % 7 == 0) g = Vector::Constant(d, 0.9 / std::sqrt(double(d)));
      state.update(g);
      if (t % 25 != 0) continue;
      const Matrix H_exact = hessian_of_state(state);
      const Vector grad = rng.unit_vector(d);
      const Vector via_series = state.taylor_apply(grad);
      const Vector via_inverse = H_exact.llt().solve(grad);
      const double bound = p.R * p.R * std::pow(p.c, m) / (2.0 * p.nu * (1.0 - p.c));
      const double err = (via_series - via_inverse).norm();
      CHECK(err <= bound * grad.norm());
      worst = std::max(worst, err);
    }
    CHECK(worst < 1.0);
  }
}

TEST_CASE("efficient path matches the literal per-round implementation") {
  const int d = 5;
  const long T = 1000;
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    BarrierOnsParams p = compliant_params(T, 1.0, 1.0);
    BarrierOns fast(p, d);
    BarrierOnsReference slow(p, d);
    Rng rng(seed);
    double worst = 0.0;
    for (long t = 0; t < T; ++t) {
      const Vector g = rng.unit_vector(d) * rng.next_double();
      fast.update(g);
      slow.update(g);
      const double dev = (fast.iterate() - slow.iterate()).norm() /
                         std::max(p.R, slow.iterate().norm());
      worst = std::max(worst, dev);
      if (t % 100 == 0) {
        CHECK((fast.sigma_matrix() - slow.sigma_matrix()).norm() <= 1e-9);
      }
    }
    CHECK(worst <= 1e-8);
    CHECK(fast.z_update_count() == slow.z_update_count());
  }
}

TEST_CASE("maintained inverse stays consistent with its definition") {
  const int d = 4;
  BarrierOnsParams p = compliant_params(3000, 1.0, 1.0);
  p.full_reinversion_period = 512;
  BarrierOns state(p, d);
  Rng rng(71);
  for (long t = 0; t < 3000; ++t) {
    state.update(rng.unit_vector(d) * rng.next_double());
    if (t % 500 != 499) continue;
    const double z_gap = p.R * p.R - state.expansion_point().squaredNorm();
    Matrix precision = p.eta * state.gram();
    precision.diagonal().array() += 2.0 * p.nu / z_gap;
    const Matrix should_be_identity = state.sigma_prime() * precision;
    CHECK((should_be_identity - Matrix::Identity(d, d)).norm() <= 1e-6);
  }
  CHECK(state.inversion_count() >= 3000 / 512);
}

TEST_CASE("iterates stay strictly inside the ball on compliant runs") {
  const int d = 6;
  BarrierOnsParams p = compliant_params(2000, 2.0, 1.5);
  BarrierOns state(p, d);
  Rng rng(83);
  for (long t = 0; t < 2000; ++t) {
    state.update(2.0 * rng.unit_vector(d));
    CHECK(state.iterate().norm() < p.R);
  }
}

TEST_CASE("expansion point updates respect the stability budget") {
  const int d = 4;
  const long T = 5000;
  BarrierOnsParams p = compliant_params(T, 1.0, 1.0);
  BarrierOns state(p, d);
  Rng rng(97);
  for (long t = 0; t < T; ++t) state.update(rng.unit_vector(d));
  const double dd = d;
  const double budget =
      (52.0 / p.c) *
      std::sqrt(double(T) * (1.0 + dd / (p.nu * p.eta) * std::log(1.0 + double(T) / dd)));
  CHECK(double(state.z_update_count()) <= budget);
}

TEST_CASE("horizon exhaustion is a usage error") {
  BarrierOnsParams p = compliant_params(2, 1.0, 1.0);
  BarrierOns state(p, 2);
  state.update(Vector::Zero(2));
  state.update(Vector::Zero(2));
  CHECK_THROWS_AS(state.update(Vector::Zero(2)), UsageError);
}

TEST_CASE("ftrl_minimize on an empty history returns the barrier minimizer") {
  BarrierOnsParams p = compliant_params(10, 1.0, 2.0);
  const Vector w = ftrl_minimize({}, p, 3);
  CHECK(w.norm() == 0.0);
}

TEST_CASE("ftrl_minimize first-order behaviour for one linear loss") {
  BarrierOnsParams p;
  p.T = 10;
  p.eta = 0.01;
  p.nu = 500.0;
  p.R = 1.0;
  Vector g(2);
  g << 0.6, -0.8;
  BonsHistory history{{Vector::Zero(2), g}};
  const Vector w = ftrl_minimize(history, p, 2);
  const Vector approx = -(p.R * p.R / (2.0 * p.nu)) * g;
  CHECK((w - approx).norm() <= 1e-4 * approx.norm() + 1e-9);
  CHECK(phi_gradient(history, p, w).norm() <= 1e-7);
}

TEST_CASE("ftrl tracking: deviation and surrogate-regret inequalities") {
  const int d = 3;
  const long T = 300;
  const double g_bound = 1.0;
  BarrierOnsParams p = compliant_params(T, g_bound, 1.0);
  Rng rng(113);

  BarrierOns learner(p, d);
  BonsHistory history;
  double deviation_sum = 0.0;
  std::vector<Vector> ftrl_iterates;
  std::vector<Vector> gradients;

  for (long t = 1; t <= T; ++t) {
    const Vector u_t = learner.iterate();
    const Vector w_t = ftrl_minimize(history, p, d);
    ftrl_iterates.push_back(w_t);
    const Matrix H_t = phi_hessian(history, p, u_t);
    const Vector diff = u_t - w_t;
    deviation_sum += std::sqrt(std::max(0.0, diff.dot(H_t * diff)));

    const Vector g = rng.unit_vector(d) * rng.next_double();
    gradients.push_back(g);
    learner.update(g);
    history.emplace_back(u_t, g);
  }

  const double dd = d;
  const double log_term = std::log(1.0 + double(T) / dd);
  // Deviation sum: 3 sqrt(nu)/32 + 6 d ln(1+T/d) / (eta sqrt(nu)).
  const double deviation_budget = 3.0 * std::sqrt(p.nu) / 32.0 +
                                  6.0 * dd * log_term / (p.eta * std::sqrt(p.nu));
  CHECK(deviation_sum <= deviation_budget);

  // FTRL surrogate regret against comparators inside the ball:
  // sum [<w_t - w, g_t> - eta/2 <w_t - w, g_t>^2]
  //   <= Psi(w) - Psi(0) + 3 d ln(1+T/d)/eta.
  Rng grid_rng(211);
  for (int k = 0; k < 32; ++k) {
    const Vector w = grid_rng.unit_vector(d) * (0.9 * grid_rng.next_double());
    double lhs = 0.0;
    for (long t = 0; t < T; ++t) {
      const double inner = gradients[t].dot(ftrl_iterates[t] - w);
      lhs += inner - 0.5 * p.eta * inner * inner;
    }
    const double rhs = -p.nu * std::log(1.0 - w.squaredNorm() / (p.R * p.R)) +
                       3.0 * dd * log_term / p.eta;
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("surrogate regret bound of the learner itself") {
  const int d = 3;
  const long T = 2000;
  const double g_bound = 1.0;
  BarrierOnsParams p = compliant_params(T, g_bound, 1.0);
  BarrierOns learner(p, d);
  Rng rng(131);

  double a = 0.0;  // sum <u_t, g_t>
  double b = 0.0;  // sum <u_t, g_t>^2
  Vector v1 = Vector::Zero(d);
  Vector v2 = Vector::Zero(d);
  Matrix M = Matrix::Zero(d, d);
  for (long t = 1; t <= T; ++t) {
    const Vector u = learner.iterate();
    const Vector g = rng.unit_vector(d) * rng.next_double();
    const double ug = u.dot(g);
    a += ug;
    b += ug * ug;
    v1 += g;
    v2 += ug * g;
    M += g * g.transpose();
    learner.update(g);
  }

  const double log_term = std::log(1.0 + double(T) / d);
  Rng grid_rng(139);
  for (int k = 0; k < 64; ++k) {
    const Vector w = grid_rng.unit_vector(d) * (0.95 * grid_rng.next_double());
    const double linear = a - w.dot(v1);
    const double square = b - 2.0 * w.dot(v2) + w.dot(M * w);
    const double lhs = linear - 0.5 * p.eta * square;
    const double rhs = g_bound * p.R -
                       p.nu * std::log(1.0 - w.squaredNorm() / (p.R * p.R)) +
                       3.6 * d * log_term / p.eta;
    CHECK(lhs <= rhs + 1e-6);
  }
}
