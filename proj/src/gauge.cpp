#include "gaugeoco/gauge.hpp"

#include <cmath>

namespace gaugeoco {

long gauge_dist_call_budget(double w_norm, double eps, double r) {
  if (w_norm <= r) return 1;
  const long base = 1 + static_cast<long>(
      std::ceil(std::log2(4.0 * w_norm * w_norm / (r * r * eps))));
  const long guard = 1 + static_cast<long>(std::ceil(std::log2(w_norm / r)));
  return base + guard;
}

GaugeEstimate gauge_dist(const ConvexBody& body, const Vector& w, double eps,
                         double r) {
  if (!(eps > 0.0)) throw UsageError("gauge_dist: eps must be positive");
  if (!(r > 0.0)) throw UsageError("gauge_dist: r must be positive");
  require_finite(w, "gauge_dist query");

  GaugeEstimate est;
  SeparationResult sep = body.separate(w);
  est.oracle_calls = 1;
  if (sep.is_member) {
    est.S = 0.0;
    est.s = Vector::Zero(body.dim());
    return est;
  }

  const double wsq = w.squaredNorm();
  const double width_threshold = r * r * eps / (2.0 * wsq);

  double alpha = 0.0;
  double beta = 1.0;
  double mu = 0.5;
  // v is always the separating normal observed at the point beta * w; the
  // initial oracle call plays that role for beta = 1.
  Vector v = sep.normal;

  // The extra alpha > 0 condition stops the loop from ever exiting with an
  // empty inner bracket when eps is large; it costs at most
  // ceil(log2(||w||/r)) + 1 additional calls since the membership threshold
  // along the ray is at least r/||w||.
  while (beta - alpha > width_threshold || alpha == 0.0) {
    sep = body.separate(mu * w);
    ++est.oracle_calls;
    if (sep.is_member) {
      alpha = mu;
    } else {
      beta = mu;
      v = sep.normal;
    }
    mu = 0.5 * (alpha + beta);
  }

  double vw = v.dot(w);
  if (vw <= 0.0) {
    // Cannot occur for a valid separating direction against a body with 0 in
    // its interior, but guard the division under floating point anyway.
    sep = body.separate(beta * w);
    ++est.oracle_calls;
    if (sep.is_member || sep.normal.dot(w) <= 0.0) {
      throw InvariantViolation("gauge_dist: separating direction degenerate");
    }
    v = sep.normal;
    vw = v.dot(w);
  }

  est.S = 1.0 / alpha - 1.0;
  est.s = v / (beta * vw);
  return est;
}

std::pair<Vector, GaugeEstimate> gauge_project(const ConvexBody& body,
                                               const Vector& w, double eps,
                                               double r) {
  GaugeEstimate est = gauge_dist(body, w, eps, r);
  if (est.S == 0.0) return {w, std::move(est)};
  Vector point = w / (1.0 + est.S);
  return {std::move(point), std::move(est)};
}

}  // namespace gaugeoco
