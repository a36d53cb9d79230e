#pragma once

#include <utility>

#include "gaugeoco/geometry.hpp"
#include "gaugeoco/types.hpp"

namespace gaugeoco {

// Approximate gauge distance S and approximate subgradient s, plus the number
// of separation-oracle calls spent producing them.
// Invariants: S >= 0; ||s|| <= 1/r; S == 0 implies s == 0.
struct GaugeEstimate {
  double S = 0.0;
  Vector s;
  long oracle_calls = 0;
};

// Bisection over the membership boundary of `body` along the ray through w.
// Guarantees, with S* the exact gauge distance of w:
//   S* <= S <= S* + eps,
//   S*(u) >= S*(w) + <u - w, s> - eps   for all u,
// and at most 1 + ceil(log2(4||w||^2 / (r^2 eps))) oracle calls when w is
// outside the body (plus at most ceil(log2(||w||/r)) + 1 extra iterations
// spent making sure the inner bracket is strictly positive), and exactly one
// call when w is a member. `r` must satisfy B(r) subseteq body.
GaugeEstimate gauge_dist(const ConvexBody& body, const Vector& w, double eps,
                         double r);

// The induced feasible play w / (1 + S). Returns w itself (exactly) when w is
// a member; the returned point always has gauge <= 1.
std::pair<Vector, GaugeEstimate> gauge_project(const ConvexBody& body,
                                               const Vector& w, double eps,
                                               double r);

// Worst-case oracle-call budget for one gauge_dist invocation, including the
// positive-bracket guard margin. Used by instrumentation checks.
long gauge_dist_call_budget(double w_norm, double eps, double r);

}  // namespace gaugeoco
