#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gaugeoco/types.hpp"

namespace gaugeoco {

// Answer of one separation-oracle query. `normal` is the zero vector on
// membership; otherwise a unit-or-shorter direction v with
// <v, w> strictly greater than <v, u> for every u in the body.
struct SeparationResult {
  bool is_member = false;
  Vector normal;
};

// Points with constraint slack within this tolerance count as members, which
// keeps bisection over the membership boundary stable under floating point.
inline constexpr double kMembershipSlack = 1e-12;

// A closed convex body with 0 in its interior, sandwiched between Euclidean
// balls B(r) and B(R). Construction validates the sandwich; instances are
// immutable afterwards and safe to share across threads.
//
// `separate` is the production oracle. `exact_gauge`, `support` and
// `support_point` are closed-form side oracles used for testing and for
// regret comparators; they are never consulted by the online algorithms.
class ConvexBody {
 public:
  virtual ~ConvexBody() = default;

  int dim() const { return dim_; }
  double inner_radius() const { return r_; }
  double outer_radius() const { return R_; }
  double asphericity() const { return R_ / r_; }
  std::pair<double, double> sandwich_radii() const { return {r_, R_}; }

  SeparationResult separate(const Vector& w) const;

  // Minkowski gauge inf{lambda >= 0 : w in lambda*K}.
  virtual double exact_gauge(const Vector& w) const = 0;

  // sup_{x in K} <x, g>. Throws ApproxComparatorRequired when no exact form
  // is computable (large polytopes).
  virtual double support(const Vector& g) const = 0;
  virtual Vector support_point(const Vector& g) const = 0;

  // Euclidean projection onto the body when a closed form exists.
  virtual bool has_euclidean_projection() const { return false; }
  virtual Vector euclidean_project(const Vector& w) const;

  virtual std::string kind() const = 0;
  std::string describe() const { return kind() + "_d" + std::to_string(dim_); }

 protected:
  ConvexBody(int dim, double r, double R);
  virtual SeparationResult separate_impl(const Vector& w) const = 0;

  int dim_;
  double r_;
  double R_;
};

using BodyPtr = std::shared_ptr<const ConvexBody>;

BodyPtr make_ball(int dim, double radius);
BodyPtr make_box(const Vector& lo, const Vector& hi);
// {x : x^T A x <= 1} with A symmetric positive-definite.
BodyPtr make_ellipsoid(const Matrix& A);
// {x : a_i^T x <= b_i} with every b_i > 0; must be bounded. The outer radius
// is obtained by vertex enumeration unless `outer_radius_hint` is supplied.
BodyPtr make_polytope(const Matrix& A, const Vector& b,
                      double outer_radius_hint = 0.0);
BodyPtr make_l1_ball(int dim, double radius);

// Vertices of {Ax <= b}, for small dimensions. Used by polytope support and
// by brute-force comparators in tests.
std::vector<Vector> enumerate_polytope_vertices(const Matrix& A, const Vector& b);

}  // namespace gaugeoco
