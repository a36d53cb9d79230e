#include "gaugeoco/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaugeoco {

ConvexBody::ConvexBody(int dim, double r, double R) : dim_(dim), r_(r), R_(R) {
  if (dim < 1) throw UsageError("body dimension must be >= 1");
  if (!(r > 0.0) || !(R >= r) || !std::isfinite(R)) {
    throw UsageError("invalid sandwich radii: r=" + std::to_string(r) +
                     " R=" + std::to_string(R));
  }
}

SeparationResult ConvexBody::separate(const Vector& w) const {
  if (w.size() != dim_) throw DimensionMismatch(dim_, static_cast<int>(w.size()));
  require_finite(w, "separation query");
  SeparationResult res = separate_impl(w);
  if (!res.is_member) {
    const double n = res.normal.norm();
    if (n <= 0.0) throw InvariantViolation("separating normal is zero");
    res.normal /= n;
  }
  return res;
}

Vector ConvexBody::euclidean_project(const Vector&) const {
  throw UsageError("no closed-form Euclidean projection for " + kind());
}

namespace {

class Ball final : public ConvexBody {
 public:
  Ball(int dim, double radius) : ConvexBody(dim, radius, radius), radius_(radius) {}

  double exact_gauge(const Vector& w) const override { return w.norm() / radius_; }

  double support(const Vector& g) const override { return radius_ * g.norm(); }

  Vector support_point(const Vector& g) const override {
    const double n = g.norm();
    if (n < 1e-300) return Vector::Zero(dim_);
    return (radius_ / n) * g;
  }

  bool has_euclidean_projection() const override { return true; }

  Vector euclidean_project(const Vector& w) const override {
    const double n = w.norm();
    if (n <= radius_) return w;
    return (radius_ / n) * w;
  }

  std::string kind() const override { return "ball"; }

 protected:
  SeparationResult separate_impl(const Vector& w) const override {
    SeparationResult res;
    if (w.norm() <= radius_ * (1.0 + kMembershipSlack)) {
      res.is_member = true;
      res.normal = Vector::Zero(dim_);
    } else {
      res.is_member = false;
      res.normal = w;  // radial direction; normalized by the caller
    }
    return res;
  }

 private:
  double radius_;
};

class Box final : public ConvexBody {
 public:
  Box(Vector lo, Vector hi, double r, double R)
      : ConvexBody(static_cast<int>(lo.size()), r, R),
        lo_(std::move(lo)),
        hi_(std::move(hi)) {}

  double exact_gauge(const Vector& w) const override {
    double g = 0.0;
    for (int i = 0; i < dim_; ++i) {
      g = std::max(g, std::max(w[i] / hi_[i], w[i] / lo_[i]));
    }
    return g;
  }

  double support(const Vector& g) const override {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += g[i] > 0.0 ? g[i] * hi_[i] : g[i] * lo_[i];
    return s;
  }

  Vector support_point(const Vector& g) const override {
    Vector p(dim_);
    for (int i = 0; i < dim_; ++i) p[i] = g[i] > 0.0 ? hi_[i] : (g[i] < 0.0 ? lo_[i] : 0.0);
    return p;
  }

  bool has_euclidean_projection() const override { return true; }

  Vector euclidean_project(const Vector& w) const override {
    return w.cwiseMax(lo_).cwiseMin(hi_);
  }

  std::string kind() const override { return "box"; }

 protected:
  SeparationResult separate_impl(const Vector& w) const override {
    // Separate along the coordinate with the largest gauge ratio, so the
    // returned face is the one the query point violates the most.
    int best = -1;
    double worst = 1.0 + kMembershipSlack;
    double sign = 1.0;
    for (int i = 0; i < dim_; ++i) {
      const double up = w[i] / hi_[i];
      const double dn = w[i] / lo_[i];
      if (up > worst) {
        worst = up;
        best = i;
        sign = 1.0;
      }
      if (dn > worst) {
        worst = dn;
        best = i;
        sign = -1.0;
      }
    }
    SeparationResult res;
    if (best < 0) {
      res.is_member = true;
      res.normal = Vector::Zero(dim_);
    } else {
      res.is_member = false;
      res.normal = Vector::Zero(dim_);
      res.normal[best] = sign;
    }
    return res;
  }

 private:
  Vector lo_;
  Vector hi_;
};

class Ellipsoid final : public ConvexBody {
 public:
  Ellipsoid(Matrix A, Matrix A_inv, double r, double R)
      : ConvexBody(static_cast<int>(A.rows()), r, R),
        A_(std::move(A)),
        A_inv_(std::move(A_inv)) {}

  double exact_gauge(const Vector& w) const override {
    return std::sqrt(std::max(0.0, w.dot(A_ * w)));
  }

  double support(const Vector& g) const override {
    return std::sqrt(std::max(0.0, g.dot(A_inv_ * g)));
  }

  Vector support_point(const Vector& g) const override {
    const Vector h = A_inv_ * g;
    const double s = std::sqrt(std::max(0.0, g.dot(h)));
    if (s < 1e-300) return Vector::Zero(dim_);
    return h / s;
  }

  std::string kind() const override { return "ellipsoid"; }

 protected:
  SeparationResult separate_impl(const Vector& w) const override {
    SeparationResult res;
    const double q = w.dot(A_ * w);
    if (q <= (1.0 + kMembershipSlack) * (1.0 + kMembershipSlack)) {
      res.is_member = true;
      res.normal = Vector::Zero(dim_);
    } else {
      res.is_member = false;
      res.normal = A_ * w;  // gradient of the quadratic constraint at w
    }
    return res;
  }

 private:
  Matrix A_;
  Matrix A_inv_;
};

class Polytope final : public ConvexBody {
 public:
  Polytope(Matrix A, Vector b, std::vector<Vector> vertices, double r, double R)
      : ConvexBody(static_cast<int>(A.cols()), r, R),
        A_(std::move(A)),
        b_(std::move(b)),
        vertices_(std::move(vertices)) {}

  double exact_gauge(const Vector& w) const override {
    double g = 0.0;
    for (int i = 0; i < A_.rows(); ++i) g = std::max(g, A_.row(i).dot(w) / b_[i]);
    return g;
  }

  double support(const Vector& g) const override {
    if (vertices_.empty()) {
      throw ApproxComparatorRequired("polytope support requires vertex enumeration");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const Vector& v : vertices_) best = std::max(best, g.dot(v));
    return best;
  }

  Vector support_point(const Vector& g) const override {
    if (vertices_.empty()) {
      throw ApproxComparatorRequired("polytope support requires vertex enumeration");
    }
    const Vector* best = nullptr;
    double val = -std::numeric_limits<double>::infinity();
    for (const Vector& v : vertices_) {
      const double s = g.dot(v);
      if (s > val) {
        val = s;
        best = &v;
      }
    }
    return *best;
  }

  std::string kind() const override { return "polytope"; }

 protected:
  SeparationResult separate_impl(const Vector& w) const override {
    int best = -1;
    double worst = 1.0 + kMembershipSlack;
    for (int i = 0; i < A_.rows(); ++i) {
      const double ratio = A_.row(i).dot(w) / b_[i];
      if (ratio > worst) {
        worst = ratio;
        best = i;
      }
    }
    SeparationResult res;
    if (best < 0) {
      res.is_member = true;
      res.normal = Vector::Zero(dim_);
    } else {
      res.is_member = false;
      res.normal = A_.row(best).transpose();
    }
    return res;
  }

 private:
  Matrix A_;
  Vector b_;
  std::vector<Vector> vertices_;  // empty when enumeration was infeasible
};

class L1Ball final : public ConvexBody {
 public:
  L1Ball(int dim, double radius)
      : ConvexBody(dim, radius / std::sqrt(static_cast<double>(dim)), radius),
        radius_(radius) {}

  double exact_gauge(const Vector& w) const override {
    return w.lpNorm<1>() / radius_;
  }

  double support(const Vector& g) const override {
    return radius_ * g.lpNorm<Eigen::Infinity>();
  }

  Vector support_point(const Vector& g) const override {
    int best = 0;
    for (int i = 1; i < dim_; ++i) {
      if (std::abs(g[i]) > std::abs(g[best])) best = i;
    }
    Vector p = Vector::Zero(dim_);
    if (std::abs(g[best]) > 0.0) p[best] = g[best] > 0.0 ? radius_ : -radius_;
    return p;
  }

  std::string kind() const override { return "l1ball"; }

 protected:
  SeparationResult separate_impl(const Vector& w) const override {
    SeparationResult res;
    if (w.lpNorm<1>() <= radius_ * (1.0 + kMembershipSlack)) {
      res.is_member = true;
      res.normal = Vector::Zero(dim_);
    } else {
      res.is_member = false;
      Vector s(dim_);
      for (int i = 0; i < dim_; ++i) s[i] = w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0);
      res.normal = s;
    }
    return res;
  }

 private:
  double radius_;
};

}  // namespace

BodyPtr make_ball(int dim, double radius) {
  if (!(radius > 0.0)) throw UsageError("ball radius must be positive");
  return std::make_shared<Ball>(dim, radius);
}

BodyPtr make_box(const Vector& lo, const Vector& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw UsageError("box bounds mismatch");
  double r = std::numeric_limits<double>::infinity();
  double R2 = 0.0;
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < 0.0 && hi[i] > 0.0)) {
      throw UsageError("box must contain 0 in its interior");
    }
    r = std::min(r, std::min(hi[i], -lo[i]));
    const double far = std::max(hi[i], -lo[i]);
    R2 += far * far;
  }
  return std::make_shared<Box>(lo, hi, r, std::sqrt(R2));
}

BodyPtr make_ellipsoid(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0) throw UsageError("ellipsoid matrix must be square");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff())) {
    throw UsageError("ellipsoid matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0)) throw UsageError("ellipsoid matrix must be positive-definite");
  Matrix A_sym = 0.5 * (A + A.transpose());
  Matrix A_inv = A_sym.llt().solve(Matrix::Identity(A.rows(), A.cols()));
  // r = 1/sqrt(lambda_max), R = 1/sqrt(lambda_min)
  return std::make_shared<Ellipsoid>(std::move(A_sym), std::move(A_inv),
                                     1.0 / std::sqrt(lmax), 1.0 / std::sqrt(lmin));
}

std::vector<Vector> enumerate_polytope_vertices(const Matrix& A, const Vector& b) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  if (d > 12) throw ApproxComparatorRequired("vertex enumeration limited to d <= 12");

  std::vector<Vector> vertices;
  std::vector<int> idx(d);
  // Iterate over all d-subsets of rows.
  std::vector<int> comb(d);
  for (int i = 0; i < d; ++i) comb[i] = i;
  long combos = 0;
  const long combo_cap = 4000000;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  while (true) {
    if (++combos > combo_cap) {
      throw ApproxComparatorRequired("too many halfspace combinations to enumerate");
    }
    Matrix S(d, d);
    Vector rhs(d);
    for (int i = 0; i < d; ++i) {
      S.row(i) = A.row(comb[i]);
      rhs[i] = b[comb[i]];
    }
    Eigen::FullPivLU<Matrix> lu(S);
    if (lu.isInvertible()) {
      Vector x = lu.solve(rhs);
      bool feasible = true;
      for (int i = 0; i < m && feasible; ++i) {
        if (A.row(i).dot(x) > b[i] + 1e-9 * scale) feasible = false;
      }
      if (feasible) {
        bool dup = false;
        for (const Vector& v : vertices) {
          if ((v - x).lpNorm<Eigen::Infinity>() < 1e-9 * (1.0 + x.norm())) {
            dup = true;
            break;
          }
        }
        if (!dup) vertices.push_back(std::move(x));
      }
    }
    // next combination
    int i = d - 1;
    while (i >= 0 && comb[i] == m - d + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
  }
  return vertices;
}

BodyPtr make_polytope(const Matrix& A, const Vector& b, double outer_radius_hint) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  if (m < 1 || d < 1 || b.size() != m) throw UsageError("polytope shape mismatch");
  double r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    if (!(b[i] > 0.0)) throw UsageError("polytope offsets must be positive (0 interior)");
    const double an = A.row(i).norm();
    if (!(an > 0.0)) throw UsageError("polytope rows must be nonzero");
    r = std::min(r, b[i] / an);
  }

  std::vector<Vector> vertices;
  double R = outer_radius_hint;
  if (R <= 0.0) {
    vertices = enumerate_polytope_vertices(A, b);
    if (vertices.empty()) throw UsageError("polytope has no vertices; unbounded or empty");
    for (const Vector& v : vertices) R = std::max(R, v.norm());
    // Spot-check boundedness: along random directions the gauge must be
    // bounded below by ||u||/R, which fails along any recession direction.
    Rng rng(0x706f6c79ULL);
    auto body_gauge = [&](const Vector& u) {
      double g = 0.0;
      for (int i = 0; i < m; ++i) g = std::max(g, A.row(i).dot(u) / b[i]);
      return g;
    };
    for (int k = 0; k < 256; ++k) {
      const Vector u = rng.unit_vector(d);
      if (body_gauge(u) < 1.0 / R - 1e-9) {
        throw UsageError("polytope appears unbounded");
      }
    }
  } else if (d <= 12) {
    try {
      vertices = enumerate_polytope_vertices(A, b);
    } catch (const ApproxComparatorRequired&) {
      vertices.clear();
    }
  }
  return std::make_shared<Polytope>(A, b, std::move(vertices), r, R);
}

BodyPtr make_l1_ball(int dim, double radius) {
  if (!(radius > 0.0)) throw UsageError("l1 ball radius must be positive");
  return std::make_shared<L1Ball>(dim, radius);
}

}  // namespace gaugeoco
