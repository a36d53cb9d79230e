#include "gaugeoco/barrier_ons.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gaugeoco {

void BarrierOnsParams::validate() const {
  if (T < 1) throw UsageError("BarrierOnsParams: T must be >= 1");
  if (!(eta > 0.0) || !(nu > 0.0) || !(R > 0.0)) {
    throw UsageError("BarrierOnsParams: eta, nu, R must be positive");
  }
  if (!(c > 0.0 && c < 1.0)) throw UsageError("BarrierOnsParams: c must be in (0,1)");
  if (m < 0) throw UsageError("BarrierOnsParams: m must be >= 1 (or 0 for auto)");
  if (full_reinversion_period < 1) {
    throw UsageError("BarrierOnsParams: full_reinversion_period must be >= 1");
  }
}

int BarrierOnsParams::resolved_m(int d) const {
  if (m > 0) return m;
  // c^m <= (dT)^-4, so the truncated-series error is negligible at horizon T.
  const double dt = std::max(2.0, static_cast<double>(d) * static_cast<double>(T));
  return static_cast<int>(std::ceil(4.0 * std::log(dt) / std::log(1.0 / c)));
}

namespace {

// Shared gradient formula: 2 nu u / (R^2 - ||u||^2) + eta (V u - s_acc) + g_acc.
Vector barrier_grad(const Vector& u, const Matrix& V, const Vector& s_acc,
                    const Vector& g_acc, double nu, double eta, double R) {
  const double denom = R * R - u.squaredNorm();
  if (denom <= 0.0) {
    throw InvariantViolation("iterate escaped B(R): ||u||=" +
                             std::to_string(u.norm()) + " R=" + std::to_string(R));
  }
  return (2.0 * nu / denom) * u + eta * (V * u - s_acc) + g_acc;
}

double taylor_coefficient(const Vector& z, const Vector& u, double nu, double R) {
  const double R2 = R * R;
  return 2.0 * nu / (R2 - z.squaredNorm()) - 2.0 * nu / (R2 - u.squaredNorm());
}

bool expansion_point_fresh(const Vector& u_next, const Vector& z, double c, double R) {
  // Refreshing on the smaller of the two gaps keeps the Taylor-series ratio
  // below c even when the iterate drifts outward; the count of refreshes
  // keeps its sqrt(T) budget because every trigger still changes the barrier
  // gap by a (1 +/- c) factor.
  const double z_gap = R * R - z.squaredNorm();
  const double u_gap = R * R - u_next.squaredNorm();
  return std::abs(u_next.squaredNorm() - z.squaredNorm()) <=
         c * std::min(z_gap, u_gap);
}

}  // namespace

BarrierOns::BarrierOns(const BarrierOnsParams& params, int dim)
    : params_(params), d_(dim) {
  params_.validate();
  if (dim < 1) throw UsageError("BarrierOns: dim must be >= 1");
  m_ = params_.resolved_m(dim);
  u_ = Vector::Zero(dim);
  z_ = Vector::Zero(dim);
  sigma_prime_ = (params_.R * params_.R / (2.0 * params_.nu)) *
                 Matrix::Identity(dim, dim);
  V_ = Matrix::Zero(dim, dim);
  s_acc_ = Vector::Zero(dim);
  g_acc_ = Vector::Zero(dim);
}

Vector BarrierOns::grad_phi() const {
  return barrier_grad(u_, V_, s_acc_, g_acc_, params_.nu, params_.eta, params_.R);
}

Vector BarrierOns::grad_phi_at(const Vector& x) const {
  if (x.size() != d_) throw DimensionMismatch(d_, static_cast<int>(x.size()));
  return barrier_grad(x, V_, s_acc_, g_acc_, params_.nu, params_.eta, params_.R);
}

Vector BarrierOns::taylor_apply(const Vector& grad) const {
  const double nu = params_.nu;
  const double R2 = params_.R * params_.R;
  const double u_gap = R2 - u_.squaredNorm();

  // Curvature inverse with the rank-one iterate term folded in on the fly:
  // sigma x = sigma' x - q (4 nu <q, x> / denom), with q = sigma' u.
  const Vector q = sigma_prime_ * u_;
  const double denom = u_gap * u_gap + 4.0 * nu * u_.dot(q);
  const double corr = 4.0 * nu / denom;
  auto apply_sigma = [&](const Vector& x) -> Vector {
    return sigma_prime_ * x - q * (corr * q.dot(x));
  };

  const double gamma = taylor_coefficient(z_, u_, nu, params_.R);
  Vector delta = apply_sigma(grad);
  Vector term = delta;
  for (int k = 0; k < m_; ++k) {
    term = gamma * apply_sigma(term);
    delta += term;
  }
  return delta;
}

Matrix BarrierOns::sigma_matrix() const {
  const double nu = params_.nu;
  const double u_gap = params_.R * params_.R - u_.squaredNorm();
  const Vector q = sigma_prime_ * u_;
  const double denom = u_gap * u_gap + 4.0 * nu * u_.dot(q);
  return sigma_prime_ - (4.0 * nu / denom) * (q * q.transpose());
}

void BarrierOns::full_reinversion() {
  const double nu = params_.nu;
  const double z_gap = params_.R * params_.R - z_.squaredNorm();
  Matrix precision = params_.eta * V_;
  precision.diagonal().array() += 2.0 * nu / z_gap;
  sigma_prime_ = precision.llt().solve(Matrix::Identity(d_, d_));
  sigma_prime_ = 0.5 * (sigma_prime_ + sigma_prime_.transpose()).eval();
  ++inversion_count_;
}

void BarrierOns::update(const Vector& g_tilde) {
  if (g_tilde.size() != d_) throw DimensionMismatch(d_, static_cast<int>(g_tilde.size()));
  require_finite(g_tilde, "loss vector");
  if (t_ >= params_.T) throw UsageError("BarrierOns: horizon T exhausted");
  grad_norm_max_ = std::max(grad_norm_max_, g_tilde.norm());

  g_acc_ += g_tilde;
  s_acc_ += g_tilde * g_tilde.dot(u_);
  V_ += g_tilde * g_tilde.transpose();

  const Vector grad = grad_phi();

  // Rank-one refresh of the maintained inverse with the new loss vector.
  const Vector p = sigma_prime_ * g_tilde;
  const double sm_denom = 1.0 + params_.eta * g_tilde.dot(p);
  sigma_prime_ -= (params_.eta / sm_denom) * (p * p.transpose());
  sigma_prime_ = 0.5 * (sigma_prime_ + sigma_prime_.transpose()).eval();

  const Vector u_next = u_ - taylor_apply(grad);
  if (!(u_next.norm() < params_.R)) {
    throw InvariantViolation(
        "BarrierOns iterate left B(R) at round " + std::to_string(t_ + 1) +
        ": ||u||=" + std::to_string(u_next.norm()) +
        " R=" + std::to_string(params_.R) + " eta=" + std::to_string(params_.eta) +
        " nu=" + std::to_string(params_.nu) +
        " (parameter preconditions likely violated)");
  }

  ++t_;
  if (!expansion_point_fresh(u_next, z_, params_.c, params_.R)) {
    z_ = u_next;
    u_ = u_next;
    full_reinversion();
    ++z_update_count_;
  } else {
    u_ = u_next;
    if (t_ % params_.full_reinversion_period == 0) {
      full_reinversion();  // bounds drift of the rank-one chain
    }
  }
}

BarrierOnsReference::BarrierOnsReference(const BarrierOnsParams& params, int dim)
    : params_(params), d_(dim) {
  params_.validate();
  if (dim < 1) throw UsageError("BarrierOnsReference: dim must be >= 1");
  m_ = params_.resolved_m(dim);
  u_ = Vector::Zero(dim);
  z_ = Vector::Zero(dim);
  V_ = Matrix::Zero(dim, dim);
  s_acc_ = Vector::Zero(dim);
  g_acc_ = Vector::Zero(dim);
}

Matrix BarrierOnsReference::sigma_matrix() const {
  const double nu = params_.nu;
  const double R2 = params_.R * params_.R;
  const double z_gap = R2 - z_.squaredNorm();
  const double u_gap = R2 - u_.squaredNorm();
  Matrix precision = params_.eta * V_ +
                     (4.0 * nu / (u_gap * u_gap)) * (u_ * u_.transpose());
  precision.diagonal().array() += 2.0 * nu / z_gap;
  return precision.llt().solve(Matrix::Identity(d_, d_));
}

void BarrierOnsReference::update(const Vector& g_tilde) {
  if (g_tilde.size() != d_) throw DimensionMismatch(d_, static_cast<int>(g_tilde.size()));
  require_finite(g_tilde, "loss vector");
  if (t_ >= params_.T) throw UsageError("BarrierOnsReference: horizon T exhausted");

  g_acc_ += g_tilde;
  s_acc_ += g_tilde * g_tilde.dot(u_);
  V_ += g_tilde * g_tilde.transpose();

  const Vector grad =
      barrier_grad(u_, V_, s_acc_, g_acc_, params_.nu, params_.eta, params_.R);

  const Matrix sigma = sigma_matrix();
  ++inversion_count_;

  const double gamma = taylor_coefficient(z_, u_, params_.nu, params_.R);
  Vector delta = sigma * grad;
  Vector term = delta;
  for (int k = 0; k < m_; ++k) {
    term = gamma * (sigma * term);
    delta += term;
  }

  const Vector u_next = u_ - delta;
  if (!(u_next.norm() < params_.R)) {
    throw InvariantViolation(
        "BarrierOnsReference iterate left B(R) at round " + std::to_string(t_ + 1));
  }

  ++t_;
  if (!expansion_point_fresh(u_next, z_, params_.c, params_.R)) {
    z_ = u_next;
    ++z_update_count_;
  }
  u_ = u_next;
}

double phi_value(const BonsHistory& history, const BarrierOnsParams& params,
                 const Vector& x) {
  const double gap = params.R * params.R - x.squaredNorm();
  if (gap <= 0.0) return std::numeric_limits<double>::infinity();
  double v = -params.nu * std::log(gap);
  for (const auto& [u_s, g_s] : history) {
    const double inner = g_s.dot(x - u_s);
    v += 0.5 * params.eta * inner * inner + g_s.dot(x);
  }
  return v;
}

Vector phi_gradient(const BonsHistory& history, const BarrierOnsParams& params,
                    const Vector& x) {
  const double gap = params.R * params.R - x.squaredNorm();
  if (gap <= 0.0) throw UsageError("phi_gradient: x outside B(R)");
  Vector g = (2.0 * params.nu / gap) * x;
  for (const auto& [u_s, g_s] : history) {
    g += params.eta * g_s.dot(x - u_s) * g_s + g_s;
  }
  return g;
}

Matrix phi_hessian(const BonsHistory& history, const BarrierOnsParams& params,
                   const Vector& x) {
  const double gap = params.R * params.R - x.squaredNorm();
  if (gap <= 0.0) throw UsageError("phi_hessian: x outside B(R)");
  Matrix H = (4.0 * params.nu / (gap * gap)) * (x * x.transpose());
  H.diagonal().array() += 2.0 * params.nu / gap;
  for (const auto& [u_s, g_s] : history) {
    (void)u_s;
    H += params.eta * (g_s * g_s.transpose());
  }
  return H;
}

Vector ftrl_minimize(const BonsHistory& history, const BarrierOnsParams& params,
                     int dim) {
  params.validate();
  // Aggregate once; the objective only needs these moments.
  Matrix M = Matrix::Zero(dim, dim);
  Vector q = Vector::Zero(dim);
  Vector lin = Vector::Zero(dim);
  for (const auto& [u_s, g_s] : history) {
    M += g_s * g_s.transpose();
    q += g_s * g_s.dot(u_s);
    lin += g_s;
  }

  const double nu = params.nu;
  const double eta = params.eta;
  const double R2 = params.R * params.R;
  const double sqrt_nu = std::sqrt(nu);
  const double tol = 1e-9 * sqrt_nu;

  Vector x = Vector::Zero(dim);
  for (int iter = 0; iter < 200; ++iter) {
    const double gap = R2 - x.squaredNorm();
    Vector grad = (2.0 * nu / gap) * x + eta * (M * x - q) + lin;
    Matrix H = eta * M + (4.0 * nu / (gap * gap)) * (x * x.transpose());
    H.diagonal().array() += 2.0 * nu / gap;
    const Vector step = H.llt().solve(grad);
    const double lambda = std::sqrt(std::max(0.0, grad.dot(step)));
    if (lambda <= tol) return x;
    // Damped step sized for self-concordance constant 1/sqrt(nu); keeps the
    // iterate strictly inside B(R).
    x -= step / (1.0 + lambda / sqrt_nu);
  }
  throw InvariantViolation("ftrl_minimize: damped Newton failed to converge");
}

}  // namespace gaugeoco
