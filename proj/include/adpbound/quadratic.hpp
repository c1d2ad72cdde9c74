#pragma once

#include <iosfwd>
#include <string>

#include "adpbound/types.hpp"

namespace adpbound {

/// Quadratic function f(v) = v' quad v + lin' v + constant with a symmetric
/// coefficient matrix. Evaluation and gradients are exact arithmetic on the
/// stored coefficients.
struct QuadraticModel {
  Matrix quad;
  Vector lin;
  Real constant = 0;

  int dim() const { return static_cast<int>(lin.size()); }

  Real operator()(const Eigen::Ref<const Vector>& v) const {
    return v.dot(quad * v) + lin.dot(v) + constant;
  }

  Vector gradient(const Eigen::Ref<const Vector>& v) const {
    return 2.0 * (quad * v) + lin;
  }

  static QuadraticModel zero(int dim) {
    return QuadraticModel{Matrix::Zero(dim, dim), Vector::Zero(dim), 0.0};
  }
};

/// Monomial features of degree <= 2 in the canonical order
/// [v_i v_j (i <= j)], [v_i], 1 — one row per input row.
Matrix quadratic_features(const Eigen::Ref<const Matrix>& inputs);

/// Number of free coefficients of a d-dimensional quadratic.
inline int quadratic_coeff_count(int dim) { return dim * (dim + 1) / 2 + dim + 1; }

struct QuadraticFit {
  QuadraticModel model;
  Real training_mse = 0;
};

/// Least squares on quadratic features with penalty ridge * ||theta||^2 on
/// the raw coefficient vector. With ridge = 0 a rank-deficient design is an
/// error (the message suggests ridge > 0); any ridge > 0 is solvable.
/// Requires at least quadratic_coeff_count(d) rows.
QuadraticFit fit_quadratic(const Eigen::Ref<const Matrix>& inputs,
                           const Eigen::Ref<const Vector>& labels, Real ridge);

/// E[g(v)] for v ~ N(mean, cov): mean' quad mean + lin' mean + constant
/// + trace(quad cov).
Real gaussian_expectation(const QuadraticModel& g, const Eigen::Ref<const Vector>& mean,
                          const Eigen::Ref<const Matrix>& cov);

/// Multiplicative coefficient noise: every stored coefficient c becomes
/// c * (1 + sigma * N(0,1)), with independent draws.
QuadraticModel perturb_coefficients(const QuadraticModel& m, Real sigma, std::mt19937_64& rng);

/// Plain-text coefficient file: dimension, then quad rows, lin, constant.
void save_quadratic(std::ostream& os, const QuadraticModel& m);
QuadraticModel load_quadratic(std::istream& is);

}  // namespace adpbound
