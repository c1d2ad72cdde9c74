#include "adpbound/quadratic.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace adpbound {

Matrix quadratic_features(const Eigen::Ref<const Matrix>& inputs) {
  const int n = static_cast<int>(inputs.rows());
  const int d = static_cast<int>(inputs.cols());
  Matrix phi(n, quadratic_coeff_count(d));
  int c = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) phi.col(c++) = inputs.col(i).cwiseProduct(inputs.col(j));
  for (int i = 0; i < d; ++i) phi.col(c++) = inputs.col(i);
  phi.col(c) = Vector::Ones(n);
  return phi;
}

namespace {
QuadraticModel from_coefficients(const Vector& theta, int dim) {
  QuadraticModel m = QuadraticModel::zero(dim);
  int c = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      if (i == j) {
        m.quad(i, i) = theta(c);
      } else {
        m.quad(i, j) = theta(c) / 2;
        m.quad(j, i) = theta(c) / 2;
      }
      ++c;
    }
  for (int i = 0; i < dim; ++i) m.lin(i) = theta(c++);
  m.constant = theta(c);
  return m;
}
}  // namespace

QuadraticFit fit_quadratic(const Eigen::Ref<const Matrix>& inputs,
                           const Eigen::Ref<const Vector>& labels, Real ridge) {
  const int n = static_cast<int>(inputs.rows());
  const int d = static_cast<int>(inputs.cols());
  const int p = quadratic_coeff_count(d);
  if (labels.size() != n) throw std::invalid_argument("fit_quadratic: label count mismatch");
  if (n < p) throw std::invalid_argument("fit_quadratic: need at least as many rows as coefficients");
  if (ridge < 0) throw std::invalid_argument("fit_quadratic: ridge must be non-negative");

  const Matrix phi = quadratic_features(inputs);
  Vector theta;
  if (ridge == 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(phi);
    if (qr.rank() < p)
      throw std::invalid_argument(
          "fit_quadratic: design matrix is rank-deficient with ridge=0; "
          "the sample does not identify all coefficients, use ridge > 0");
    theta = qr.solve(labels);
  } else {
    // Penalize in standardized feature coordinates (centered, unit
    // variance, intercept unpenalized). Monomial features differ in scale
    // by orders of magnitude; a raw-coordinate penalty resolves the
    // null space of collinear designs toward the largest-scale features,
    // which distorts the recovered curvature.
    const Vector mean = phi.colwise().mean();
    Vector sd(p);
    for (int j = 0; j < p; ++j)
      sd(j) = std::sqrt((phi.col(j).array() - mean(j)).square().sum() / n);
    Matrix zs(n, p - 1);  // last column is the intercept
    for (int j = 0; j < p - 1; ++j) {
      if (sd(j) == 0)
        throw std::invalid_argument(
            "fit_quadratic: feature column " + std::to_string(j) +
            " is constant across the sample; the design cannot be standardized");
      zs.col(j) = (phi.col(j).array() - mean(j)) / sd(j);
    }
    const Real label_mean = labels.mean();
    Matrix gram = zs.transpose() * zs;
    gram.diagonal().array() += ridge;
    const Vector scaled =
        Eigen::LDLT<Matrix>(gram).solve(zs.transpose() * (labels.array() - label_mean).matrix());

    theta.resize(p);
    Real intercept = label_mean;
    for (int j = 0; j < p - 1; ++j) {
      theta(j) = scaled(j) / sd(j);
      intercept -= scaled(j) * mean(j) / sd(j);
    }
    theta(p - 1) = intercept;
  }

  QuadraticFit fit;
  fit.model = from_coefficients(theta, d);
  fit.training_mse = (phi * theta - labels).squaredNorm() / n;
  return fit;
}

Real gaussian_expectation(const QuadraticModel& g, const Eigen::Ref<const Vector>& mean,
                          const Eigen::Ref<const Matrix>& cov) {
  return g(mean) + (g.quad * cov).trace();
}

QuadraticModel perturb_coefficients(const QuadraticModel& m, Real sigma, std::mt19937_64& rng) {
  std::normal_distribution<Real> normal(0.0, 1.0);
  QuadraticModel out = m;
  const int d = m.dim();
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const Real scaled = m.quad(i, j) * (1 + sigma * normal(rng));
      out.quad(i, j) = scaled;
      out.quad(j, i) = scaled;
    }
  for (int i = 0; i < d; ++i) out.lin(i) = m.lin(i) * (1 + sigma * normal(rng));
  out.constant = m.constant * (1 + sigma * normal(rng));
  return out;
}

void save_quadratic(std::ostream& os, const QuadraticModel& m) {
  const int d = m.dim();
  os << d << '\n' << std::setprecision(17);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (j) os << ' ';
      os << m.quad(i, j);
    }
    os << '\n';
  }
  for (int i = 0; i < d; ++i) {
    if (i) os << ' ';
    os << m.lin(i);
  }
  os << '\n' << m.constant << '\n';
}

QuadraticModel load_quadratic(std::istream& is) {
  int d = 0;
  if (!(is >> d) || d < 1) throw std::runtime_error("load_quadratic: bad dimension");
  QuadraticModel m = QuadraticModel::zero(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (!(is >> m.quad(i, j))) throw std::runtime_error("load_quadratic: truncated quad block");
  for (int i = 0; i < d; ++i)
    if (!(is >> m.lin(i))) throw std::runtime_error("load_quadratic: truncated linear block");
  if (!(is >> m.constant)) throw std::runtime_error("load_quadratic: truncated constant");
  return m;
}

}  // namespace adpbound
