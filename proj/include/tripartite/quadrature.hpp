#pragma once

// Brute-force overlap integrals by tensor-product Gauss-Hermite quadrature.
// Used only to check the closed-form coefficients; it evaluates its own
// orthonormal Hermite recurrence and never calls into schmidt_core.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tripartite/oscillator_model.hpp"

namespace tripartite {

/// Nodes and weights for the weight function e^{-x^2}.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int max_quadrature_order = 128;

namespace detail {

// Orthonormal Hermite polynomials h_j (w.r.t. e^{-x^2}) for j = 0..n, and
// the derivative of h_n.
inline void orthonormal_hermite(int n, double x, std::vector<double>& h) {
  h.resize(static_cast<std::size_t>(n + 1));
  h[0] = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  if (n == 0) return;
  h[1] = std::numbers::sqrt2 * x * h[0];
  for (int j = 1; j < n; ++j)
    h[j + 1] = std::sqrt(2.0 / (j + 1)) * x * h[j] -
               std::sqrt(static_cast<double>(j) / (j + 1)) * h[j - 1];
}

}  // namespace detail

/// Golub-Welsch: eigenvalues of the Jacobi matrix (off-diagonal sqrt(j/2))
/// give the nodes; each is Newton-polished on h_order, and the weights come
/// from the Christoffel function 1 / sum_j h_j(x)^2.
inline QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1 || order > max_quadrature_order)
    throw std::out_of_range("quadrature order " + std::to_string(order) +
                            " outside [1, " +
                            std::to_string(max_quadrature_order) + "]");
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.assign(static_cast<std::size_t>(order), 0.0);
  rule.weights.assign(static_cast<std::size_t>(order), 0.0);
  if (order == 1) {
    rule.weights[0] = std::sqrt(std::numbers::pi);
    return rule;
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int j = 1; j < order; ++j) sub(j - 1) = std::sqrt(0.5 * j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("Gauss-Hermite eigenvalue solve failed");

  std::vector<double> h;
  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      detail::orthonormal_hermite(order, x, h);
      const double deriv = std::sqrt(2.0 * order) * h[order - 1];
      if (deriv == 0.0) break;
      const double step = h[order] / deriv;
      x -= step;
      if (std::fabs(step) < 1e-16 * std::max(1.0, std::fabs(x))) break;
    }
    rule.nodes[i] = x;
  }
  std::sort(rule.nodes.begin(), rule.nodes.end());

  // exact symmetry about the origin
  for (int i = 0; i < order / 2; ++i) {
    const double r = 0.5 * (rule.nodes[order - 1 - i] - rule.nodes[i]);
    rule.nodes[i] = -r;
    rule.nodes[order - 1 - i] = r;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;

  for (int i = 0; i < order; ++i) {
    detail::orthonormal_hermite(order - 1, rule.nodes[i], h);
    double s = 0.0;
    for (double v : h) s += v * v;
    rule.weights[i] = 1.0 / s;
  }
  for (int i = 0; i < order / 2; ++i) {
    const double w = 0.5 * (rule.weights[i] + rule.weights[order - 1 - i]);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

/// Default order for overlaps at total degree N: N + 10 clamped to [16, 64].
inline int default_quadrature_order(int total_degree) {
  return std::clamp(total_degree + 10, 16, 64);
}

/// Tensor-product integrator for one mixing matrix. Tabulates the
/// orthonormal Hermite values of x and q = M x on the grid once, after which
/// every overlap <psi_n | phi_k phi_l phi_m> is a weighted sum of products.
///
/// Because M is orthogonal, |q| = |x| and the two Gaussians combine into
/// e^{-|x|^2}, the quadrature weight. This is checked on construction.
class OverlapIntegrator {
 public:
  OverlapIntegrator(const MixingMatrix& mix, QuadratureRule rule, int max_degree)
      : rule_(std::move(rule)), max_degree_(max_degree) {
    if (mix.orthogonality_defect() > 1e-10)
      throw std::invalid_argument(
          "overlap quadrature requires an orthogonal mixing matrix");
    const int g = rule_.order;
    const std::size_t points = static_cast<std::size_t>(g) * g * g;
    const std::size_t width = static_cast<std::size_t>(max_degree_ + 1);

    std::vector<double> h;
    x_table_.resize(static_cast<std::size_t>(g) * width);
    for (int i = 0; i < g; ++i) {
      detail::orthonormal_hermite(max_degree_, rule_.nodes[i], h);
      std::copy(h.begin(), h.end(), x_table_.begin() + i * width);
    }

    weight_.resize(points);
    for (int r = 0; r < 3; ++r) q_table_[r].resize(points * width);
    std::size_t p = 0;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        for (int k = 0; k < g; ++k, ++p) {
          weight_[p] = rule_.weights[i] * rule_.weights[j] * rule_.weights[k];
          const Vec3 q = mix.apply({rule_.nodes[i], rule_.nodes[j], rule_.nodes[k]});
          for (int r = 0; r < 3; ++r) {
            detail::orthonormal_hermite(max_degree_, q[r], h);
            std::copy(h.begin(), h.end(), q_table_[r].begin() + p * width);
          }
        }
  }

  const QuadratureRule& rule() const noexcept { return rule_; }

  double overlap(const Excitation& n, int k, int l, int m) const {
    for (int d : {n.n1(), n.n2(), n.n3(), k, l, m})
      if (d < 0 || d > max_degree_)
        throw std::out_of_range("overlap degree outside the tabulated range");
    const int g = rule_.order;
    const std::size_t width = static_cast<std::size_t>(max_degree_ + 1);
    double sum = 0.0;
    std::size_t p = 0;
    for (int i = 0; i < g; ++i) {
      const double fk = x_table_[i * width + k];
      for (int j = 0; j < g; ++j) {
        const double fkl = fk * x_table_[j * width + l];
        for (int s = 0; s < g; ++s, ++p) {
          const double basis = fkl * x_table_[s * width + m];
          const double state = q_table_[0][p * width + n.n1()] *
                               q_table_[1][p * width + n.n2()] *
                               q_table_[2][p * width + n.n3()];
          sum += weight_[p] * basis * state;
        }
      }
    }
    return sum;
  }

 private:
  QuadratureRule rule_;
  int max_degree_;
  std::vector<double> x_table_;
  std::vector<double> q_table_[3];
  std::vector<double> weight_;
};

/// A^{k,l,m} = <psi_n | phi_k phi_l phi_m> by 3D Gauss-Hermite quadrature.
/// Selection-rule violations integrate to (numerically) zero.
inline double coefficient_overlap(const Excitation& n, const MixingMatrix& mix,
                                  int k, int l, int m,
                                  const QuadratureRule& rule) {
  const int top = std::max({n.n1(), n.n2(), n.n3(), k, l, m});
  return OverlapIntegrator(mix, rule, top).overlap(n, k, l, m);
}

/// <psi^{AB}_{n1,n2} | phi_k phi_{n1+n2-k}> for the two-oscillator state
/// rotated by phi in the (x1, x2) plane.
inline double coefficient_overlap_2d(int n1, int n2, double phi, int k,
                                     const QuadratureRule& rule) {
  if (n1 < 0 || n2 < 0 || k < 0 || k > n1 + n2)
    throw std::invalid_argument("coefficient_overlap_2d: bad quantum numbers");
  const int l = n1 + n2 - k;
  const int top = std::max({n1, n2, k, l});
  const double cp = std::cos(phi), sp = std::sin(phi);
  std::vector<double> hx1, hx2, hq1, hq2;
  double sum = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double x1 = rule.nodes[i];
    detail::orthonormal_hermite(top, x1, hx1);
    for (int j = 0; j < rule.order; ++j) {
      const double x2 = rule.nodes[j];
      detail::orthonormal_hermite(top, x2, hx2);
      detail::orthonormal_hermite(top, cp * x1 - sp * x2, hq1);
      detail::orthonormal_hermite(top, sp * x1 + cp * x2, hq2);
      sum += rule.weights[i] * rule.weights[j] * hq1[n1] * hq2[n2] * hx1[k] *
             hx2[l];
    }
  }
  return sum;
}

}  // namespace tripartite
