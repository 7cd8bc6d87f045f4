#pragma once

// Three coupled oscillators: mixing angles, the orthogonal normal-mode
// rotation, mass scalings, the map from normal-mode frequencies to physical
// couplings, and energy levels.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tripartite/errors.hpp"

namespace tripartite {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Mixing angles in radians. `phi` enters b1 = sin(phi); `vphi` enters
/// b2 = cos(phi) cos(vphi).
struct Angles {
  double theta = 0.0;
  double vphi = 0.0;
  double phi = 0.0;
};

/// Quantum numbers (n1, n2, n3) of an energy eigenstate.
class Excitation {
 public:
  Excitation() = default;
  Excitation(int n1, int n2, int n3) : n_{n1, n2, n3} {
    if (n1 < 0 || n2 < 0 || n3 < 0)
      throw std::invalid_argument("quantum numbers must be non-negative");
    total_ = n1 + n2 + n3;
    check_degree(total_);
  }

  int n1() const noexcept { return n_[0]; }
  int n2() const noexcept { return n_[1]; }
  int n3() const noexcept { return n_[2]; }
  int operator[](std::size_t i) const { return n_.at(i); }
  int total() const noexcept { return total_; }
  const std::array<int, 3>& values() const noexcept { return n_; }

  friend bool operator==(const Excitation&, const Excitation&) = default;

 private:
  std::array<int, 3> n_{};
  int total_ = 0;
};

/// Orthogonal 3x3 rotation taking mass-scaled coordinates x to normal
/// coordinates q = M x. Rows are (a1 a2 a3), (b1 b2 b3), (c1 c2 c3).
struct MixingMatrix {
  Mat3 m{};

  double operator()(int row, int col) const { return m[row][col]; }

  Vec3 apply(const Vec3& x) const {
    Vec3 q{};
    for (int r = 0; r < 3; ++r)
      q[r] = m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2];
    return q;
  }

  double determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  /// max |M M^T - I| over all entries.
  double orthogonality_defect() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double dot = 0.0;
        for (int k = 0; k < 3; ++k) dot += m[i][k] * m[j][k];
        worst = std::max(worst, std::fabs(dot - (i == j ? 1.0 : 0.0)));
      }
    return worst;
  }
};

struct Masses {
  double m1 = 1.0;
  double m2 = 1.0;
  double m3 = 1.0;

  void validate() const {
    if (!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0))
      throw std::invalid_argument("masses must be strictly positive");
  }
  double geometric_mean() const {
    validate();
    return std::cbrt(m1 * m2 * m3);
  }
  /// mu_i = sqrt(m_i / m); their product is 1.
  Vec3 scalings() const {
    const double m = geometric_mean();
    return {std::sqrt(m1 / m), std::sqrt(m2 / m), std::sqrt(m3 / m)};
  }
};

/// Squared normal-mode frequencies Sigma_i^2.
struct NormalFrequenciesSq {
  double sigma1_sq = 1.0;
  double sigma2_sq = 1.0;
  double sigma3_sq = 1.0;

  void validate() const {
    if (!(sigma1_sq > 0.0 && sigma2_sq > 0.0 && sigma3_sq > 0.0))
      throw std::invalid_argument(
          "squared normal-mode frequencies must be strictly positive");
  }
  Vec3 values() const { return {sigma1_sq, sigma2_sq, sigma3_sq}; }
};

struct PhysicalScales {
  double hbar = 1.0;
  double mean_mass = 1.0;
  double varpi = 1.0;

  void validate() const {
    if (!(hbar > 0.0 && mean_mass > 0.0 && varpi > 0.0))
      throw std::invalid_argument("physical scales must be strictly positive");
  }
};

/// Symmetric matrix with omega_i^2 on the diagonal and J_ij off it.
struct CouplingMatrix {
  Mat3 k{};

  double omega_sq(int i) const { return k[i][i]; }
  double coupling(int i, int j) const { return k[i][j]; }
};

inline MixingMatrix mixing_matrix(const Angles& a) {
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cv = std::cos(a.vphi), sv = std::sin(a.vphi);
  const double cp = std::cos(a.phi), sp = std::sin(a.phi);
  MixingMatrix out;
  out.m[0] = {ct * cp, -st * sv - ct * cv * sp, ct * sp * sv - st * cv};
  out.m[1] = {sp, cp * cv, -cp * sv};
  out.m[2] = {cp * st, ct * sv - st * cv * sp, ct * cv + st * sp * sv};
  return out;
}

/// q_i = sum_j M_ij mu_j x_j.
inline Vec3 normal_coordinates(const Angles& angles, const Masses& masses,
                               const Vec3& x) {
  const Vec3 mu = masses.scalings();
  return mixing_matrix(angles).apply({mu[0] * x[0], mu[1] * x[1], mu[2] * x[2]});
}

/// Physical frequencies and couplings generated by the normal-mode spectrum.
///
/// Entries are the explicit trigonometric forms. They coincide with the
/// congruence K = M^T diag(Sigma^2) M (the transposed orientation,
/// M diag M^T, does not reproduce them).
inline CouplingMatrix coupling_matrix(const NormalFrequenciesSq& sigma_sq,
                                      const Angles& a) {
  sigma_sq.validate();
  const double s1 = sigma_sq.sigma1_sq, s2 = sigma_sq.sigma2_sq,
               s3 = sigma_sq.sigma3_sq;
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cv = std::cos(a.vphi), sv = std::sin(a.vphi);
  const double cp = std::cos(a.phi), sp = std::sin(a.phi);
  const double s2t = std::sin(2 * a.theta), c2t = std::cos(2 * a.theta);
  const double s2v = std::sin(2 * a.vphi), c2v = std::cos(2 * a.vphi);
  const double s2p = std::sin(2 * a.phi);

  const double mix13 = s1 * ct * ct + s3 * st * st;
  const double mix31 = s3 * ct * ct + s1 * st * st;
  const double inner = s2 * cp * cp + mix13 * sp * sp;

  const double w1 = mix13 * cp * cp + s2 * sp * sp;
  const double w2 =
      inner * cv * cv + mix31 * sv * sv + 0.5 * (s1 - s3) * s2t * sp * s2v;
  const double w3 =
      mix31 * cv * cv + inner * sv * sv - 0.5 * (s1 - s3) * s2t * sp * s2v;

  const double lead = 0.5 * ((s1 - s2) * ct * ct + (s3 - s2) * st * st);
  const double j12 = -lead * s2p * cv - 0.5 * (s1 - s3) * s2t * cp * sv;
  const double j13 = lead * s2p * sv - 0.5 * (s1 - s3) * s2t * cp * cv;
  const double j23 =
      0.5 * (s1 - s3) * s2t * sp * c2v -
      0.5 *
          (((s2 - s3) * ct * ct - (s1 - s2) * st * st) * cp * cp +
           (s1 - s3) * c2t * sp * sp) *
          s2v;

  CouplingMatrix out;
  out.k = {{{w1, j12, j13}, {j12, w2, j23}, {j13, j23, w3}}};
  return out;
}

/// (2 J12 / (w1^2 - w2^2), 2 J13 / (w1^2 - w3^2), 2 J23 / (w2^2 - w3^2)).
inline Vec3 coupling_ratios(const NormalFrequenciesSq& sigma_sq,
                            const Angles& a) {
  const CouplingMatrix k = coupling_matrix(sigma_sq, a);
  const double scale =
      std::max({std::fabs(k.omega_sq(0)), std::fabs(k.omega_sq(1)),
                std::fabs(k.omega_sq(2))});
  constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (const auto& [i, j] : pairs) {
    if (std::fabs(k.omega_sq(i) - k.omega_sq(j)) < 1e-12 * scale)
      throw degenerate_frequency_error(
          "omega_" + std::to_string(i + 1) + "^2 and omega_" +
          std::to_string(j + 1) + "^2 coincide");
  }

  const double s1 = sigma_sq.sigma1_sq, s2 = sigma_sq.sigma2_sq,
               s3 = sigma_sq.sigma3_sq;
  const double d12 = s1 - s2, d23 = s2 - s3, d31 = s3 - s1;
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cv = std::cos(a.vphi), sv = std::sin(a.vphi);
  const double cp = std::cos(a.phi), sp = std::sin(a.phi);
  const double s2t = std::sin(2 * a.theta), c2t = std::cos(2 * a.theta);
  const double s2v = std::sin(2 * a.vphi), c2v = std::cos(2 * a.vphi);
  const double s2p = std::sin(2 * a.phi);
  const double ct2 = ct * ct, st2 = st * st, cv2 = cv * cv, sv2 = sv * sv,
               cp2 = cp * cp, sp2 = sp * sp;

  const double r12 =
      (-d12 * ct2 * s2p * cv + d23 * st2 * s2p * cv + d31 * s2t * cp * sv) /
      (d23 * (sp2 - cp2 * cv2) +
       d31 * (st2 * sv2 - ct2 * cp2 + ct2 * sp2 * cv2 + 0.5 * s2t * sp * s2v));
  const double r13 =
      (d12 * ct2 * s2p * sv - d23 * st2 * s2p * sv + d31 * s2t * cp * cv) /
      (d31 * (st2 * cv2 - ct2 * cp2 + ct2 * sp2 * sv2 - 0.5 * s2t * sp * s2v) +
       d23 * (sp2 - cp2 * sv2));
  const double r23 =
      (d31 * (c2t * sp2 * s2v - s2t * sp * c2v) - d23 * ct2 * cp2 * s2v +
       d12 * st2 * cp2 * s2v) /
      (d23 * cp2 * c2v + d31 * (st2 * c2v - ct2 * sp2 * c2v - s2t * sp * s2v));
  return {r12, r13, r23};
}

/// Angle-only limit of coupling_ratios for equally spaced Sigma^2 with
/// vanishing spacing.
inline Vec3 coupling_ratios_degenerate(const Angles& a) {
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cv = std::cos(a.vphi), sv = std::sin(a.vphi);
  const double cp = std::cos(a.phi), sp = std::sin(a.phi);
  const double s2t = std::sin(2 * a.theta), c2t = std::cos(2 * a.theta);
  const double s2v = std::sin(2 * a.vphi), c2v = std::cos(2 * a.vphi);
  const double s2p = std::sin(2 * a.phi);
  const double ct2 = ct * ct, st2 = st * st, cv2 = cv * cv, sv2 = sv * sv,
               cp2 = cp * cp, sp2 = sp * sp;

  const double den12 = sp2 - cp2 * cv2 - 2 * st2 * sv2 + 2 * ct2 * cp2 -
                       2 * ct2 * sp2 * cv2 - s2t * sp * s2v;
  const double den13 = -2 * st2 * cv2 + 2 * ct2 * cp2 - 2 * ct2 * sp2 * sv2 +
                       s2t * sp * s2v + sp2 - cp2 * sv2;
  const double den23 = cp2 * c2v - 2 * st2 * c2v + 2 * ct2 * sp2 * c2v +
                       2 * s2t * sp * s2v;
  constexpr double tiny = 1e-12;
  if (std::fabs(den12) < tiny)
    throw vanishing_denominator_error(
        "sin^2 phi - cos^2 phi cos^2 vphi - 2 sin^2 theta sin^2 vphi + ... "
        "(ratio 12)");
  if (std::fabs(den13) < tiny)
    throw vanishing_denominator_error(
        "-2 sin^2 theta cos^2 vphi + 2 cos^2 theta cos^2 phi - ... (ratio 13)");
  if (std::fabs(den23) < tiny)
    throw vanishing_denominator_error(
        "cos^2 phi cos 2vphi - 2 sin^2 theta cos 2vphi + ... (ratio 23)");

  const double r12 = (-c2t * s2p * cv - 2 * s2t * cp * sv) / den12;
  const double r13 = (c2t * s2p * sv - 2 * s2t * cp * cv) / den13;
  const double r23 =
      (-2 * c2t * sp2 * s2v + 2 * s2t * sp * c2v - c2t * cp2 * s2v) / den23;
  return {r12, r13, r23};
}

struct FrequencyGeometry {
  double varpi = 1.0;
  /// (Sigma_1, Sigma_2, Sigma_3) / varpi; their product is 1.
  Vec3 ratios{1.0, 1.0, 1.0};
};

inline FrequencyGeometry frequency_geometry(
    const NormalFrequenciesSq& sigma_sq) {
  sigma_sq.validate();
  const Vec3 sigma{std::sqrt(sigma_sq.sigma1_sq), std::sqrt(sigma_sq.sigma2_sq),
                   std::sqrt(sigma_sq.sigma3_sq)};
  FrequencyGeometry g;
  g.varpi = std::cbrt(sigma[0] * sigma[1] * sigma[2]);
  for (int i = 0; i < 3; ++i) g.ratios[i] = sigma[i] / g.varpi;
  return g;
}

/// E = hbar varpi (r1 n1 + r2 n2 + r3 n3 + (r1 + r2 + r3) / 2), with varpi
/// and r_i taken from the normal-mode spectrum. Only scales.hbar enters.
inline double energy(const Excitation& n, const NormalFrequenciesSq& sigma_sq,
                     const PhysicalScales& scales) {
  scales.validate();
  const FrequencyGeometry g = frequency_geometry(sigma_sq);
  if (sigma_sq.sigma1_sq == sigma_sq.sigma2_sq &&
      sigma_sq.sigma2_sq == sigma_sq.sigma3_sq)
    return scales.hbar * std::sqrt(sigma_sq.sigma1_sq) * (n.total() + 1.5);
  const Vec3& r = g.ratios;
  return scales.hbar * g.varpi *
         (r[0] * n.n1() + r[1] * n.n2() + r[2] * n.n3() +
          0.5 * (r[0] + r[1] + r[2]));
}

}  // namespace tripartite
