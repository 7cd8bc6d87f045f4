#pragma once

// Schmidt coefficients A^{k,l} (m = N - k - l) of the tripartite eigenstates
// in the product basis of unit-frequency oscillator functions.
//
// Two routes are provided. coefficients_sum extracts the coefficient of
// u^n v^(k,l,m) from exp(2 u^T M v), i.e. a sum over 3x3 contingency tables
// with row sums (n1, n2, n3) and column sums (k, l, m). It is well defined
// for every mixing matrix and is the canonical route. coefficients_k16 uses
// the closed form in terms of Exton's K16 polynomial and falls back to the
// sum wherever that form is singular or undefined.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tripartite/errors.hpp"
#include "tripartite/oscillator_model.hpp"
#include "tripartite/specfun.hpp"

namespace tripartite {

/// Dimensionless position (units sqrt(hbar / m varpi)).
struct GridPoint3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
};

/// Amplitudes A^{k,l} for k, l >= 0, k + l <= N, with m = N - k - l implied.
class SchmidtMatrix {
 public:
  struct Entry {
    int k;
    int l;
    int m;
    double value;
  };

  SchmidtMatrix() = default;
  explicit SchmidtMatrix(const Excitation& n)
      : n_(n), values_(static_cast<std::size_t>((n.total() + 1) *
                                                (n.total() + 2) / 2)) {}

  const Excitation& excitation() const noexcept { return n_; }
  int total() const noexcept { return n_.total(); }

  double at(int k, int l) const { return values_[index(k, l)]; }
  double& at(int k, int l) { return values_[index(k, l)]; }

  /// Zero outside the simplex k + l <= N.
  double value_or_zero(int k, int l) const {
    if (k < 0 || l < 0 || k + l > total()) return 0.0;
    return at(k, l);
  }

  /// Entries in lexicographic (k, l) order.
  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(values_.size());
    for (int k = 0; k <= total(); ++k)
      for (int l = 0; k + l <= total(); ++l)
        out.push_back({k, l, total() - k - l, at(k, l)});
    return out;
  }

  double norm_squared() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s;
  }

  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::size_t index(int k, int l) const {
    const int n = total();
    if (k < 0 || l < 0 || k + l > n)
      throw std::out_of_range("Schmidt index outside k + l <= N");
    // rows k = 0..n hold n - k + 1 entries each
    const int before = k * (n + 1) - k * (k - 1) / 2;
    return static_cast<std::size_t>(before + l);
  }

  Excitation n_;
  std::vector<double> values_;
};

inline bool selection_rule(const Excitation& n, int k, int l, int m) {
  return k + l + m == n.total();
}

namespace detail {

// pw[r][c][e] = M(r, c)^e / e!
class ScaledPowers {
 public:
  ScaledPowers(const MixingMatrix& mix, int max_exp)
      : stride_(max_exp + 1), data_(9 * static_cast<std::size_t>(stride_)) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double p = 1.0;
        for (int e = 0; e <= max_exp; ++e) {
          data_[slot(r, c, e)] = p / factorial(e);
          p *= mix(r, c);
        }
      }
  }
  double operator()(int r, int c, int e) const { return data_[slot(r, c, e)]; }

 private:
  std::size_t slot(int r, int c, int e) const {
    return static_cast<std::size_t>((r * 3 + c) * stride_ + e);
  }
  int stride_;
  std::vector<double> data_;
};

inline double normalization(const Excitation& n, int k, int l, int m) {
  return std::sqrt(
      factorial_product(std::array<int, 6>{n.n1(), n.n2(), n.n3(), k, l, m}));
}

// Sum over tables T with rows (n1, n2, n3) and columns (k, l, m). The upper
// left 2x2 block is free; the other five cells are forced.
inline double contingency_sum(const Excitation& n, const ScaledPowers& pw,
                              int k, int l) {
  const int m = n.total() - k - l;
  double sum = 0.0;
  for (int t00 = 0; t00 <= std::min(n.n1(), k); ++t00) {
    for (int t01 = 0; t01 <= std::min(n.n1() - t00, l); ++t01) {
      const int t02 = n.n1() - t00 - t01;
      if (t02 > m) continue;
      for (int t10 = 0; t10 <= std::min(n.n2(), k - t00); ++t10) {
        const int t20 = k - t00 - t10;
        if (t20 > n.n3()) continue;
        for (int t11 = 0; t11 <= std::min(n.n2() - t10, l - t01); ++t11) {
          const int t12 = n.n2() - t10 - t11;
          const int t21 = l - t01 - t11;
          const int t22 = n.n3() - t20 - t21;
          if (t22 < 0 || t12 + t02 > m) continue;
          sum += pw(0, 0, t00) * pw(0, 1, t01) * pw(0, 2, t02) *
                 pw(1, 0, t10) * pw(1, 1, t11) * pw(1, 2, t12) *
                 pw(2, 0, t20) * pw(2, 1, t21) * pw(2, 2, t22);
        }
      }
    }
  }
  return sum;
}

}  // namespace detail

/// Canonical route: contingency-table sum for every (k, l).
inline SchmidtMatrix coefficients_sum(const Excitation& n,
                                      const MixingMatrix& mix) {
  check_degree(n.total());
  SchmidtMatrix out(n);
  const detail::ScaledPowers pw(mix, n.total());
  for (int k = 0; k <= n.total(); ++k)
    for (int l = 0; k + l <= n.total(); ++l)
      out.at(k, l) = detail::normalization(n, k, l, n.total() - k - l) *
                     detail::contingency_sum(n, pw, k, l);
  return out;
}

/// Counts of entries evaluated by the K16 closed form vs. the summation
/// fallback.
struct K16Diagnostics {
  std::size_t closed_form = 0;
  std::size_t fallback = 0;
};

/// Ratio denominators below this magnitude send an entry to the fallback.
inline constexpr double k16_denominator_cutoff = 1e-10;

/// Whether the closed form applies to entry (k, l) for this matrix.
inline bool k16_applicable(const Excitation& n, const MixingMatrix& mix, int k,
                           int l) {
  if (k + l > n.n3()) return false;
  const double a3 = mix(0, 2), b3 = mix(1, 2);
  const double c1 = mix(2, 0), c2 = mix(2, 1);
  for (double d : {c2 * a3, c1 * a3, c1 * b3, c2 * b3})
    if (std::fabs(d) <= k16_denominator_cutoff) return false;
  return true;
}

/// Closed form of a single entry. Precondition: k16_applicable(n, mix, k, l).
inline double coefficient_k16_entry(const Excitation& n,
                                    const MixingMatrix& mix, int k, int l) {
  const double a1 = mix(0, 0), a2 = mix(0, 1), a3 = mix(0, 2);
  const double b1 = mix(1, 0), b2 = mix(1, 1), b3 = mix(1, 2);
  const double c1 = mix(2, 0), c2 = mix(2, 1), c3 = mix(2, 2);
  const int n1 = n.n1(), n2 = n.n2(), n3 = n.n3();
  const int rest = n3 - k - l;

  const double prefactor =
      detail::normalization(n, k, l, n.total() - k - l) *
      detail::ipow(a3, n1) * detail::ipow(b3, n2) * detail::ipow(c1, k) *
      detail::ipow(c2, l) * detail::ipow(c3, rest) /
      factorial_product(std::array<int, 5>{rest, n1, k, n2, l});

  K16Arguments args;
  args.alpha = {-n1, -k, -n2, -l};
  args.beta = rest + 1;
  args.x = a2 * c3 / (c2 * a3);
  args.y = a1 * c3 / (c1 * a3);
  args.z = b1 * c3 / (c1 * b3);
  args.t = b2 * c3 / (c2 * b3);
  return prefactor * exton_k16(args);
}

/// K16 route with transparent per-entry fallback to the contingency sum.
inline SchmidtMatrix coefficients_k16(const Excitation& n,
                                      const MixingMatrix& mix,
                                      K16Diagnostics* diagnostics = nullptr) {
  check_degree(n.total());
  SchmidtMatrix out(n);
  const detail::ScaledPowers pw(mix, n.total());
  K16Diagnostics counts;
  for (int k = 0; k <= n.total(); ++k) {
    for (int l = 0; k + l <= n.total(); ++l) {
      if (k16_applicable(n, mix, k, l)) {
        out.at(k, l) = coefficient_k16_entry(n, mix, k, l);
        ++counts.closed_form;
      } else {
        out.at(k, l) = detail::normalization(n, k, l, n.total() - k - l) *
                       detail::contingency_sum(n, pw, k, l);
        ++counts.fallback;
      }
    }
  }
  if (diagnostics) *diagnostics = counts;
  return out;
}

/// Normalized unit-frequency oscillator function
/// (2^k k! sqrt(pi))^{-1/2} e^{-x^2/2} H_k(x), by the stable recurrence.
inline double oscillator_function(int k, double x) {
  check_degree(k);
  const double g = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  double prev = g;
  if (k == 0) return prev;
  double cur = std::numbers::sqrt2 * x * g;
  for (int j = 1; j < k; ++j) {
    const double next =
        std::sqrt(2.0 / (j + 1)) * x * cur - std::sqrt(double(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// psi_n(x) = pi^{-3/4} (2^N n1! n2! n3!)^{-1/2} e^{-|q|^2/2} prod H_{n_i}(q_i),
/// q = M x, in dimensionless units.
inline double wavefunction_eval(const Excitation& n, const MixingMatrix& mix,
                                const GridPoint3& p) {
  const Vec3 q = mix.apply({p.x1, p.x2, p.x3});
  const double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
  const double norm =
      std::pow(std::numbers::pi, -0.75) /
      std::sqrt(std::ldexp(factorial_product(std::array<int, 3>{
                               n.n1(), n.n2(), n.n3()}),
                           n.total()));
  return norm * std::exp(-0.5 * q2) * hermite_phys(n.n1(), q[0]) *
         hermite_phys(n.n2(), q[1]) * hermite_phys(n.n3(), q[2]);
}

/// sum_{k,l} A^{k,l} phi_k(x1) phi_l(x2) phi_{N-k-l}(x3).
inline double expansion_eval(const SchmidtMatrix& a, const GridPoint3& p) {
  const int n = a.total();
  std::vector<double> f1(n + 1), f2(n + 1), f3(n + 1);
  for (int j = 0; j <= n; ++j) {
    f1[j] = oscillator_function(j, p.x1);
    f2[j] = oscillator_function(j, p.x2);
    f3[j] = oscillator_function(j, p.x3);
  }
  double s = 0.0;
  for (const auto& e : a.entries()) s += e.value * f1[e.k] * f2[e.l] * f3[e.m];
  return s;
}

}  // namespace tripartite
