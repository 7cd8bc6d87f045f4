#pragma once

// Bipartite structure of the tripartite eigenstates: reduced-density-matrix
// spectra for A|BC, B|AC and C|AB, purities, the explicit Schmidt
// factorization with normalized two-particle partners, and the
// two-oscillator (Jacobi / Makarov) reduction.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "tripartite/oscillator_model.hpp"
#include "tripartite/schmidt_core.hpp"
#include "tripartite/specfun.hpp"

namespace tripartite {

enum class Bipartition { A_vs_BC, B_vs_AC, C_vs_AB };

/// Quantum number carrying the whole excitation in single-axis states.
enum class Axis { n1, n2, n3 };

inline constexpr std::string_view to_string(Bipartition p) {
  switch (p) {
    case Bipartition::A_vs_BC: return "A";
    case Bipartition::B_vs_AC: return "B";
    case Bipartition::C_vs_AB: return "C";
  }
  return "?";
}

inline Bipartition parse_bipartition(std::string_view s) {
  if (s == "A" || s == "A_vs_BC" || s == "a") return Bipartition::A_vs_BC;
  if (s == "B" || s == "B_vs_AC" || s == "b") return Bipartition::B_vs_AC;
  if (s == "C" || s == "C_vs_AB" || s == "c") return Bipartition::C_vs_AB;
  throw std::invalid_argument("unknown bipartition '" + std::string(s) +
                              "' (expected A, B or C)");
}

/// Eigenvalues of one reduced density matrix, indexed by the single-particle
/// quantum number of the isolated subsystem.
struct ModeSpectrum {
  Bipartition bipartition = Bipartition::A_vs_BC;
  std::vector<double> values;

  double trace() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

inline ModeSpectrum mode_spectrum(const SchmidtMatrix& a, Bipartition p) {
  const int n = a.total();
  ModeSpectrum out{p, std::vector<double>(static_cast<std::size_t>(n + 1), 0.0)};
  for (const auto& e : a.entries()) {
    const double w = e.value * e.value;
    switch (p) {
      case Bipartition::A_vs_BC: out.values[e.k] += w; break;
      case Bipartition::B_vs_AC: out.values[e.l] += w; break;
      case Bipartition::C_vs_AB: out.values[e.m] += w; break;
    }
  }
  return out;
}

inline double purity(const ModeSpectrum& s) {
  double p = 0.0;
  for (double v : s.values) p += v * v;
  return p;
}

/// -sum v ln v with 0 ln 0 = 0.
inline double von_neumann_entropy(const ModeSpectrum& s) {
  double h = 0.0;
  for (double v : s.values)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

/// Width of the window around s^2 = 1/2 where the Legendre form is replaced
/// by the direct binomial sum.
inline constexpr double legendre_singularity_window = 1e-6;

inline int mixing_row(Axis axis) { return static_cast<int>(axis); }
inline int mixing_column(Bipartition p) { return static_cast<int>(p); }

/// Purity of a single-axis excitation (the named axis carries n quanta).
///
/// With s the mixing-matrix entry pairing the excited axis with the isolated
/// subsystem, the spectrum is binomial in s^2 and
///   P = ((1-s^2)^2 - s^4)^n  P_n( ((1-s^2)^2 + s^4) / ((1-s^2)^2 - s^4) ).
inline double closed_form_purity(Axis axis, Bipartition p, int n,
                                 const Angles& angles) {
  if (n < 1)
    throw std::invalid_argument(
        "closed_form_purity needs n >= 1; the n = 0 state is a product state");
  check_degree(n);
  const MixingMatrix mix = mixing_matrix(angles);
  const double s = mix(mixing_row(axis), mixing_column(p));
  const double u = s * s;
  double rest = 0.0;
  for (int c = 0; c < 3; ++c)
    if (c != mixing_column(p))
      rest += mix(mixing_row(axis), c) * mix(mixing_row(axis), c);

  if (std::fabs(u - 0.5) < legendre_singularity_window) {
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double b = generalized_binomial(n, k);
      sum += b * b * detail::ipow(u * u, k) * detail::ipow(rest * rest, n - k);
    }
    return sum;
  }
  const double big = rest * rest;
  const double small = u * u;
  return detail::ipow(big - small, n) * legendre(n, (big + small) / (big - small));
}

/// One Schmidt term: weight (sqrt of the spectrum value) and the normalized
/// partner state of the complementary pair.
struct SchmidtTerm {
  struct Amplitude {
    int first;   // quantum number of the first complementary oscillator
    int second;  // quantum number of the second
    double value;
  };

  int index = 0;
  double weight = 0.0;
  std::vector<Amplitude> partner;
};

/// Complementary pairs: A|BC -> (l, m), B|AC -> (k, m), C|AB -> (k, l).
struct BipartiteFactorization {
  Bipartition bipartition = Bipartition::A_vs_BC;
  std::vector<SchmidtTerm> terms;
};

inline BipartiteFactorization bipartite_factorization(const SchmidtMatrix& a,
                                                      Bipartition p) {
  const ModeSpectrum spectrum = mode_spectrum(a, p);
  const int n = a.total();
  BipartiteFactorization out{p, {}};
  for (int i = 0; i <= n; ++i) {
    const double lambda = spectrum.values[i];
    // Each lambda is the squared norm of its own row of A, so even tiny weights
    // give partners of unit norm. Only exact zeros have no partner.
    if (!(lambda > 0.0)) continue;
    SchmidtTerm term;
    term.index = i;
    term.weight = std::sqrt(lambda);
    for (int j = 0; i + j <= n; ++j) {
      const int rest = n - i - j;
      switch (p) {
        case Bipartition::A_vs_BC:
          term.partner.push_back({j, rest, a.at(i, j) / term.weight});
          break;
        case Bipartition::B_vs_AC:
          term.partner.push_back({j, rest, a.at(j, i) / term.weight});
          break;
        case Bipartition::C_vs_AB:
          term.partner.push_back({j, rest, a.at(j, rest) / term.weight});
          break;
      }
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

/// Inverse of bipartite_factorization: sum_i weight_i |i> (x) |partner_i>.
inline SchmidtMatrix reconstruct(const BipartiteFactorization& f,
                                 const Excitation& n) {
  SchmidtMatrix out(n);
  for (const auto& term : f.terms) {
    for (const auto& amp : term.partner) {
      const double v = term.weight * amp.value;
      switch (f.bipartition) {
        case Bipartition::A_vs_BC: out.at(term.index, amp.first) += v; break;
        case Bipartition::B_vs_AC: out.at(amp.first, term.index) += v; break;
        case Bipartition::C_vs_AB: out.at(amp.first, amp.second) += v; break;
      }
    }
  }
  return out;
}

/// Two-oscillator Schmidt coefficients
///   A^k = sqrt(k! (n1+n2-k)! / (n1! n2!)) (-sin phi)^(n1-k) (cos phi)^(n2-k)
///         P_k^{(n1-k, n2-k)}(cos 2 phi),  k = 0 .. n1 + n2.
///
/// The Jacobi sum is expanded in sin^2 phi and cos^2 phi and merged with the
/// prefactor, so negative exponents never reach a vanishing sine or cosine.
inline std::vector<double> jacobi_coefficients(int n1, int n2, double phi) {
  if (n1 < 0 || n2 < 0)
    throw std::invalid_argument("quantum numbers must be non-negative");
  check_degree(n1 + n2);
  const int total = n1 + n2;
  const double sp = std::sin(phi), cp = std::cos(phi);
  std::vector<double> out(static_cast<std::size_t>(total + 1));
  for (int k = 0; k <= total; ++k) {
    // P_k^{(n1-k, n2-k)}(cos 2phi) = sum_s C(n1, k-s) C(n2, s) (-sin^2)^s (cos^2)^(k-s)
    double sum = 0.0;
    for (int s = std::max(0, k - n1); s <= std::min(k, n2); ++s) {
      const int sin_power = n1 - k + 2 * s;
      const int cos_power = n2 + k - 2 * s;
      const double sign = ((n1 - k + s) % 2 == 0) ? 1.0 : -1.0;
      sum += sign * generalized_binomial(n1, k - s) * generalized_binomial(n2, s) *
             detail::ipow(sp, sin_power) * detail::ipow(cp, cos_power);
    }
    out[k] = std::sqrt(factorial_product(std::array<int, 2>{k, total - k}) /
                       factorial_product(std::array<int, 2>{n1, n2})) *
             sum;
  }
  return out;
}

/// Two-oscillator Schmidt spectrum lambda_k = (A^k)^2.
inline std::vector<double> makarov_lambda(int n1, int n2, double phi) {
  std::vector<double> out = jacobi_coefficients(n1, n2, phi);
  for (double& v : out) v *= v;
  return out;
}

}  // namespace tripartite
