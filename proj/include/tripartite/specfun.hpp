#pragma once

// Scalar special functions: Hermite, Legendre, Jacobi, Pochhammer and the
// terminating Exton K16 series. Combinatorial factors are formed in exact
// integer arithmetic and converted to double once per term.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "tripartite/errors.hpp"

namespace tripartite {

namespace detail {

using big_int = boost::multiprecision::cpp_int;

inline bool is_integral(double a) {
  return std::isfinite(a) && a == std::floor(a) && std::fabs(a) < 1e15;
}

// Largest integer index the exact tables are built for. K16 sums reach
// Pochhammer indices of 4 * max_degree.
inline constexpr int table_size = 4 * max_degree + 1;

inline const std::array<big_int, table_size>& exact_factorials() {
  static const std::array<big_int, table_size> table = [] {
    std::array<big_int, table_size> t;
    t[0] = 1;
    for (int i = 1; i < table_size; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

inline const std::array<double, table_size>& factorial_table() {
  static const std::array<double, table_size> table = [] {
    std::array<double, table_size> t{};
    const auto& exact = exact_factorials();
    for (int i = 0; i < table_size; ++i) t[i] = exact[i].convert_to<double>();
    return t;
  }();
  return table;
}

inline void check_table_index(int n) {
  if (n < 0) throw std::invalid_argument("negative factorial argument");
  if (n >= table_size) throw degree_limit_error(n, table_size - 1);
}

// a (a+1) ... (a+k-1) for integer a, exactly.
inline big_int rising_exact(std::int64_t a, int k) {
  big_int r = 1;
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

// a (a-1) ... (a-j+1) / j! for integer a (any sign), exactly.
inline big_int binomial_exact(std::int64_t a, int j) {
  big_int r = 1;
  for (int i = 0; i < j; ++i) r *= a - i;
  return r / exact_factorials()[j];
}

inline double ipow(double x, int e) {
  double r = 1.0;
  for (; e > 0; --e) r *= x;
  return r;
}

}  // namespace detail

/// n! as a double; exact for the whole supported table.
inline double factorial(int n) {
  detail::check_table_index(n);
  return detail::factorial_table()[n];
}

/// Exact product of factorials, converted once.
template <std::size_t N>
inline double factorial_product(const std::array<int, N>& args) {
  detail::big_int r = 1;
  for (int a : args) {
    detail::check_table_index(a);
    r *= detail::exact_factorials()[a];
  }
  return r.convert_to<double>();
}

/// Generalized binomial coefficient C(a, j) = a (a-1) ... (a-j+1) / j!.
/// Exact when a is an integer; polynomial in a otherwise.
inline double generalized_binomial(double a, int j) {
  if (j < 0) return 0.0;
  detail::check_table_index(j);
  if (detail::is_integral(a))
    return detail::binomial_exact(static_cast<std::int64_t>(a), j)
        .convert_to<double>();
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= (a - i) / (i + 1);
  return r;
}

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1), (a)_0 = 1.
inline double pochhammer(double a, int k) {
  if (k < 0) throw std::invalid_argument("pochhammer: negative index");
  if (detail::is_integral(a))
    return detail::rising_exact(static_cast<std::int64_t>(a), k)
        .convert_to<double>();
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

/// Physicists' Hermite polynomial H_n(x), H_0 = 1, H_1 = 2x.
inline double hermite_phys(int n, double x) {
  check_degree(n);
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Legendre polynomial P_n(z) by Bonnet's recurrence. z is unrestricted.
inline double legendre(int n, double z) {
  check_degree(n);
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = z;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * z * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Jacobi polynomial P_n^{(alpha,beta)}(z) from the terminating sum
///   sum_s C(n+alpha, n-s) C(n+beta, s) ((z-1)/2)^s ((z+1)/2)^(n-s).
/// Negative integer parameters give the usual limiting polynomial.
inline double jacobi(int n, double alpha, double beta, double z) {
  check_degree(n);
  const double lo = 0.5 * (z - 1.0);
  const double hi = 0.5 * (z + 1.0);
  double sum = 0.0;
  for (int s = 0; s <= n; ++s) {
    const double ca = generalized_binomial(n + alpha, n - s);
    if (ca == 0.0) continue;
    const double cb = generalized_binomial(n + beta, s);
    if (cb == 0.0) continue;
    sum += ca * cb * detail::ipow(lo, s) * detail::ipow(hi, n - s);
  }
  return sum;
}

/// Arguments of the terminating Exton K16 series. Upper parameters are
/// non-positive integers.
struct K16Arguments {
  std::array<int, 4> alpha{};
  double beta = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;
};

/// Exton K16(a1,a2,a3,a4; b; x,y,z,t) as a finite quadruple sum.
///
/// Terms whose numerator (a1)_{m1+m2} (a2)_{m2+m3} (a3)_{m3+m4} (a4)_{m4+m1}
/// vanishes are never visited; a surviving term with (b)_{m1+m2+m3+m4} = 0
/// raises pole_error.
inline double exton_k16(const K16Arguments& args) {
  std::array<int, 4> bound{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (args.alpha[i] > 0)
      throw std::invalid_argument(
          "exton_k16: upper parameters must be non-positive integers");
    bound[i] = -args.alpha[i];
    check_degree(bound[i]);
  }
  const auto& fact = detail::factorial_table();

  // (-a)_j = (-1)^j a! / (a-j)!
  auto neg_poch = [&](int a, int j) {
    const detail::big_int v =
        detail::exact_factorials()[a] / detail::exact_factorials()[a - j];
    return (j % 2 == 0) ? v : detail::big_int(-v);
  };

  double sum = 0.0;
  const int b1 = bound[0], b2 = bound[1], b3 = bound[2], b4 = bound[3];
  for (int m1 = 0; m1 <= std::min(b1, b4); ++m1) {
    for (int m2 = 0; m2 <= std::min(b1 - m1, b2); ++m2) {
      for (int m3 = 0; m3 <= std::min(b2 - m2, b3); ++m3) {
        for (int m4 = 0; m4 <= std::min(b3 - m3, b4 - m1); ++m4) {
          const int total = m1 + m2 + m3 + m4;
          const double denom = pochhammer(args.beta, total);
          if (denom == 0.0) throw pole_error(args.beta, total);
          const detail::big_int num = neg_poch(b1, m1 + m2) *
                                      neg_poch(b2, m2 + m3) *
                                      neg_poch(b3, m3 + m4) *
                                      neg_poch(b4, m4 + m1);
          const double mono = detail::ipow(args.x, m1) *
                              detail::ipow(args.y, m2) *
                              detail::ipow(args.z, m3) *
                              detail::ipow(args.t, m4);
          sum += num.convert_to<double>() * mono /
                 (fact[m1] * fact[m2] * fact[m3] * fact[m4] * denom);
        }
      }
    }
  }
  return sum;
}

}  // namespace tripartite
