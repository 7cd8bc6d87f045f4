#pragma once

#include <stdexcept>
#include <string>

namespace tripartite {

/// Largest polynomial degree / total excitation accepted anywhere in the library.
inline constexpr int max_degree = 40;

class degree_limit_error : public std::out_of_range {
 public:
  degree_limit_error(int requested, int bound)
      : std::out_of_range("degree " + std::to_string(requested) +
                          " exceeds the supported bound " +
                          std::to_string(bound)),
        requested_(requested),
        bound_(bound) {}

  int requested() const noexcept { return requested_; }
  int bound() const noexcept { return bound_; }

 private:
  int requested_;
  int bound_;
};

/// A surviving series term needs (beta)_j in a denominator and (beta)_j == 0.
class pole_error : public std::domain_error {
 public:
  pole_error(double beta, int j)
      : std::domain_error("Pochhammer pole: (" + std::to_string(beta) + ")_" +
                          std::to_string(j) + " = 0 in a surviving term"),
        beta_(beta),
        j_(j) {}

  double beta() const noexcept { return beta_; }
  int index() const noexcept { return j_; }

 private:
  double beta_;
  int j_;
};

class degenerate_frequency_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class vanishing_denominator_error : public std::domain_error {
 public:
  explicit vanishing_denominator_error(std::string expression)
      : std::domain_error("denominator vanishes: " + expression),
        expression_(std::move(expression)) {}

  const std::string& expression() const noexcept { return expression_; }

 private:
  std::string expression_;
};

inline void check_degree(int n) {
  if (n < 0) throw std::invalid_argument("degree must be non-negative");
  if (n > max_degree) throw degree_limit_error(n, max_degree);
}

}  // namespace tripartite
