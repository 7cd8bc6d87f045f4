// tripartite: coefficients, spectra, purities, purity surfaces, the
// two-oscillator reduction and the self-verification suite.

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tripartite/tripartite.hpp"

namespace {

using namespace tripartite;

/// Thrown for invocations that parse but are not meaningful; exit status 2.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string out;
  std::string format;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last)
    throw usage_error(fmt::format("{}: '{}' is not a decimal number", what, text));
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, std::size_t count, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.size() != count)
    throw usage_error(fmt::format("{} expects {} comma-separated values, got '{}'", what,
                                  count, text));
  std::vector<T> out;
  for (const auto& p : parts) out.push_back(parse_number<T>(p, what));
  return out;
}

Excitation parse_excitation(const std::string& text) {
  const auto v = parse_list<int>(text, 3, "--n");
  if (v[0] < 0 || v[1] < 0 || v[2] < 0)
    throw usage_error("--n: quantum numbers must be non-negative");
  return Excitation(v[0], v[1], v[2]);
}

Bipartition parse_bipartition_arg(const std::string& text) {
  try {
    return parse_bipartition(text);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

Angles parse_angles(const std::string& text) {
  const auto v = parse_list<double>(text, 3, "--angles");
  return {v[0], v[1], v[2]};
}

Interval parse_interval(const std::string& text, const std::string& what) {
  const auto v = parse_list<double>(text, 2, what);
  return {v[0], v[1]};
}

std::string human(double v) { return fmt::format("{:.9g}", v); }

/// Writes to --out when given (reporting the path on failure), else stdout.
void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + g.out + "'");
  f << text;
  if (!f.flush()) throw std::runtime_error("failed writing output file '" + g.out + "'");
}

std::string resolve_format(const GlobalOptions& g, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
  const std::string f = g.format.empty() ? fallback : g.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw usage_error("format '" + f + "' is not available for this command");
}

// coeffs ---------------------------------------------------------------------

struct CoeffsOptions {
  std::string n;
  std::string angles;
  std::string route = "sum";
};

int run_coeffs(const GlobalOptions& g, const CoeffsOptions& o) {
  const Excitation n = parse_excitation(o.n);
  const Angles angles = parse_angles(o.angles);
  const MixingMatrix mix = mixing_matrix(angles);
  const std::string format = resolve_format(g, "doc", {"doc", "csv", "text"});

  std::optional<SchmidtMatrix> reference;
  K16Diagnostics diag;
  SchmidtMatrix result = (o.route == "sum") ? coefficients_sum(n, mix)
                                            : coefficients_k16(n, mix, &diag);
  if (o.route == "both") reference = coefficients_sum(n, mix);

  std::string text;
  if (format == "doc") {
    text = (o.route == "sum")
               ? schmidt_document(result, angles)
               : schmidt_document(result, angles, o.route, diag,
                                  reference ? &*reference : nullptr);
    text += '\n';
  } else if (format == "csv") {
    text = "k,l,m,value\n";
    for (const auto& e : result.entries())
      text += fmt::format("{},{},{},{}\n", e.k, e.l, e.m, format_double(e.value));
  } else {
    text = fmt::format("n = ({}, {}, {})  route = {}\n", n.n1(), n.n2(), n.n3(), o.route);
    text += fmt::format("{:>4} {:>4} {:>4}  {:>17}\n", "k", "l", "m", "A");
    for (const auto& e : result.entries())
      text += fmt::format("{:>4} {:>4} {:>4}  {:>17}\n", e.k, e.l, e.m, human(e.value));
    if (o.route != "sum")
      text += fmt::format("closed-form entries {}, fallback entries {}\n", diag.closed_form,
                          diag.fallback);
    if (reference) {
      double worst = 0.0;
      for (const auto& e : result.entries())
        worst = std::max(worst, std::fabs(e.value - reference->at(e.k, e.l)));
      text += fmt::format("max discrepancy between routes {}\n", human(worst));
    }
  }
  emit(g, text);
  return 0;
}

// purity ---------------------------------------------------------------------

struct PurityOptions {
  std::string n;
  std::string angles;
  std::string bipartition = "A";
  std::string method = "direct";
};

std::optional<Axis> single_axis(const Excitation& n) {
  int nonzero = 0;
  std::optional<Axis> axis;
  for (int i = 0; i < 3; ++i)
    if (n[i] > 0) {
      ++nonzero;
      axis = static_cast<Axis>(i);
    }
  if (nonzero != 1) return std::nullopt;
  return axis;
}

int run_purity(const GlobalOptions& g, const PurityOptions& o) {
  const Excitation n = parse_excitation(o.n);
  const Angles angles = parse_angles(o.angles);
  const Bipartition part = parse_bipartition_arg(o.bipartition);
  const std::string format = resolve_format(g, "text", {"doc", "text"});
  const std::optional<Axis> axis = single_axis(n);
  if (o.method == "closed" && !axis)
    throw usage_error(
        "the closed method covers single-axis excitations only (exactly one of n1, n2, n3 "
        "nonzero); use --method direct");

  const ModeSpectrum spectrum = mode_spectrum(coefficients_sum(n, mixing_matrix(angles)), part);
  std::optional<double> closed;
  if (axis) closed = closed_form_purity(*axis, part, n.total(), angles);

  std::string text;
  if (format == "doc") {
    text = spectrum_document(n, angles, spectrum, closed) + '\n';
  } else {
    text = fmt::format("n = ({}, {}, {})  bipartition {}\n", n.n1(), n.n2(), n.n3(),
                       to_string(part));
    for (std::size_t i = 0; i < spectrum.values.size(); ++i)
      text += fmt::format("lambda[{}] = {}\n", i, human(spectrum.values[i]));
    if (o.method == "closed") {
      text += fmt::format("purity (closed) = {}\n", human(*closed));
      text += fmt::format("purity (direct) = {}\n", human(purity(spectrum)));
    } else {
      text += fmt::format("purity (direct) = {}\n", human(purity(spectrum)));
      if (closed) text += fmt::format("purity (closed) = {}\n", human(*closed));
    }
    if (closed) text += fmt::format("difference = {}\n", human(*closed - purity(spectrum)));
    text += fmt::format("entropy = {}\n", human(von_neumann_entropy(spectrum)));
  }
  emit(g, text);
  return 0;
}

// surface --------------------------------------------------------------------

struct SurfaceOptions {
  std::string bipartition = "A";
  std::string n = "0,0,1";
  double vphi = 0.0;
  int grid = 101;
  std::string theta_range;
  std::string phi_range;
};

int run_surface(const GlobalOptions& g, const SurfaceOptions& o) {
  SurfaceRequest req;
  req.bipartition = parse_bipartition_arg(o.bipartition);
  req.excitation = parse_excitation(o.n);
  req.fixed_vphi = o.vphi;
  req.grid_points = o.grid;
  if (!o.theta_range.empty()) req.theta_range = parse_interval(o.theta_range, "--theta-range");
  if (!o.phi_range.empty()) req.phi_range = parse_interval(o.phi_range, "--phi-range");
  try {
    req.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  const std::string format = resolve_format(g, "csv", {"csv", "doc"});
  const SurfaceGrid grid = compute_surface(req);

  std::string text;
  if (format == "csv") {
    std::ostringstream os;
    write_surface_csv(os, grid);
    text = os.str();
  } else {
    JsonWriter w;
    w.begin_object();
    w.field("bipartition", to_string(req.bipartition));
    w.key("n").begin_array();
    for (int v : req.excitation.values()) w.value(v);
    w.end_array();
    w.field("vphi", req.fixed_vphi).field("grid_points", req.grid_points);
    w.field("min", grid.min).field("max", grid.max);
    w.field("refined_min", grid.refined_min.purity).field("refined_max", grid.refined_max.purity);
    w.key("rows").begin_array();
    for (const auto& r : grid.rows)
      w.begin_array().value(r.theta).value(r.phi).value(r.purity).end_array();
    w.end_array().end_object();
    text = w.str() + '\n';
  }
  emit(g, text);
  // keep stdout machine-readable when it carries the grid
  std::ostream& info = g.out.empty() ? std::cerr : std::cout;
  info << fmt::format("min purity {}\nmax purity {}\n", human(grid.min), human(grid.max));
  info << fmt::format("refined min purity {} at theta {} phi {}\n",
                      human(grid.refined_min.purity), human(grid.refined_min.theta),
                      human(grid.refined_min.phi));
  info << fmt::format("refined max purity {} at theta {} phi {}\n",
                      human(grid.refined_max.purity), human(grid.refined_max.theta),
                      human(grid.refined_max.phi));
  return 0;
}

// reduce ---------------------------------------------------------------------

struct ReduceOptions {
  int n1 = 0;
  int n2 = 0;
  double phi = 0.0;
};

int run_reduce(const GlobalOptions& g, const ReduceOptions& o) {
  const std::string format = resolve_format(g, "text", {"doc", "text"});
  const auto coeffs = jacobi_coefficients(o.n1, o.n2, o.phi);
  const auto lambda = makarov_lambda(o.n1, o.n2, o.phi);
  const int total = o.n1 + o.n2;

  const SchmidtMatrix tri = coefficients_sum({o.n1, o.n2, 0}, mixing_matrix({0.0, 0.0, o.phi}));
  double deviation = 0.0;
  for (const auto& e : tri.entries()) {
    const double expect = (e.l == total - e.k) ? coeffs[e.k] : 0.0;
    deviation = std::max(deviation, std::fabs(e.value - expect));
  }
  double sum = 0.0;
  for (double v : lambda) sum += v;

  std::string text;
  if (format == "doc") {
    JsonWriter w;
    w.begin_object();
    w.field("n1", o.n1).field("n2", o.n2).field("phi", o.phi);
    w.array("coefficients", coeffs).array("lambda", lambda);
    w.field("lambda_sum", sum).field("tripartite_deviation", deviation);
    w.end_object();
    text = w.str() + '\n';
  } else {
    text = fmt::format("n1 = {}, n2 = {}, phi = {}\n", o.n1, o.n2, human(o.phi));
    text += fmt::format("{:>4}  {:>17}  {:>17}\n", "k", "A^k", "lambda_k");
    for (int k = 0; k <= total; ++k)
      text += fmt::format("{:>4}  {:>17}  {:>17}\n", k, human(coeffs[k]), human(lambda[k]));
    text += fmt::format("sum lambda = {}\n", human(sum));
    text += fmt::format("max deviation from tripartite (0, 0, phi) = {}\n", human(deviation));
  }
  emit(g, text);
  return 0;
}

// verify ---------------------------------------------------------------------

struct VerifyOptions {
  std::optional<double> tol;
  std::vector<std::string> skip;
  int quad_order = 0;
  std::uint64_t seed = VerifyConfig{}.seed;
};

int run_verify(const GlobalOptions& g, const VerifyOptions& o) {
  const std::string format = resolve_format(g, "text", {"doc", "text"});
  VerifyConfig config;
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw usage_error("--tol must be positive");
    config.tolerance = o.tol;
  }
  for (const auto& s : o.skip)
    for (const auto& part : split(s, ',')) config.skip.push_back(part);
  if (o.quad_order != 0) {
    if (o.quad_order < 1 || o.quad_order > max_quadrature_order)
      throw usage_error(fmt::format("--quad-order must lie in [1, {}]", max_quadrature_order));
    config.quadrature_order = o.quad_order;
  }
  config.seed = o.seed;

  VerifyReport report;
  try {
    report = run_verification(config);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  const std::string doc = verify_document(report) + '\n';

  if (format == "doc") {
    emit(g, doc);
  } else {
    if (!g.out.empty()) emit(g, doc);
    for (const auto& c : report.checks) {
      std::cout << fmt::format("{} {}/{}  observed {}  tolerance {}", c.passed ? "PASS" : "FAIL",
                               c.stage, c.name, human(c.observed), human(c.tolerance));
      if (!c.detail.empty()) std::cout << "  (" << c.detail << ')';
      std::cout << '\n';
    }
    for (const auto& s : report.skipped_stages) std::cout << "SKIP " << s << '\n';
    std::cout << fmt::format("{} checks, {} failed\n", report.checks.size(), report.failures());
  }
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schmidt decomposition and entanglement of three coupled oscillators"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key-value configuration file (INI/TOML)");

  GlobalOptions global;
  app.add_option("--out", global.out, "write output to this path instead of stdout");
  app.add_option("--format", global.format, "output format")
      ->check(CLI::IsMember({"csv", "doc", "text"}));

  CoeffsOptions co;
  auto* coeffs = app.add_subcommand("coeffs", "Schmidt coefficients A^{k,l,m}");
  coeffs->add_option("--n", co.n, "excitation n1,n2,n3")->required();
  coeffs->add_option("--angles", co.angles, "theta,vphi,phi in radians")->required();
  coeffs->add_option("--route", co.route, "evaluation route")
      ->check(CLI::IsMember({"sum", "k16", "both"}));

  PurityOptions po;
  auto* pur = app.add_subcommand("purity", "reduced spectrum and purity for one bipartition");
  pur->add_option("--n", po.n, "excitation n1,n2,n3")->required();
  pur->add_option("--angles", po.angles, "theta,vphi,phi in radians")->required();
  pur->add_option("--bipartition", po.bipartition, "A, B or C");
  pur->add_option("--method", po.method, "direct or closed")
      ->check(CLI::IsMember({"direct", "closed"}));

  SurfaceOptions so;
  auto* surf = app.add_subcommand("surface", "purity over the (theta, phi) grid at fixed vphi");
  surf->add_option("--bipartition", so.bipartition, "A, B or C");
  surf->add_option("--n", so.n, "excitation n1,n2,n3");
  surf->add_option("--vphi", so.vphi, "fixed vphi in radians");
  surf->add_option("--grid", so.grid, "grid points per axis");
  surf->add_option("--theta-range", so.theta_range, "lo,hi (default -pi,pi)");
  surf->add_option("--phi-range", so.phi_range, "lo,hi (default -pi,pi)");

  ReduceOptions ro;
  auto* red = app.add_subcommand("reduce", "two-oscillator Jacobi reduction");
  red->add_option("--n1", ro.n1, "quanta in the first oscillator")->required()->check(CLI::NonNegativeNumber);
  red->add_option("--n2", ro.n2, "quanta in the second oscillator")->required()->check(CLI::NonNegativeNumber);
  red->add_option("--phi", ro.phi, "mixing angle in radians")->required();

  VerifyOptions vo;
  auto* ver = app.add_subcommand("verify", "run the self-verification suite");
  ver->add_option("--tol", vo.tol, "replace every check tolerance");
  ver->add_option("--skip", vo.skip, "stages to skip")->delimiter(',');
  ver->add_option("--quad-order", vo.quad_order, "Gauss-Hermite order for the oracle stage");
  ver->add_option("--seed", vo.seed, "random seed");

  for (auto* sub : {coeffs, pur, surf, red, ver}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version requests exit 0; every parse failure is a usage error
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*coeffs) return run_coeffs(global, co);
    if (*pur) return run_purity(global, po);
    if (*surf) return run_surface(global, so);
    if (*red) return run_reduce(global, ro);
    if (*ver) return run_verify(global, vo);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const degree_limit_error& e) {
    std::cerr << "error: " << e.what() << " (total excitation must be <= " << e.bound()
              << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
