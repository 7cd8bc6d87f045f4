#pragma once

// Structured output documents (JSON). Floating-point values are written
// with 17 significant digits so every double round-trips exactly.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "tripartite/entanglement.hpp"
#include "tripartite/oscillator_model.hpp"
#include "tripartite/schmidt_core.hpp"

namespace tripartite {

inline std::string format_double(double v) {
  if (v == 0.0) return "0";  // drop the sign of -0
  return fmt::format("{:.17g}", v);
}

/// Minimal streaming JSON writer with a fixed number format.
class JsonWriter {
 public:
  JsonWriter& begin_object() { open('{'); return *this; }
  JsonWriter& end_object() { close('}'); return *this; }
  JsonWriter& begin_array() { open('['); return *this; }
  JsonWriter& end_array() { close(']'); return *this; }

  JsonWriter& key(std::string_view k) {
    separate();
    quote(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double v) { separate(); out_ += format_double(v); return *this; }
  JsonWriter& value(int v) { separate(); out_ += std::to_string(v); return *this; }
  JsonWriter& value(std::size_t v) { separate(); out_ += std::to_string(v); return *this; }
  JsonWriter& value(bool v) { separate(); out_ += v ? "true" : "false"; return *this; }
  JsonWriter& value(std::string_view v) { separate(); quote(v); return *this; }
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }

  template <typename T>
  JsonWriter& field(std::string_view k, const T& v) {
    key(k);
    return value(v);
  }

  JsonWriter& array(std::string_view k, const std::vector<double>& vs) {
    key(k).begin_array();
    for (double v : vs) value(v);
    return end_array();
  }

  const std::string& str() const noexcept { return out_; }

 private:
  void separate() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ += ',';
      first_.back() = false;
    }
  }
  void open(char c) {
    separate();
    out_ += c;
    first_.push_back(true);
  }
  void close(char c) {
    out_ += c;
    first_.pop_back();
  }
  void quote(std::string_view s) {
    out_ += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20)
            out_ += fmt::format("\\u{:04x}", static_cast<int>(ch));
          else
            out_ += ch;
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

namespace detail {

inline void write_header(JsonWriter& w, const Excitation& n, const Angles& a) {
  w.key("n").begin_array().value(n.n1()).value(n.n2()).value(n.n3()).end_array();
  w.key("angles")
      .begin_array()
      .value(a.theta)
      .value(a.vphi)
      .value(a.phi)
      .end_array();
}

inline void write_entries(JsonWriter& w, const SchmidtMatrix& a) {
  w.key("entries").begin_array();
  for (const auto& e : a.entries()) {
    w.begin_object()
        .field("k", e.k)
        .field("l", e.l)
        .field("m", e.m)
        .field("value", e.value)
        .end_object();
  }
  w.end_array();
}

}  // namespace detail

/// {"n": [...], "angles": [theta, vphi, phi], "entries": [{"k","l","m","value"}...]}
inline std::string schmidt_document(const SchmidtMatrix& a, const Angles& angles) {
  JsonWriter w;
  w.begin_object();
  detail::write_header(w, a.excitation(), angles);
  detail::write_entries(w, a);
  w.end_object();
  return w.str();
}

/// Coefficient document for the K16 route (or both routes). `reference` is
/// the summation-route result when both were computed.
inline std::string schmidt_document(const SchmidtMatrix& a, const Angles& angles,
                                    std::string_view route,
                                    const K16Diagnostics& diagnostics,
                                    const SchmidtMatrix* reference = nullptr) {
  JsonWriter w;
  w.begin_object();
  detail::write_header(w, a.excitation(), angles);
  w.field("route", route);
  detail::write_entries(w, a);
  w.field("closed_form_entries", diagnostics.closed_form);
  w.field("fallback_entries", diagnostics.fallback);
  if (reference) {
    double worst = 0.0;
    for (const auto& e : a.entries())
      worst = std::max(worst, std::fabs(e.value - reference->at(e.k, e.l)));
    w.field("discrepancy", worst);
  }
  w.end_object();
  return w.str();
}

/// Spectrum document: header plus "bipartition", "spectrum", "purity",
/// "entropy", and the closed-form purity with its difference when given.
inline std::string spectrum_document(const Excitation& n, const Angles& angles,
                                     const ModeSpectrum& s,
                                     std::optional<double> closed_form = std::nullopt) {
  JsonWriter w;
  w.begin_object();
  detail::write_header(w, n, angles);
  w.field("bipartition", to_string(s.bipartition));
  w.array("spectrum", s.values);
  w.field("purity", purity(s));
  w.field("entropy", von_neumann_entropy(s));
  if (closed_form) {
    w.field("closed_form_purity", *closed_form);
    w.field("difference", *closed_form - purity(s));
  }
  w.end_object();
  return w.str();
}

}  // namespace tripartite
