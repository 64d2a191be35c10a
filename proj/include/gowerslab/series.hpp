#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gowerslab/core.hpp"

namespace gowerslab {

using Complex = std::complex<double>;

/// e(x) = exp(2 pi i x), with x reduced mod 1 before the trigonometry.
Complex e(long double x);

/// Slack allowed on |f(n)| <= 1 for values produced by transcendental functions.
inline constexpr double kBoundednessSlack = 1e-12;

/// Finitely supported function Z -> C. Values outside the stored window are zero.
class Series {
 public:
  Series() = default;
  Series(std::int64_t support_start, std::vector<Complex> values, std::string label = {});

  /// Same, but checks |value| <= 1 + kBoundednessSlack and marks the series
  /// as 1-bounded. Throws std::domain_error on a violating value.
  static Series bounded(std::int64_t support_start, std::vector<Complex> values, std::string label = {});

  /// Indicator of a closed interval.
  static Series indicator(Interval window, std::string label = {});
  /// Indicator of a progression; the window spans min()..max().
  static Series indicator(const Progression& p, std::string label = {});

  std::int64_t support_start() const { return start_; }
  std::int64_t support_end() const { return start_ + static_cast<std::int64_t>(values_.size()) - 1; }
  Interval window() const { return {start_, support_end()}; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<Complex>& values() const { return values_; }
  const std::string& label() const { return label_; }
  bool is_one_bounded() const { return one_bounded_; }

  /// f(n), zero outside the window.
  Complex operator()(std::int64_t n) const {
    const std::int64_t k = n - start_;
    if (k < 0 || k >= static_cast<std::int64_t>(values_.size())) return {};
    return values_[static_cast<std::size_t>(k)];
  }

  /// Smallest interval containing every nonzero value (empty if f = 0).
  Interval nonzero_span() const;

  /// Pointwise product with the indicator of `set` (window unchanged).
  Series restricted(const Progression& set) const;
  Series restricted(const std::vector<std::int64_t>& set) const;

  /// Drops leading and trailing zeros.
  Series trimmed() const;

  Series with_label(std::string label) const;

  friend bool operator==(const Series& a, const Series& b) {
    return a.start_ == b.start_ && a.values_ == b.values_;
  }

 private:
  std::int64_t start_ = 0;
  std::vector<Complex> values_;
  std::string label_;
  bool one_bounded_ = false;
};

enum class GeneratorKind { constant, random_unimodular, random_pm1, polynomial_phase, bracket_phase, indicator };

std::string to_string(GeneratorKind kind);
/// Throws std::invalid_argument for an unknown name.
GeneratorKind generator_kind_from_string(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::constant;
  /// polynomial_phase: e(sum_j coefficients[j-1] n^j).
  std::vector<double> coefficients;
  /// bracket_phase: e(alpha n floor(beta n)).
  double alpha = 0.0;
  double beta = 0.0;
  /// constant: value (modulus <= 1).
  Complex value{1.0, 0.0};
  /// indicator: the set.
  Progression set{};
  std::uint64_t seed = 0;
};

/// 1-bounded series on `window`. Throws std::invalid_argument for an empty
/// window or a constant of modulus > 1.
Series generate(const GeneratorSpec& spec, Interval window);

/// f~(x) = f((x - a n)/a_i) when a_i divides x - a n and the quotient lies in
/// [-n, n], zero otherwise; the window is [0, 2 a n]. Requires f supported in
/// [-n, n] and 1 <= |a_i| <= a.
Series dilate_embed(const Series& f, std::int64_t a_i, std::int64_t a, std::int64_t n);

/// n -> e(theta n) f(n).
Series modulate(const Series& f, double theta);

enum class SeriesFormat { csv, json };

/// Picks the format from the file extension (.csv or .json).
SeriesFormat series_format_for(const std::filesystem::path& path);

/// CSV rows "n,re,im" (an optional header line is skipped; gaps in n are zero)
/// or JSON {"support_start": n, "values": [[re, im], ...]}. Throws
/// std::runtime_error on malformed or non-finite input, an empty series, or
/// (with require_one_bounded) a value of modulus > 1.
Series read_series(const std::filesystem::path& path, SeriesFormat format, bool require_one_bounded = false);
void write_series(const Series& series, const std::filesystem::path& path, SeriesFormat format);

}  // namespace gowerslab
