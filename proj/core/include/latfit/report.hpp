#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latfit/approx1d.hpp"
#include "latfit/error.hpp"
#include "latfit/lattice.hpp"
#include "latfit/refine.hpp"

namespace latfit {

// One point per line, coordinates separated by commas and/or whitespace.
// Blank lines and lines starting with '#' are skipped.
PointSet ingest(std::istream& in);
PointSet ingest_file(const std::string& path);

enum class Mode { kOneD, kAxis, kGeneral };
enum class OutputFormat { kText, kJson };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);
NormChoice parse_norm(std::string_view s);
OutputFormat parse_format(std::string_view s);

// "a:b" -> 10^-|a| ... 10^-|b|, one per decade, in the direction written.
std::vector<double> parse_sweep(std::string_view spec);

struct RunConfig {
  Mode mode = Mode::kGeneral;
  // One entry is a single run, several are a sweep.
  std::vector<double> eps;
  NormChoice norm = NormChoice::kMax;
  int digits = Precision::kDoubleDigits;
  bool refine = false;
  OutputFormat format = OutputFormat::kText;
  // general mode: also score up to this many other Q row subsets (0..10).
  std::size_t alternatives = 0;

  void validate() const;
};

struct Certificates1D {
  double thm22_bound = 0.0;
  Thm24Certificate thm24;
  Thm25Floor thm25;
};

struct AlternativeQ {
  IntMatrix Q;
  std::vector<std::size_t> q_rows;
  FitReport report;
};

struct RunEntry {
  double eps = 0.0;
  bool precision_warning = false;
  std::optional<FitReport> report;
  std::optional<FitReport> assigned;
  // 1d: the multiplier q; axis: one q per axis.
  std::vector<std::int64_t> q_values;
  // general: the selected Q block.
  std::optional<IntMatrix> q_block;
  std::optional<Certificates1D> certificates;
  std::optional<RefinementSummary> refinement;
  std::vector<AlternativeQ> alternatives;
  std::optional<ErrorCode> error;
  std::string message;

  bool ok() const noexcept { return report.has_value(); }
};

struct RunResult {
  RunConfig config;
  Matrix points;
  std::vector<RunEntry> entries;

  bool any_candidate() const noexcept;
};

// Runs the configured pipeline once per eps. Pipeline failures are recorded
// on the entry; configuration errors throw.
RunResult run(const RunConfig& config, const PointSet& ps);

std::string to_json(const RunResult& result);
std::string to_text(const RunResult& result);

// 0 when at least one entry produced a candidate, 1 otherwise.
int exit_status(const RunResult& result) noexcept;

}  // namespace latfit
