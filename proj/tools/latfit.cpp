#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "latfit/report.hpp"

namespace {

constexpr int kUsageError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit an affine lattice to a finite point set"};

  std::string input = "-";
  std::string mode = "general";
  std::optional<double> eps;
  std::optional<std::string> sweep;
  std::string norm = "max";
  int digits = latfit::Precision::kDoubleDigits;
  bool refine = false;
  std::string format = "text";
  std::string output;
  std::size_t alternatives = 0;

  app.add_option("input", input, "Point file, one point per line ('-' for stdin)");
  app.add_option("--mode", mode, "Pipeline")->check(CLI::IsMember({"1d", "axis", "general"}));
  auto* eps_opt = app.add_option("--eps", eps, "Embedding parameter in (0, 1)");
  app.add_option("--eps-sweep", sweep, "Decade sweep start:end, e.g. 2:10 for 1e-2 ... 1e-10")
      ->excludes(eps_opt);
  app.add_option("--norm", norm, "Norm used to rank 1-D candidates")
      ->check(CLI::IsMember({"max", "l2"}));
  app.add_option("--digits", digits, "Working precision in decimal digits (10..50)");
  app.add_flag("--refine", refine, "Least-squares fine-tuning of the chosen lattice");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", output, "Write the report here instead of stdout");
  app.add_option("--alternatives", alternatives,
                 "Debug: also score up to N other Q row subsets (general mode, N <= 10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  latfit::RunConfig cfg;
  try {
    cfg.mode = latfit::parse_mode(mode);
    cfg.norm = latfit::parse_norm(norm);
    cfg.format = latfit::parse_format(format);
    cfg.digits = digits;
    cfg.refine = refine;
    cfg.alternatives = alternatives;
    if (sweep) {
      cfg.eps = latfit::parse_sweep(*sweep);
    } else {
      cfg.eps = {eps.value_or(1e-3)};
    }
    cfg.validate();
  } catch (const latfit::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  std::optional<latfit::RunResult> result;
  try {
    const latfit::PointSet ps =
        input == "-" ? latfit::ingest(std::cin) : latfit::ingest_file(input);
    result = latfit::run(cfg, ps);
  } catch (const latfit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string report = cfg.format == latfit::OutputFormat::kJson
                                 ? latfit::to_json(*result)
                                 : latfit::to_text(*result);
  if (output.empty()) {
    std::cout << report;
  } else {
    std::ofstream f(output);
    if (!f) {
      std::cerr << "error: cannot write " << output << "\n";
      return 1;
    }
    f << report;
  }
  for (const auto& e : result->entries) {
    if (!e.ok()) std::cerr << "eps " << e.eps << ": " << e.message << "\n";
  }
  return latfit::exit_status(*result);
}
