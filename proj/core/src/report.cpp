#include "latfit/report.hpp"

#include <charconv>
#include <concepts>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "latfit/approxaxis.hpp"
#include "latfit/approxnd.hpp"

namespace latfit {
namespace {

using nlohmann::json;

bool is_separator(char c) {
  return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

std::vector<double> parse_line(std::string_view line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_separator(line[j])) ++j;
    std::string_view tok = line.substr(i, j - i);
    if (tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(lineno) +
                                              ": bad number '" +
                                              std::string(line.substr(i, j - i)) + "'");
    }
    out.push_back(v);
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool warn_precision(double eps, const RunConfig& cfg) {
  return eps <= 1e-8 && cfg.digits <= Precision::kDoubleDigits;
}

RunEntry run_one_d(const RunConfig& cfg, const PointSet& ps, double eps) {
  RunEntry e;
  e.eps = eps;
  const auto values = ps.coordinate(0);
  Approx1DOptions opt;
  opt.norm = cfg.norm;
  opt.precision.digits = cfg.digits;
  auto r = approximate_1d(values, eps, opt);
  const Candidate1D& best = r.best;
  const AffineLattice lat = best.lattice();
  e.report = best.report ? *best.report : score(ps, lat);

  std::vector<IntVector> coeffs(values.size());
  for (std::size_t j = 0; j < best.p.size(); ++j) {
    coeffs[r.normalized.sort_permutation[j]] = {best.p[j]};
  }
  e.assigned = score_assigned(ps, lat, coeffs);
  e.q_values = {best.q};

  std::set<std::int64_t> qs;
  for (const auto& c : r.all) qs.insert(c.q);
  const std::vector<std::int64_t> q_primes(qs.begin(), qs.end());
  Certificates1D cert;
  cert.thm22_bound = thm22_bound(values.size());
  cert.thm24 = thm24_certificate(values, best.d, best.origin);
  cert.thm25 = thm25_floor(r.reduction, eps, values.size(), q_primes);
  e.certificates = cert;

  if (cfg.refine) e.refinement = refine_candidate(ps, best, r.normalized);
  return e;
}

RunEntry run_axis(const RunConfig& cfg, const PointSet& ps, double eps) {
  RunEntry e;
  e.eps = eps;
  Approx1DOptions opt;
  opt.norm = cfg.norm;
  opt.precision.digits = cfg.digits;
  auto r = approximate_axis(ps, eps, opt);
  e.report = r.report;
  for (const auto& c : r.per_axis) e.q_values.push_back(c.q);
  return e;
}

RunEntry from_candidate(const RunConfig& cfg, const PointSet& ps,
                        const CandidateND& c) {
  RunEntry e;
  e.eps = c.eps;
  e.report = c.report;
  e.assigned = c.assigned;
  e.q_block = c.selection.Q;
  if (cfg.refine) e.refinement = refine_candidate(ps, c);
  if (cfg.alternatives > 0) {
    for (auto& alt : alternative_candidates(ps, c, cfg.alternatives)) {
      e.alternatives.push_back({alt.selection.Q, alt.selection.q_rows, std::move(alt.report)});
    }
  }
  return e;
}

template <typename F>
RunEntry guarded(double eps, F&& f) {
  try {
    return f();
  } catch (const Error& err) {
    RunEntry e;
    e.eps = eps;
    e.error = err.code();
    e.message = err.what();
    return e;
  }
}

json vec_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

json lattice_json(const AffineLattice& lat) {
  json basis = json::array();
  for (std::size_t i = 0; i < lat.basis().rows(); ++i) basis.push_back(vec_json(lat.basis_vector(i)));
  return {{"origin", lat.origin()}, {"basis", basis}};
}

json fit_json(const FitReport& r) {
  json j = lattice_json(r.lattice);
  j["coefficients"] = r.coeffs;
  j["distances"] = r.distances;
  j["delta"] = r.delta;
  j["diameter"] = r.diameter;
  j["norm_max"] = r.norm_max;
  j["norm_l2"] = r.norm_l2;
  return j;
}

json int_matrix_json(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row_vector(i));
  return out;
}

json cert_json(const Certificates1D& c) {
  json t24 = {{"q", c.thm24.q},
              {"c2", c.thm24.c2},
              {"t", c.thm24.t},
              {"max_dist_to_int", c.thm24.max_dist_to_int},
              {"t_gap", c.thm24.t_gap},
              {"alpha_bound", c.thm24.alpha_bound},
              {"t_bound", c.thm24.t_bound},
              {"bound_ok", c.thm24.bound_ok}};
  json floors = json::array();
  for (const auto& f : c.thm25.floors) floors.push_back({{"q_prime", f.q_prime}, {"floor", f.floor}});
  json t25 = {{"b1_norm", c.thm25.b1_norm},
              {"d_threshold", c.thm25.d_threshold},
              {"floors", floors}};
  if (c.thm25.achieved_q) t25["achieved_q"] = *c.thm25.achieved_q;
  if (c.thm25.achieved_bound) t25["achieved_bound"] = *c.thm25.achieved_bound;
  return {{"thm22_bound", c.thm22_bound}, {"thm24", t24}, {"thm25", t25}};
}

json entry_json(const RunEntry& e, Mode mode) {
  json j = {{"eps", e.eps}, {"ok", e.ok()}, {"precision_warning", e.precision_warning}};
  if (e.error) {
    j["error"] = std::string(to_string(*e.error));
    j["message"] = e.message;
  }
  if (!e.report) return j;
  j.update(fit_json(*e.report));
  if (e.assigned) {
    j["assigned"] = {{"coefficients", e.assigned->coeffs},
                     {"distances", e.assigned->distances},
                     {"norm_max", e.assigned->norm_max},
                     {"norm_l2", e.assigned->norm_l2}};
  }
  if (mode == Mode::kOneD && !e.q_values.empty()) j["q"] = e.q_values.front();
  if (mode == Mode::kAxis) j["q"] = e.q_values;
  if (e.q_block) j["Q"] = int_matrix_json(*e.q_block);
  if (e.certificates) j["certificates"] = cert_json(*e.certificates);
  if (e.refinement) {
    const auto& r = *e.refinement;
    j["refinement"] = {
        {"before", {{"norm_max", r.before.norm_max},
                    {"norm_l2", r.before.norm_l2},
                    {"frozen_rss", r.before_frozen_rss}}},
        {"after", fit_json(r.after.report)}};
    j["refinement"]["after"]["frozen_rss"] = r.after.frozen_rss;
  }
  if (!e.alternatives.empty()) {
    json alts = json::array();
    for (const auto& a : e.alternatives) {
      json aj = lattice_json(a.report.lattice);
      aj["Q"] = int_matrix_json(a.Q);
      aj["q_rows"] = a.q_rows;
      aj["norm_max"] = a.report.norm_max;
      aj["norm_l2"] = a.report.norm_l2;
      alts.push_back(std::move(aj));
    }
    j["alternatives"] = std::move(alts);
  }
  return j;
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  if (v != 0.0 && std::abs(v) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.*e", prec - 1, v);
  } else {
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  }
  return buf;
}

std::string fmt_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0e", v);
  return buf;
}

std::string tuple(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

template <std::integral I>
std::string tuple(const std::vector<I>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

void write_entry_detail(std::ostream& os, const RunEntry& e, const Matrix& pts) {
  const FitReport& r = *e.report;
  os << "origin  " << tuple(r.lattice.origin()) << "\n";
  for (std::size_t i = 0; i < r.lattice.basis().rows(); ++i) {
    os << "d" << i + 1 << "      " << tuple(r.lattice.basis_vector(i)) << "\n";
  }
  if (!e.q_values.empty()) {
    os << "q       " << tuple(e.q_values) << "\n";
  }
  if (e.q_block) {
    os << "Q       ";
    for (std::size_t i = 0; i < e.q_block->rows(); ++i) os << tuple(e.q_block->row_vector(i)) << " ";
    os << "\n";
  }
  os << "\n  i  point                     coeffs          approx                    dist\n";
  const auto approx = r.approximations();
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    char line[256];
    std::snprintf(line, sizeof line, "%3zu  %-24s  %-14s  %-24s  %s\n", i + 1,
                  tuple(pts.row(i)).c_str(), tuple(r.coeffs[i]).c_str(),
                  tuple(approx[i]).c_str(), fmt(r.distances[i]).c_str());
    os << line;
  }
  os << "\ndelta " << fmt(r.delta) << "  diameter " << fmt(r.diameter) << "  N "
     << fmt(r.norm_max) << "  N2 " << fmt(r.norm_l2) << "\n";
  if (e.assigned) {
    os << "assigned coefficients: N " << fmt(e.assigned->norm_max) << "  N2 "
       << fmt(e.assigned->norm_l2) << "\n";
  }
  if (e.certificates) {
    const auto& c = *e.certificates;
    os << "envelope 2^((k-1)/4) = " << fmt(c.thm22_bound) << "\n";
    os << "homogeneous certificate: q " << c.thm24.q << "  c2 " << fmt(c.thm24.c2)
       << "  max ||q alpha|| " << fmt(c.thm24.max_dist_to_int, 6) << "  bound "
       << fmt(c.thm24.alpha_bound, 6) << (c.thm24.bound_ok ? "  ok" : "  VIOLATED") << "\n";
    os << "lower floor: |b1| " << fmt(c.thm25.b1_norm, 6) << "  d threshold "
       << fmt(c.thm25.d_threshold, 6);
    if (c.thm25.achieved_bound) os << "  |b1|/q " << fmt(*c.thm25.achieved_bound, 6);
    os << "\n";
  }
  if (e.refinement) {
    const auto& rf = *e.refinement;
    os << "\nrefined origin  " << tuple(rf.after.lattice.origin()) << "\n";
    for (std::size_t i = 0; i < rf.after.lattice.basis().rows(); ++i) {
      os << "refined d" << i + 1 << "      " << tuple(rf.after.lattice.basis_vector(i)) << "\n";
    }
    os << "before: N " << fmt(rf.before.norm_max) << "  N2 " << fmt(rf.before.norm_l2)
       << "  rss " << fmt(rf.before_frozen_rss, 6) << "\n";
    os << "after:  N " << fmt(rf.after.report.norm_max) << "  N2 "
       << fmt(rf.after.report.norm_l2) << "  rss " << fmt(rf.after.frozen_rss, 6) << "\n";
  }
  if (!e.alternatives.empty()) {
    os << "\nalternative Q blocks\n";
    for (const auto& a : e.alternatives) {
      os << "  rows " << tuple(a.q_rows) << "  Q ";
      for (std::size_t i = 0; i < a.Q.rows(); ++i) os << tuple(a.Q.row_vector(i)) << " ";
      os << " N " << fmt(a.report.norm_max) << "  N2 " << fmt(a.report.norm_l2) << "\n";
    }
  }
}

}  // namespace

PointSet ingest(std::istream& in) {
  std::vector<Vector> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto row = parse_line(t, lineno);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "line " + std::to_string(lineno) + ": expected " +
                      std::to_string(rows.front().size()) + " coordinates, got " +
                      std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kDegenerateInput, "no points in input");
  return PointSet::from_rows(rows);
}

PointSet ingest_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kParseError, "cannot open " + path);
  return ingest(f);
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kOneD:
      return "1d";
    case Mode::kAxis:
      return "axis";
    case Mode::kGeneral:
      return "general";
  }
  return "general";
}

Mode parse_mode(std::string_view s) {
  if (s == "1d" || s == "one_d") return Mode::kOneD;
  if (s == "axis") return Mode::kAxis;
  if (s == "general") return Mode::kGeneral;
  throw Error(ErrorCode::kInvalidArgument, "unknown mode " + std::string(s));
}

NormChoice parse_norm(std::string_view s) {
  if (s == "max") return NormChoice::kMax;
  if (s == "l2") return NormChoice::kL2;
  throw Error(ErrorCode::kInvalidArgument, "unknown norm " + std::string(s));
}

OutputFormat parse_format(std::string_view s) {
  if (s == "text") return OutputFormat::kText;
  if (s == "json") return OutputFormat::kJson;
  throw Error(ErrorCode::kInvalidArgument, "unknown format " + std::string(s));
}

std::vector<double> parse_sweep(std::string_view spec) {
  const auto colon = spec.find(':');
  auto bad = [&] {
    return Error(ErrorCode::kInvalidArgument,
                 "sweep must look like start:end, got '" + std::string(spec) + "'");
  };
  if (colon == std::string_view::npos) throw bad();
  int a = 0;
  int b = 0;
  auto parse_int = [&](std::string_view t, int& v) {
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size()) throw bad();
  };
  parse_int(spec.substr(0, colon), a);
  parse_int(spec.substr(colon + 1), b);
  a = -std::abs(a);
  b = -std::abs(b);
  if (a == 0 || b == 0) {
    throw Error(ErrorCode::kInvalidArgument, "sweep exponents must be nonzero");
  }
  return decade_range(a, b);
}

void RunConfig::validate() const {
  if (eps.empty()) throw Error(ErrorCode::kInvalidArgument, "empty eps list");
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1)");
    }
  }
  Precision{digits}.validate();
  if (alternatives > 10) {
    throw Error(ErrorCode::kInvalidArgument, "at most 10 alternative Q blocks");
  }
}

bool RunResult::any_candidate() const noexcept {
  for (const auto& e : entries) {
    if (e.ok()) return true;
  }
  return false;
}

RunResult run(const RunConfig& config, const PointSet& ps) {
  config.validate();
  if (config.mode == Mode::kOneD && ps.dim() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "1d mode needs one coordinate per line");
  }
  RunResult result{config, ps.coords(), {}};
  result.entries.reserve(config.eps.size());

  if (config.mode == Mode::kGeneral) {
    GeneralOptions opt;
    opt.precision.digits = config.digits;
    for (auto& s : epsilon_sweep(ps, config.eps, opt, config.eps.size() > 1)) {
      if (!s.ok()) {
        RunEntry e;
        e.eps = s.eps;
        e.error = s.error;
        e.message = std::move(s.message);
        result.entries.push_back(std::move(e));
        continue;
      }
      result.entries.push_back(guarded(s.eps, [&] {
        return from_candidate(config, ps, *s.candidate);
      }));
    }
  } else {
    for (double eps : config.eps) {
      result.entries.push_back(guarded(eps, [&] {
        return config.mode == Mode::kOneD ? run_one_d(config, ps, eps)
                                          : run_axis(config, ps, eps);
      }));
    }
  }
  for (auto& e : result.entries) e.precision_warning = warn_precision(e.eps, config);
  return result;
}

std::string to_json(const RunResult& result) {
  const RunConfig& cfg = result.config;
  json points = json::array();
  for (std::size_t i = 0; i < result.points.rows(); ++i) points.push_back(vec_json(result.points.row(i)));
  json entries = json::array();
  for (const auto& e : result.entries) entries.push_back(entry_json(e, cfg.mode));
  json out = {{"schema", 1},
              {"mode", std::string(to_string(cfg.mode))},
              {"norm", cfg.norm == NormChoice::kMax ? "max" : "l2"},
              {"digits", cfg.digits},
              {"refine", cfg.refine},
              {"eps", cfg.eps},
              {"points", points},
              {"entries", entries}};
  return out.dump(2) + "\n";
}

std::string to_text(const RunResult& result) {
  std::ostringstream os;
  const RunConfig& cfg = result.config;
  os << "mode " << to_string(cfg.mode) << ", k = " << result.points.rows()
     << ", n = " << result.points.cols() << ", digits " << cfg.digits << "\n";
  if (result.entries.size() > 1) {
    os << "\n  eps      N         N2        delta     status\n";
    for (const auto& e : result.entries) {
      char line[160];
      if (e.ok()) {
        std::snprintf(line, sizeof line, "  %-7s  %-8s  %-8s  %-8s  ok%s\n",
                      fmt_sci(e.eps).c_str(), fmt(e.report->norm_max).c_str(),
                      fmt(e.report->norm_l2).c_str(), fmt(e.report->delta).c_str(),
                      e.precision_warning ? " (low precision)" : "");
      } else {
        std::snprintf(line, sizeof line, "  %-7s  %-8s  %-8s  %-8s  %s\n",
                      fmt_sci(e.eps).c_str(), "-", "-", "-",
                      std::string(to_string(*e.error)).c_str());
      }
      os << line;
    }
  }
  for (const auto& e : result.entries) {
    os << "\n== eps " << fmt_sci(e.eps) << " ==\n";
    if (!e.ok()) {
      os << "failed: " << e.message << "\n";
      continue;
    }
    if (e.precision_warning) {
      os << "warning: eps <= 1e-8 at double precision, consider --digits 20\n";
    }
    write_entry_detail(os, e, result.points);
  }
  return os.str();
}

int exit_status(const RunResult& result) noexcept {
  return result.any_candidate() ? 0 : 1;
}

}  // namespace latfit
