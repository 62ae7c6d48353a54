#include "latfit/approx1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latfit/error.hpp"

namespace latfit {

Normalized1D normalize_1d(std::span<const double> values) {
  const std::size_t k = values.size();
  if (k < 3) {
    throw Error(ErrorCode::kDegenerateInput, "need at least 3 values");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kDegenerateInput, "values must be finite");
    }
  }
  Normalized1D nz;
  nz.values.assign(values.begin(), values.end());
  nz.sort_permutation.resize(k);
  std::iota(nz.sort_permutation.begin(), nz.sort_permutation.end(), 0);
  std::stable_sort(nz.sort_permutation.begin(), nz.sort_permutation.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double lo = values[nz.sort_permutation.front()];
  const double hi = values[nz.sort_permutation.back()];
  if (!(hi - lo > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "all values are equal");
  }
  nz.origin = lo;
  nz.scale = hi - lo;
  nz.alphas.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    nz.alphas[j] = (values[nz.sort_permutation[j]] - lo) / nz.scale;
  }
  nz.alphas.front() = 0.0;
  nz.alphas.back() = 1.0;
  return nz;
}

Matrix build_embedding_1d(const Normalized1D& nz, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1)");
  }
  const std::size_t k = nz.size();
  const std::size_t m = k - 1;
  Matrix t(m, m);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    t(i, i) = 1.0;
    t(m - 1, i) = nz.alphas[i + 1];
  }
  t(m - 1, m - 1) = eps;
  return t;
}

std::vector<Candidate1D> extract_candidates_1d(const ReductionResult& rr,
                                               const Normalized1D& nz,
                                               NormChoice choice) {
  const std::size_t k = nz.size();
  const std::size_t m = k - 1;
  if (rr.transform.rows() != m || rr.transform.cols() != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "transform does not match the normalized set");
  }
  const PointSet ps = PointSet::from_values(nz.values);

  std::vector<Candidate1D> out;
  for (std::size_t r = 0; r < m; ++r) {
    const std::int64_t last = rr.transform(r, m - 1);
    if (last == 0) continue;
    const std::int64_t sign = last < 0 ? 1 : -1;
    Candidate1D c;
    c.q = -sign * last;
    if (std::any_of(out.begin(), out.end(),
                    [&](const Candidate1D& o) { return o.q == c.q; })) {
      continue;
    }
    c.p.assign(k, 0);
    for (std::size_t i = 0; i + 1 < m; ++i) c.p[i + 1] = sign * rr.transform(r, i);
    c.p.back() = c.q;
    c.origin = nz.origin;
    c.d = nz.scale / static_cast<double>(c.q);
    c.source_row = r;
    c.report = score(ps, c.lattice());
    c.norm_max = c.report->norm_max;
    c.norm_l2 = c.report->norm_l2;
    out.push_back(std::move(c));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kNoCandidate, "every transform row has zero last entry");
  }
  std::stable_sort(out.begin(), out.end(),
                   [choice](const Candidate1D& a, const Candidate1D& b) {
                     const double na = a.norm(choice);
                     const double nb = b.norm(choice);
                     if (std::abs(na - nb) <= 1e-12 * std::max(na, nb)) return a.q < b.q;
                     return na < nb;
                   });
  return out;
}

double thm22_bound(std::size_t k) {
  if (k < 3) throw Error(ErrorCode::kInvalidArgument, "k must be >= 3");
  return std::pow(2.0, (static_cast<double>(k) - 1.0) / 4.0);
}

Approx1DResult approximate_1d(std::span<const double> values, double eps,
                              const Approx1DOptions& options) {
  Normalized1D nz = normalize_1d(values);
  const Matrix t = build_embedding_1d(nz, eps);
  ReductionResult rr =
      lll_reduce(t, ReductionParams{options.delta, options.precision.digits});
  auto all = extract_candidates_1d(rr, nz, options.norm);
  Approx1DResult result{all.front(), std::move(all), std::move(rr), std::move(nz)};
  result.envelope_violated = !(result.best.norm_max < thm22_bound(values.size()));
  return result;
}

Thm24Certificate thm24_certificate(std::span<const double> values, double d,
                                   double o) {
  const Normalized1D nz = normalize_1d(values);
  if (!(d > 0.0 && d <= nz.scale)) {
    throw Error(ErrorCode::kInvalidArgument, "d must lie in (0, max - min]");
  }
  const std::size_t k = nz.size();
  Thm24Certificate cert;
  const PointSet ps = PointSet::from_values(nz.values);
  cert.c2 = score(ps, AffineLattice({o}, Matrix{{d}})).norm_max;
  cert.t = nz.scale / d;
  cert.q = static_cast<std::int64_t>(std::llround(cert.t));
  if (cert.q == 0) {
    throw Error(ErrorCode::kDegenerateInput, "q rounds to zero");
  }
  const double qd = static_cast<double>(cert.q);
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const double x = qd * nz.alphas[i];
    cert.max_dist_to_int = std::max(cert.max_dist_to_int, std::abs(x - std::round(x)));
  }
  cert.t_gap = std::abs(cert.t - qd);
  const double decay = std::pow(qd, -1.0 / (static_cast<double>(k) - 2.0));
  cert.alpha_bound = 6.0 * cert.c2 * decay;
  cert.t_bound = 3.0 * cert.c2 * decay;
  // Quantities at rounding level count as zero, so an exact lattice passes.
  constexpr double kZero = 1e-12;
  const bool alpha_ok = cert.max_dist_to_int < cert.alpha_bound ||
                        cert.max_dist_to_int <= kZero;
  const bool t_ok = cert.t_gap < cert.t_bound || cert.t_gap <= kZero;
  cert.bound_ok = alpha_ok && t_ok;
  return cert;
}

Thm25Floor thm25_floor(double b1_norm, double eps, std::size_t k,
                       std::span<const std::int64_t> q_primes) {
  if (!(b1_norm > 0.0) || !(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "|b1| and eps must be positive");
  }
  const double kk = static_cast<double>(k);
  Thm25Floor f;
  f.b1_norm = b1_norm;
  f.d_threshold = std::sqrt(kk) * std::pow(2.0, kk / 2.0 - 1.0) * eps / b1_norm;
  for (std::int64_t qp : q_primes) {
    if (qp <= 0) throw Error(ErrorCode::kInvalidArgument, "q' must be positive");
    f.floors.push_back(
        {qp, std::pow(2.0, 1.0 - kk / 2.0) * b1_norm /
                 (static_cast<double>(qp) * std::sqrt(kk))});
  }
  return f;
}

Thm25Floor thm25_floor(const ReductionResult& rr, double eps, std::size_t k,
                       std::span<const std::int64_t> q_primes) {
  Thm25Floor f = thm25_floor(rr.shortest_norm, eps, k, q_primes);
  const std::int64_t q = rr.transform(0, rr.transform.cols() - 1);
  if (q != 0) {
    f.achieved_q = q < 0 ? -q : q;
    f.achieved_bound = rr.shortest_norm / static_cast<double>(*f.achieved_q);
  }
  return f;
}

double suggest_eps(double target_spacing, std::size_t k) {
  if (!(target_spacing > 0.0 && target_spacing < 1.0) || k < 3) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < target < 1 and k >= 3");
  }
  return std::pow(target_spacing, 1.0 / (static_cast<double>(k) - 2.0));
}

}  // namespace latfit
