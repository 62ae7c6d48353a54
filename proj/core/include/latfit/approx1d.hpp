#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "latfit/lattice.hpp"
#include "latfit/lll.hpp"
#include "latfit/matrix.hpp"
#include "latfit/precision.hpp"

namespace latfit {

enum class NormChoice { kMax, kL2 };

// Input values shifted to start at 0 and scaled to end at 1, in ascending
// order. sort_permutation[j] is the input index of the j-th smallest value.
struct Normalized1D {
  // Raw input, in input order.
  std::vector<double> values;
  double origin = 0.0;
  double scale = 0.0;
  std::vector<double> alphas;
  std::vector<std::size_t> sort_permutation;

  std::size_t size() const noexcept { return alphas.size(); }
};

struct Candidate1D {
  // Integer multipliers in ascending-value order: p.front() == 0, p.back() == q.
  IntVector p;
  std::int64_t q = 0;
  double origin = 0.0;
  double d = 0.0;
  double norm_max = 0.0;
  double norm_l2 = 0.0;
  // Index of the transform row the candidate came from.
  std::size_t source_row = 0;
  // Nearest-point scoring against the raw values, in input order.
  std::optional<FitReport> report;

  double norm(NormChoice c) const { return c == NormChoice::kMax ? norm_max : norm_l2; }
  AffineLattice lattice() const { return AffineLattice({origin}, Matrix{{d}}); }
};

Normalized1D normalize_1d(std::span<const double> values);

// (k-1) x (k-1) matrix: identity over the first k-2 rows, last row holds the
// interior alphas followed by eps.
Matrix build_embedding_1d(const Normalized1D& nz, double eps);

// One candidate per transform row with a nonzero last entry, sorted by the
// chosen norm (ties prefer smaller q). Throws NoCandidate if none exists.
std::vector<Candidate1D> extract_candidates_1d(const ReductionResult& rr,
                                               const Normalized1D& nz,
                                               NormChoice choice = NormChoice::kMax);

struct Approx1DResult {
  Candidate1D best;
  std::vector<Candidate1D> all;
  ReductionResult reduction;
  Normalized1D normalized;
  // Set when best.norm_max does not beat 2^((k-1)/4); reported, not thrown.
  bool envelope_violated = false;
};

struct Approx1DOptions {
  NormChoice norm = NormChoice::kMax;
  Precision precision{};
  double delta = 0.75;
};

Approx1DResult approximate_1d(std::span<const double> values, double eps,
                              const Approx1DOptions& options = {});

// 2^((k-1)/4): the polynomial-time guarantee on the max norm.
double thm22_bound(std::size_t k);

struct Thm24Certificate {
  std::int64_t q = 0;
  double c2 = 0.0;
  double t = 0.0;
  double max_dist_to_int = 0.0;
  double t_gap = 0.0;
  // 6 c2 q^(-1/(k-2)) and 3 c2 q^(-1/(k-2)).
  double alpha_bound = 0.0;
  double t_bound = 0.0;
  bool bound_ok = false;
};

// Homogeneous approximation certificate for a lattice (d, o) on the values:
// q = round((a_max - a_min)/d) must approximate every alpha_i within
// 6 c2 q^(-1/(k-2)) where c2 is the max norm of (d, o).
Thm24Certificate thm24_certificate(std::span<const double> values, double d,
                                   double o);

struct Thm25Floor {
  double b1_norm = 0.0;
  // No lattice spacing d' above this can beat the floors below.
  double d_threshold = 0.0;
  struct Entry {
    std::int64_t q_prime = 0;
    double floor = 0.0;
  };
  std::vector<Entry> floors;
  // |b_1| / q for the q read off the first transform row, when nonzero.
  std::optional<std::int64_t> achieved_q;
  std::optional<double> achieved_bound;
};

Thm25Floor thm25_floor(double b1_norm, double eps, std::size_t k,
                       std::span<const std::int64_t> q_primes);
Thm25Floor thm25_floor(const ReductionResult& rr, double eps, std::size_t k,
                       std::span<const std::int64_t> q_primes);

// eps of order d0^(1/(k-2)) for a desired normalized spacing d0 in (0, 1).
double suggest_eps(double target_spacing, std::size_t k);

}  // namespace latfit
