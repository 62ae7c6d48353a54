#pragma once

#include "latfit/matrix.hpp"
#include "latfit/precision.hpp"

namespace latfit {

struct ReductionParams {
  // Lovász parameter, 0.25 < delta < 1.
  double delta = 0.75;
  int precision_digits = Precision::kDoubleDigits;

  void validate() const;
};

struct ReductionResult {
  // Rows are the reduced basis b_1 ... b_m.
  Matrix reduced;
  // Unimodular integer matrix with transform * input == reduced.
  IntMatrix transform;
  // Euclidean norm of the first reduced row.
  double shortest_norm = 0.0;
};

// LLL reduction of the row basis `basis`. The unimodular transform is
// accumulated exactly in integers alongside the floating-point reduction, and
// each visited row is recomputed as transform_row * input so the reduced basis
// never drifts from the transform. Gram-Schmidt runs at the precision selected
// by params.precision_digits (double up to 16 digits, ExtendedReal above).
//
// Throws DependentRows when a Gram-Schmidt vector collapses (relative norm
// below 1e-12 at 16 digits, 10^-(digits-4) in general) and PrecisionLoss when
// the integer transform would overflow int64.
ReductionResult lll_reduce(const Matrix& basis, const ReductionParams& params = {});

// Post-hoc checks used by tests and by the pipelines' self-verification.
bool is_size_reduced(const Matrix& basis, double slack = 1e-6);
bool satisfies_lovasz(const Matrix& basis, double delta, double slack = 1e-9);

// Exact determinant of an integer matrix (fraction-free elimination on
// arbitrary-precision integers), rounded to double on return.
double integer_determinant(const IntMatrix& m);

}  // namespace latfit
