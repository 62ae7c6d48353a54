#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "latfit/error.hpp"

namespace latfit {

// Working type for the extended-precision tier: 50 significant decimal
// digits, header-only, no global state.
using ExtendedReal = boost::multiprecision::cpp_bin_float_50;

// Requested number of significant decimal digits for the sensitive kernels.
// Up to 16 digits run on native double; 17..50 run on ExtendedReal.
struct Precision {
  static constexpr int kDoubleDigits = 16;
  static constexpr int kMinDigits = 10;
  static constexpr int kMaxDigits = 50;

  int digits = kDoubleDigits;

  bool extended() const noexcept { return digits > kDoubleDigits; }

  void validate() const {
    if (digits < kMinDigits || digits > kMaxDigits) {
      throw Error(ErrorCode::kInvalidArgument,
                  "precision digits must lie in [10, 50]");
    }
  }

  static Precision standard() { return {}; }
  static Precision twenty_digits() { return {20}; }
};

}  // namespace latfit
