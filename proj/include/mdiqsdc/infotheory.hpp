#pragma once

// Entropies and secrecy-capacity lower bounds for the measurement-device
// independent protocols and their non-MDI baselines. All results are in bits
// per transmitted pair (MDI-TS, two-step) or per photon (DL04 family).

#include <array>
#include <functional>
#include <optional>

namespace mdiqsdc {

/// Distribution of decoded-minus-encoded symbol differences over
/// {00, 01, 10, 11}; the first entry is the no-error probability.
struct ErrorVector {
  std::array<double, 4> probs{1.0, 0.0, 0.0, 0.0};

  // Throws std::invalid_argument unless nonnegative and summing to 1 within 1e-12.
  static ErrorVector from(std::array<double, 4> probs);
  bool operator==(const ErrorVector&) const = default;
};

/// Gain Q in [0,1] and gain gap eta >= 0.
struct Gains {
  double q = 1.0;
  double eta = 1.0;

  void validate() const;
};

struct CapacityResult {
  double raw = 0.0;
  double clamped = 0.0;

  static CapacityResult of(double raw);
  bool operator==(const CapacityResult&) const = default;
};

// Throws std::out_of_range outside [0,1].
double binary_entropy(double x);
double shannon_entropy(const ErrorVector& v);

// h(eps_z) + h(eps_x)
double eve_info_mdi_ts(double eps_z, double eps_x);
// h(min(eps_x + eps_z, 1/2))
double eve_info_dl04_non_mdi(double eps_x, double eps_z);

// Q {2 - H(E) - eta [h(eps_z) + h(eps_x)]}
CapacityResult capacity_mdi_ts(const ErrorVector& errors, double eps_z, double eps_x, Gains g = {});
// Q [1 - h(e) - eta h(eps_u)]
CapacityResult capacity_mdi_dl04(double bit_error, double eps_u, Gains g = {});
// Q [1 - h(e) - eta h(min(eps_x + eps_z, 1/2))]
CapacityResult capacity_dl04_non_mdi(double bit_error, double eps_x, double eps_z, Gains g = {});
// Same functional form as MDI-TS, fed with single-channel-use error rates.
CapacityResult capacity_two_step_non_mdi(const ErrorVector& errors, double eps_z, double eps_x, Gains g = {});

// Smallest point in [lo, hi] where f changes sign, found by bisection to
// within tol. Assumes f(lo) > 0; returns nullopt if f(hi) > 0.
std::optional<double> find_zero_crossing(const std::function<double(double)>& f, double lo, double hi,
                                         double tol = 1e-6);

}  // namespace mdiqsdc
