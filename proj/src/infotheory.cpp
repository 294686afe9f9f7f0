#include "mdiqsdc/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mdiqsdc {
namespace {

void check_rate(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::out_of_range(std::string(name) + " must lie in [0,1]");
}

double plogp(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

}  // namespace

ErrorVector ErrorVector::from(std::array<double, 4> probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative error probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("error vector does not sum to 1");
  return ErrorVector{probs};
}

void Gains::validate() const {
  if (!(q >= 0.0 && q <= 1.0)) throw std::out_of_range("gain Q must lie in [0,1]");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::out_of_range("gain gap eta must be nonnegative");
}

CapacityResult CapacityResult::of(double raw) { return CapacityResult{raw, std::max(raw, 0.0)}; }

double binary_entropy(double x) {
  check_rate(x, "binary entropy argument");
  return plogp(x) + plogp(1.0 - x);
}

double shannon_entropy(const ErrorVector& v) {
  double h = 0.0;
  for (double p : v.probs) h += plogp(p);
  return h;
}

double eve_info_mdi_ts(double eps_z, double eps_x) {
  return binary_entropy(eps_z) + binary_entropy(eps_x);
}

double eve_info_dl04_non_mdi(double eps_x, double eps_z) {
  check_rate(eps_x, "eps_x");
  check_rate(eps_z, "eps_z");
  return binary_entropy(std::min(eps_x + eps_z, 0.5));
}

CapacityResult capacity_mdi_ts(const ErrorVector& errors, double eps_z, double eps_x, Gains g) {
  g.validate();
  return CapacityResult::of(g.q * (2.0 - shannon_entropy(errors) - g.eta * eve_info_mdi_ts(eps_z, eps_x)));
}

CapacityResult capacity_mdi_dl04(double bit_error, double eps_u, Gains g) {
  g.validate();
  return CapacityResult::of(g.q * (1.0 - binary_entropy(bit_error) - g.eta * binary_entropy(eps_u)));
}

CapacityResult capacity_dl04_non_mdi(double bit_error, double eps_x, double eps_z, Gains g) {
  g.validate();
  return CapacityResult::of(g.q *
                            (1.0 - binary_entropy(bit_error) - g.eta * eve_info_dl04_non_mdi(eps_x, eps_z)));
}

CapacityResult capacity_two_step_non_mdi(const ErrorVector& errors, double eps_z, double eps_x, Gains g) {
  return capacity_mdi_ts(errors, eps_z, eps_x, g);
}

std::optional<double> find_zero_crossing(const std::function<double(double)>& f, double lo, double hi,
                                         double tol) {
  if (f(hi) > 0.0) return std::nullopt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mdiqsdc
