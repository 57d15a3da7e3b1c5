#include <algorithm>
#include <cmath>
#include <limits>

#include "gs/error.hpp"
#include "gs/experiments.hpp"

namespace gs {

namespace {

constexpr int kRescaleBits = 500;
const double kRescaleAbove = std::ldexp(1.0, kRescaleBits);

double checked_b(const Sequence& b, std::int64_t n) {
  const double w = b(n);
  if (w == 0.0) throw Error(ErrorCode::ZeroWeight, "b(" + std::to_string(n) + ") = 0 disconnects the chain");
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw Error(ErrorCode::NonPositiveWeight, "b(" + std::to_string(n) + ") is not a positive number");
  }
  return w;
}

double checked_mu(const Sequence& mu, std::int64_t n) {
  const double m = mu(n);
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(ErrorCode::NonPositiveWeight, "mu(" + std::to_string(n) + ") is not a positive number");
  }
  return m;
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

const char* to_string(DeficiencyClass c) {
  switch (c) {
    case DeficiencyClass::Divergent: return "divergent";
    case DeficiencyClass::Convergent: return "convergent";
    case DeficiencyClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

double DeficiencyReport::value(std::size_t n) const { return std::ldexp(mantissa.at(n), exponent.at(n)); }

double DeficiencyReport::log_abs_value(std::size_t n) const {
  return std::log(std::abs(mantissa.at(n))) + exponent.at(n) * std::log(2.0);
}

DeficiencyReport deficiency_probe_birth_death(const Sequence& b_seq, const Sequence& mu_seq, const Potential& V,
                                              double alpha, std::size_t N) {
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "N must be at least 2");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");

  DeficiencyReport rep;
  rep.mantissa.resize(N + 1);
  rep.exponent.resize(N + 1);
  rep.log_partial_sums.resize(N + 1);
  const double ln2 = std::log(2.0);

  // prev and cur share the exponent e.
  double prev = 0.0;
  double cur = 1.0;
  int e = 0;
  double b_prev = 0.0;
  double log_p = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0;; ++n) {
    const auto idx = static_cast<std::int64_t>(n);
    const double mu = checked_mu(mu_seq, idx);
    rep.mantissa[n] = cur;
    rep.exponent[n] = e;
    if (cur != 0.0) log_p = log_add(log_p, std::log(mu) + 2.0 * (std::log(std::abs(cur)) + e * ln2));
    rep.log_partial_sums[n] = log_p;
    if (n == N) break;

    const double b = checked_b(b_seq, idx);
    const double next = cur + (b_prev * (cur - prev) + (V(idx) + alpha) * mu * cur) / b;
    prev = cur;
    cur = next;
    b_prev = b;
    if (!std::isfinite(cur)) throw Error(ErrorCode::InvalidArgument, "recursion overflowed between rescalings");
    if (std::abs(cur) > kRescaleAbove) {
      prev = std::ldexp(prev, -kRescaleBits);
      cur = std::ldexp(cur, -kRescaleBits);
      e += kRescaleBits;
    }
  }

  const double logN = std::log(static_cast<double>(N));
  rep.growth_ratio = rep.log_partial_sums[N] / logN;

  const auto& lp = rep.log_partial_sums;
  bool divergent = true;
  int doublings = 0;
  for (std::size_t m = N; m >= 2 && doublings < 3; m /= 2, ++doublings) {
    if (lp[m] - lp[m / 2] < std::log(1.5)) divergent = false;
  }
  const double tail = -std::expm1(lp[N / 2] - lp[N]);  // (P_N - P_{N/2}) / P_N
  if (divergent) {
    rep.classification = DeficiencyClass::Divergent;
  } else if (tail <= 1e-10) {
    rep.classification = DeficiencyClass::Convergent;
  } else {
    rep.classification = DeficiencyClass::Inconclusive;
  }
  return rep;
}

}  // namespace gs
