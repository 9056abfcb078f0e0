#include "swiptsim/metrics.hpp"

#include <cmath>

#include <algorithm>
#include <bit>

namespace swiptsim {

double throughput(int m_order, double bandwidth_hz) {
  if (m_order < 2 || !std::has_single_bit(static_cast<unsigned>(m_order))) {
    throw SimError("InvalidConfig", "m_order must be a power of two >= 2");
  }
  if (bandwidth_hz <= 0.0) {
    throw SimError("InvalidConfig", "bandwidth_hz must be positive");
  }
  return bandwidth_hz / (m_order + 1) * std::log2(static_cast<double>(m_order));
}

BerEstimate ber_from_counts(long n_errors, long n_bits) {
  if (n_bits <= 0) {
    throw SimError("InvalidConfig", "BER needs at least one bit");
  }
  if (n_errors < 0 || n_errors > n_bits) {
    throw SimError("InvalidConfig", "error count outside 0..n_bits");
  }
  const double n = static_cast<double>(n_bits);
  const double p = static_cast<double>(n_errors) / n;
  constexpr double z = 1.959963984540054;  // two-sided 95%
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;

  BerEstimate est;
  est.ber = p;
  // center - half cancels to zero at the count boundaries; pin the exact
  // endpoints instead of leaving 1e-18 residue in reports.
  est.ci_lo = n_errors == 0 ? 0.0 : std::max(0.0, center - half);
  est.ci_hi = n_errors == n_bits ? 1.0 : std::min(1.0, center + half);
  est.n_bits = n_bits;
  est.n_errors = n_errors;
  return est;
}

BerEstimate ber(const BitSeq& tx_bits, const BitSeq& rx_bits) {
  if (tx_bits.size() != rx_bits.size()) {
    throw SimError("LengthMismatch",
                   "tx has " + std::to_string(tx_bits.size()) + " bits, rx has " +
                       std::to_string(rx_bits.size()));
  }
  if (tx_bits.size() == 0) {
    throw SimError("InvalidConfig", "BER needs at least one bit");
  }
  const long errors = (tx_bits != rx_bits).count();
  return ber_from_counts(errors, tx_bits.size());
}

double gain_over_cw(double p_del, double p_del_cw) {
  if (p_del_cw <= 0.0) {
    throw SimError("ZeroPower", "CW reference power must be positive");
  }
  return 100.0 * p_del / p_del_cw;
}

std::vector<std::pair<double, double>> empirical_cdf(const std::vector<double>& values) {
  if (values.empty()) {
    throw SimError("EmptySignal", "empirical_cdf of no samples");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::pair<double, double>> cdf;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double prob = static_cast<double>(i + 1) / n;
    if (!cdf.empty() && cdf.back().first == sorted[i]) {
      cdf.back().second = prob;
    } else {
      cdf.emplace_back(sorted[i], prob);
    }
  }
  return cdf;
}

}  // namespace swiptsim
