#pragma once

#include "swiptsim/modulator.hpp"
#include "swiptsim/signal.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace swiptsim {

// Raw PPM link rate BW/(M+1)*log2(M) in bit/s; the guard chip costs the +1.
double throughput(int m_order, double bandwidth_hz);

struct BerEstimate {
  double ber = 0.0;
  double ci_lo = 0.0;  // Wilson 95% interval
  double ci_hi = 0.0;
  long n_bits = 0;
  long n_errors = 0;
};

BerEstimate ber_from_counts(long n_errors, long n_bits);
BerEstimate ber(const BitSeq& tx_bits, const BitSeq& rx_bits);

// Harvested-power gain relative to the CW reference, in percent.
double gain_over_cw(double p_del, double p_del_cw);

// Right-continuous empirical CDF as sorted (value, P[X <= value]) pairs;
// duplicate values collapse into a single step.
std::vector<std::pair<double, double>> empirical_cdf(const std::vector<double>& values);

struct OperatingPoint {
  int m_order = 4;
  double bandwidth_hz = 5e6;
  std::string rect_preset = "rect1";
  std::optional<double> snr_db;
  std::optional<double> rx_power_dbm;
  int n_symbols = 1000;
  SimSeed seed;
};

struct SweepResult {
  OperatingPoint point;
  double ber = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double throughput_bps = 0.0;
  double effective_throughput_bps = 0.0;
  double p_del_w = 0.0;            // Taylor model
  double p_del_behavioral_w = 0.0; // mean(v_dc^2)/r_load
  double ripple_factor = 0.0;
};

}  // namespace swiptsim
