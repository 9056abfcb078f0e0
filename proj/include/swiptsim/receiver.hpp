#pragma once

#include "swiptsim/modulator.hpp"
#include "swiptsim/signal.hpp"

namespace swiptsim {

// Decoder-side sampling and filtering. adc_bits = 0 means an ideal
// (unquantized) converter; window_samples is the moving-average length
// L = round(T_c * f_s), one chip of samples.
struct DemodConfig {
  double adc_rate_hz = 2e9;
  int adc_bits = 0;
  double adc_full_scale_v = 1.0;
  int window_samples = 0;
  int samples_per_symbol = 0;
  int symbol_offset = 0;

  void validate() const;
};

// Derives window_samples and samples_per_symbol from the chip period, with
// the rounding guard |T_c*f_s - L| <= 0.01*L (WindowMismatch otherwise).
DemodConfig make_demod_config(double adc_rate_hz, double chip_period_s,
                              int m_order, int adc_bits = 0,
                              double adc_full_scale_v = 1.0,
                              int symbol_offset = 0);

// Nearest-sample decimation to adc_rate_hz plus optional uniform quantization
// to 2^adc_bits levels over [0, adc_full_scale_v].
RealTrace adc_sample(const RealTrace& y, const DemodConfig& cfg);

// Causal length-L mean, continuous across symbol boundaries. The first L-1
// outputs average the available prefix so symbol starts see no zero-fill dip.
class MovingAverage {
public:
  explicit MovingAverage(int window);

  ArrayXd process(const ArrayXd& chunk);

private:
  int window_;
  Eigen::Index seen_ = 0;
  Eigen::Index head_ = 0;
  std::uint64_t since_resync_ = 0;
  double sum_ = 0.0;
  ArrayXd ring_;
};

RealTrace moving_average(const RealTrace& y_n, int window);

// Peak-position decision with the boundary shift: the filter peak lags the
// transmitted pulse by one chip, so a peak in chip c (0-based, guard = M)
// decodes to message clamp(c, 1, M). Ties break toward the earliest sample.
int decode_symbol(const ArrayXd& segment, const DemodConfig& cfg, int m_order);

struct DemodResult {
  MessageSeq messages;
  BitSeq bits;
};

// Full decoder chain: adc_sample -> moving_average -> per-symbol
// decode_symbol -> grey demap.
DemodResult demodulate(const RealTrace& y, const DemodConfig& cfg, int m_order);

}  // namespace swiptsim
