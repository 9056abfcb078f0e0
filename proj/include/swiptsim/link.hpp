#pragma once

#include "swiptsim/channel.hpp"
#include "swiptsim/metrics.hpp"
#include "swiptsim/modulator.hpp"
#include "swiptsim/receiver.hpp"
#include "swiptsim/rectifier.hpp"
#include "swiptsim/signal.hpp"

#include <vector>

namespace swiptsim {

// One end-to-end PPM run: modulate -> channel -> envelope rectifier -> noise
// -> ADC -> moving average -> decode, evaluated at several noise points that
// share one noiseless rectified trace.
struct LinkConfig {
  PpmConfig ppm;
  ChannelParams channel;
  RectifierParams rect;
  double r_ant = 50.0;

  double adc_rate_hz = 0.0;  // 0 = sample at the synthesis rate
  int adc_bits = 0;
  double adc_full_scale_v = 1.0;

  // Exactly one list may be nonempty; both empty = noiseless decode only.
  // snr_db points define sigma^2 = mean_square(settled v_dc)/10^(snr/10).
  std::vector<double> snr_db_list;
  std::vector<double> sigma_v_list;

  int chunk_symbols = 64;
  // Noise points reuse the cached noiseless trace when it fits; otherwise the
  // rectifier runs once per point.
  std::size_t cache_limit_samples = 30000000;

  void validate() const;
};

struct LinkNoisePoint {
  std::optional<double> snr_db;  // set when the point came from snr_db_list
  double sigma_v = 0.0;          // resolved noise level
  long n_symbol_errors = 0;
  BerEstimate ber;
};

struct LinkResult {
  int n_settle_symbols = 0;
  long n_payload_symbols = 0;

  // Noiseless rectified-trace statistics over the settled payload.
  double vdc_mean = 0.0;
  double vdc_mean_sq = 0.0;
  double vdc_min = 0.0;
  double vdc_max = 0.0;
  double ripple_factor = 0.0;
  double ripple_peak_to_peak = 0.0;
  double p_del_behavioral_w = 0.0;  // mean(v_dc^2)/r_load

  // Received-waveform moments after the channel (exact for PPM).
  double rx_mean_sq = 0.0;
  double rx_mean_fourth = 0.0;

  long noiseless_symbol_errors = 0;
  BerEstimate noiseless_ber;
  std::vector<LinkNoisePoint> noise_points;
  bool trace_cached = false;
};

// Settling prefix length: max(5*r_load*c_out, 3 symbols), in whole symbols.
int settle_symbol_count(const PpmConfig& ppm, const RectifierParams& rect);

// Runs the link for the given payload messages. The noise realization is
// drawn from noise_seed and is identical across all noise points (common
// random numbers), so BER curves from one call are paired.
LinkResult run_link(const LinkConfig& cfg, const MessageSeq& messages,
                    const SimSeed& noise_seed);

}  // namespace swiptsim
