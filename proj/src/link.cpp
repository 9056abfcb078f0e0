#include "swiptsim/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swiptsim {

namespace {

// Compensated accumulator for long-trace means.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Integer-ratio nearest-sample decimator plus optional quantizer, matching
// adc_sample on integer synth/ADC rate ratios.
class StreamSampler {
public:
  StreamSampler(long ratio, int bits, double full_scale)
      : ratio_(ratio), bits_(bits), full_scale_(full_scale) {
    if (bits_ > 0) {
      levels_ = std::pow(2.0, bits_) - 1.0;
    }
  }

  ArrayXd process(const ArrayXd& chunk) {
    ArrayXd out((chunk.size() - phase_ + ratio_ - 1) / ratio_);
    Eigen::Index n = 0;
    for (Eigen::Index i = phase_; i < chunk.size(); i += ratio_) {
      double v = chunk[i];
      if (bits_ > 0) {
        v = std::clamp(v, 0.0, full_scale_);
        v = std::round(v / full_scale_ * levels_) * (full_scale_ / levels_);
      }
      out[n++] = v;
    }
    phase_ = (phase_ + ratio_ - chunk.size() % ratio_) % ratio_;
    return out;
  }

private:
  long ratio_;
  int bits_;
  double full_scale_;
  double levels_ = 0.0;
  Eigen::Index phase_ = 0;
};

// Per-symbol argmax decoder fed whole symbols at a time.
class DecodeStream {
public:
  DecodeStream(const DemodConfig& cfg, int m_order, long n_settle, long n_payload)
      : cfg_(cfg), m_order_(m_order), n_settle_(n_settle) {
    decoded_.resize(n_payload);
  }

  void feed(const ArrayXd& ma_chunk) {
    const int sps = cfg_.samples_per_symbol;
    if (ma_chunk.size() % sps != 0) {
      throw SimError("PartialSymbol", "decode chunk is not whole symbols");
    }
    for (Eigen::Index s = 0; s < ma_chunk.size() / sps; ++s, ++sym_index_) {
      if (sym_index_ < n_settle_) continue;
      decoded_[sym_index_ - n_settle_] =
          decode_symbol(ma_chunk.segment(s * sps, sps), cfg_, m_order_);
    }
  }

  const MessageSeq& messages() const { return decoded_; }

private:
  DemodConfig cfg_;
  int m_order_;
  long n_settle_;
  long sym_index_ = 0;
  MessageSeq decoded_;
};

struct DecodePipeline {
  StreamSampler sampler;
  MovingAverage filter;
  DecodeStream decoder;

  DecodePipeline(long ratio, const DemodConfig& cfg, int m_order,
                 long n_settle, long n_payload)
      : sampler(ratio, cfg.adc_bits, cfg.adc_full_scale_v),
        filter(cfg.window_samples),
        decoder(cfg, m_order, n_settle, n_payload) {}

  void feed(const ArrayXd& y_chunk) {
    decoder.feed(filter.process(sampler.process(y_chunk)));
  }
};

}  // namespace

void LinkConfig::validate() const {
  ppm.validate();
  channel.validate();
  rect.validate();
  if (r_ant <= 0.0) {
    throw SimError("InvalidConfig", "r_ant must be positive");
  }
  if (!snr_db_list.empty() && !sigma_v_list.empty()) {
    throw SimError("InvalidConfig", "set at most one of snr_db_list / sigma_v_list");
  }
  for (double s : sigma_v_list) {
    if (s < 0.0) {
      throw SimError("InvalidConfig", "sigma_v must be nonnegative");
    }
  }
  if (chunk_symbols < 1) {
    throw SimError("InvalidConfig", "chunk_symbols must be >= 1");
  }
}

int settle_symbol_count(const PpmConfig& ppm, const RectifierParams& rect) {
  const double t_settle = 5.0 * rect.r_load * rect.c_out;
  // The 1e-9 guard keeps exact-integer ratios from picking up a whole extra
  // symbol through one ulp of rounding.
  const double ratio = t_settle / ppm.symbol_period_s();
  const auto n = static_cast<int>(std::ceil(ratio - 1e-9));
  return std::max(n, 3);
}

LinkResult run_link(const LinkConfig& cfg, const MessageSeq& messages,
                    const SimSeed& noise_seed) {
  cfg.validate();
  if (messages.size() == 0) {
    throw SimError("EmptySignal", "run_link with no messages");
  }
  for (Eigen::Index i = 0; i < messages.size(); ++i) {
    if (messages[i] < 1 || messages[i] > cfg.ppm.m_order) {
      throw SimError("InvalidConfig", "message outside 1..M at index " +
                                          std::to_string(i));
    }
  }

  const double synth_rate = cfg.ppm.sample_rate_hz();
  const double adc_rate = cfg.adc_rate_hz > 0.0 ? cfg.adc_rate_hz : synth_rate;
  if (adc_rate > synth_rate * (1.0 + 1e-12)) {
    throw SimError("UndersampledSource", "ADC rate exceeds synthesis rate");
  }
  const double ratio_f = synth_rate / adc_rate;
  const long ratio = std::lround(ratio_f);
  if (std::abs(ratio_f - static_cast<double>(ratio)) > 1e-9) {
    throw SimError("InvalidConfig",
                   "synthesis rate must be an integer multiple of the ADC rate; "
                   "adjust samples_per_chip");
  }
  if (cfg.ppm.samples_per_chip % ratio != 0) {
    throw SimError("InvalidConfig",
                   "samples_per_chip must be divisible by the ADC decimation ratio");
  }
  const DemodConfig demod = make_demod_config(
      adc_rate, cfg.ppm.chip_period_s(), cfg.ppm.m_order, cfg.adc_bits,
      cfg.adc_full_scale_v);

  // Resolved channel: complex gain applied sample by sample. A power override
  // rescales exactly as apply_channel does on any whole-symbol PPM waveform,
  // whose mean square is the design power by construction.
  cplx gain = cfg.channel.fading_coeff / std::sqrt(cfg.channel.path_loss_linear);
  if (cfg.channel.rx_power_dbm_override) {
    const double target = dbm_to_watts(*cfg.channel.rx_power_dbm_override);
    const double actual = cfg.ppm.avg_power_w * std::norm(gain);
    if (actual <= 0.0) {
      throw SimError("ZeroPower", "channel gain nulls the waveform");
    }
    gain *= std::sqrt(target / actual);
  }

  const int sps_synth = cfg.ppm.samples_per_symbol();
  const int spc = cfg.ppm.samples_per_chip;
  const long n_payload = messages.size();
  const int n_settle = settle_symbol_count(cfg.ppm, cfg.rect);
  const long n_total = n_settle + n_payload;
  const std::size_t total_samples =
      static_cast<std::size_t>(n_total) * static_cast<std::size_t>(sps_synth);

  // Envelope amplitude at the diode for an active chip.
  const double env_amp = std::abs(gain) *
                         std::sqrt((cfg.ppm.m_order + 1) * cfg.ppm.avg_power_w) *
                         cfg.rect.matching_gain * std::sqrt(2.0 * cfg.r_ant);

  const double dt_max = std::min(cfg.ppm.chip_period_s() / 32.0,
                                 cfg.rect.r_load * cfg.rect.c_out / 100.0);

  LinkResult res;
  res.n_settle_symbols = n_settle;
  res.n_payload_symbols = n_payload;

  // Received-waveform moments are exact: one active chip of M+1 at amplitude
  // |gain|*sqrt((M+1)*P).
  {
    const double a2 = std::norm(gain) * (cfg.ppm.m_order + 1) * cfg.ppm.avg_power_w;
    res.rx_mean_sq = a2 / (cfg.ppm.m_order + 1);
    res.rx_mean_fourth = a2 * a2 / (cfg.ppm.m_order + 1);
  }

  const bool cache = total_samples <= cfg.cache_limit_samples &&
                     (!cfg.snr_db_list.empty() || !cfg.sigma_v_list.empty());
  ArrayXd cached_vdc;
  if (cache) {
    cached_vdc.resize(static_cast<Eigen::Index>(total_samples));
  }
  res.trace_cached = cache;

  auto symbol_at = [&](long idx) {
    return idx < n_settle ? messages[0] : messages[idx - n_settle];
  };
  auto fill_env_chunk = [&](long first_sym, long count, ArrayXd& env) {
    env.setZero(count * sps_synth);
    for (long s = 0; s < count; ++s) {
      const int m = symbol_at(first_sym + s);
      env.segment(s * sps_synth + (m - 1) * spc, spc) = env_amp;
    }
  };

  // Pass A: noiseless rectification, trace statistics, noiseless decode.
  {
    EnvelopeRectifier rect(cfg.rect, synth_rate, dt_max);
    DecodePipeline decode(ratio, demod, cfg.ppm.m_order, n_settle, n_payload);
    NeumaierSum sum_v;
    NeumaierSum sum_v2;
    double v_min = std::numeric_limits<double>::infinity();
    double v_max = -std::numeric_limits<double>::infinity();

    ArrayXd env;
    for (long first = 0; first < n_total; first += cfg.chunk_symbols) {
      const long count = std::min<long>(cfg.chunk_symbols, n_total - first);
      fill_env_chunk(first, count, env);
      const ArrayXd vdc = rect.process(env);

      const long payload_start = std::max<long>(0, n_settle - first);
      for (Eigen::Index i = payload_start * sps_synth; i < vdc.size(); ++i) {
        const double v = vdc[i];
        sum_v.add(v);
        sum_v2.add(v * v);
        v_min = std::min(v_min, v);
        v_max = std::max(v_max, v);
      }
      if (cache) {
        cached_vdc.segment(first * static_cast<Eigen::Index>(sps_synth),
                           vdc.size()) = vdc;
      }
      decode.feed(vdc);
    }

    const double n_samp = static_cast<double>(n_payload) * sps_synth;
    res.vdc_mean = sum_v.value() / n_samp;
    res.vdc_mean_sq = sum_v2.value() / n_samp;
    res.vdc_min = v_min;
    res.vdc_max = v_max;
    res.p_del_behavioral_w = res.vdc_mean_sq / cfg.rect.r_load;
    const double var = std::max(0.0, res.vdc_mean_sq - res.vdc_mean * res.vdc_mean);
    if (res.vdc_mean > 0.0) {
      res.ripple_factor = std::sqrt(var) / res.vdc_mean;
    }
    res.ripple_peak_to_peak = v_max - v_min;

    const MessageSeq& rx = decode.decoder.messages();
    res.noiseless_symbol_errors = (rx != messages).count();
    res.noiseless_ber =
        ber(messages_to_bits(messages, cfg.ppm.m_order),
            messages_to_bits(rx, cfg.ppm.m_order));
  }

  // Noise points: same unit-variance noise realization for every point.
  struct Point {
    std::optional<double> snr_db;
    double sigma = 0.0;
  };
  std::vector<Point> points;
  for (double snr : cfg.snr_db_list) {
    Point p;
    p.snr_db = snr;
    p.sigma = std::isinf(snr)
                  ? 0.0
                  : std::sqrt(res.vdc_mean_sq / std::pow(10.0, snr / 10.0));
    points.push_back(p);
  }
  for (double sv : cfg.sigma_v_list) {
    points.push_back(Point{std::nullopt, sv});
  }

  for (const Point& pt : points) {
    DecodePipeline decode(ratio, demod, cfg.ppm.m_order, n_settle, n_payload);
    NoiseSource noise(pt.sigma, noise_seed);

    if (cache) {
      const Eigen::Index chunk_len =
          static_cast<Eigen::Index>(cfg.chunk_symbols) * sps_synth;
      for (Eigen::Index off = 0; off < cached_vdc.size(); off += chunk_len) {
        const Eigen::Index len = std::min(chunk_len, cached_vdc.size() - off);
        ArrayXd y = cached_vdc.segment(off, len);
        noise.add_to(y);
        decode.feed(y);
      }
    } else {
      EnvelopeRectifier rect(cfg.rect, synth_rate, dt_max);
      ArrayXd env;
      for (long first = 0; first < n_total; first += cfg.chunk_symbols) {
        const long count = std::min<long>(cfg.chunk_symbols, n_total - first);
        fill_env_chunk(first, count, env);
        ArrayXd y = rect.process(env);
        noise.add_to(y);
        decode.feed(y);
      }
    }

    const MessageSeq& rx = decode.decoder.messages();
    LinkNoisePoint out;
    out.snr_db = pt.snr_db;
    out.sigma_v = pt.sigma;
    out.n_symbol_errors = (rx != messages).count();
    out.ber = ber(messages_to_bits(messages, cfg.ppm.m_order),
                  messages_to_bits(rx, cfg.ppm.m_order));
    res.noise_points.push_back(out);
  }

  return res;
}

}  // namespace swiptsim
