#include "swiptsim/receiver.hpp"

#include <cmath>

namespace swiptsim {

void DemodConfig::validate() const {
  if (adc_rate_hz <= 0.0) {
    throw SimError("InvalidConfig", "adc_rate_hz must be positive");
  }
  if (adc_bits < 0 || adc_bits > 32) {
    throw SimError("InvalidConfig", "adc_bits must be in 0..32 (0 = ideal)");
  }
  if (adc_bits > 0 && adc_full_scale_v <= 0.0) {
    throw SimError("InvalidConfig", "adc_full_scale_v must be positive");
  }
  if (window_samples < 2) {
    throw SimError("InvalidConfig", "window_samples must be >= 2");
  }
  if (samples_per_symbol < window_samples) {
    throw SimError("InvalidConfig", "samples_per_symbol must cover all chips");
  }
  if (symbol_offset < 0) {
    throw SimError("InvalidConfig", "symbol_offset must be nonnegative");
  }
}

DemodConfig make_demod_config(double adc_rate_hz, double chip_period_s,
                              int m_order, int adc_bits,
                              double adc_full_scale_v, int symbol_offset) {
  if (adc_rate_hz <= 0.0 || chip_period_s <= 0.0) {
    throw SimError("InvalidConfig", "adc rate and chip period must be positive");
  }
  PpmConfig probe;
  probe.m_order = m_order;
  probe.validate();

  const double exact = chip_period_s * adc_rate_hz;
  const int window = static_cast<int>(std::llround(exact));
  if (window < 2) {
    throw SimError("InvalidConfig",
                   "ADC rate yields " + std::to_string(window) +
                       " samples per chip; need at least 2");
  }
  if (std::abs(exact - window) > 0.01 * window) {
    throw SimError("WindowMismatch",
                   "chip period * adc rate = " + std::to_string(exact) +
                       " is not within 1% of an integer sample count");
  }

  DemodConfig cfg;
  cfg.adc_rate_hz = adc_rate_hz;
  cfg.adc_bits = adc_bits;
  cfg.adc_full_scale_v = adc_full_scale_v;
  cfg.window_samples = window;
  cfg.samples_per_symbol = (m_order + 1) * window;
  cfg.symbol_offset = symbol_offset;
  cfg.validate();
  return cfg;
}

RealTrace adc_sample(const RealTrace& y, const DemodConfig& cfg) {
  cfg.validate();
  if (y.samples.size() == 0) {
    throw SimError("EmptySignal", "adc_sample of empty trace");
  }
  if (cfg.adc_rate_hz > y.sample_rate_hz * (1.0 + 1e-12)) {
    throw SimError("UndersampledSource",
                   "adc rate " + std::to_string(cfg.adc_rate_hz) +
                       " Hz exceeds source rate " +
                       std::to_string(y.sample_rate_hz) + " Hz");
  }

  RealTrace out;
  out.sample_rate_hz = cfg.adc_rate_hz;

  const double ratio = y.sample_rate_hz / cfg.adc_rate_hz;
  if (std::abs(ratio - 1.0) < 1e-12) {
    out.samples = y.samples;
  } else {
    const Eigen::Index n_in = y.samples.size();
    const Eigen::Index n_out =
        static_cast<Eigen::Index>(std::floor((n_in - 1) / ratio)) + 1;
    out.samples.resize(n_out);
    for (Eigen::Index n = 0; n < n_out; ++n) {
      const auto src = static_cast<Eigen::Index>(std::llround(n * ratio));
      out.samples[n] = y.samples[std::min(src, n_in - 1)];
    }
  }

  if (cfg.adc_bits > 0) {
    const double levels = std::pow(2.0, cfg.adc_bits) - 1.0;
    const double fs = cfg.adc_full_scale_v;
    out.samples = (out.samples.cwiseMax(0.0).cwiseMin(fs) / fs * levels)
                      .round() * (fs / levels);
  }
  return out;
}

MovingAverage::MovingAverage(int window) : window_(window) {
  if (window < 1) {
    throw SimError("InvalidConfig", "moving-average window must be >= 1");
  }
  ring_ = ArrayXd::Zero(window);
}

ArrayXd MovingAverage::process(const ArrayXd& chunk) {
  ArrayXd out(chunk.size());
  for (Eigen::Index i = 0; i < chunk.size(); ++i) {
    const double x = chunk[i];
    if (seen_ < window_) {
      ring_[head_] = x;
      sum_ += x;
      ++seen_;
      out[i] = sum_ / static_cast<double>(seen_);
    } else {
      sum_ += x - ring_[head_];
      ring_[head_] = x;
      out[i] = sum_ / static_cast<double>(window_);
    }
    head_ = (head_ + 1) % window_;
    // Running add/subtract drifts over long traces; re-sum periodically.
    if (++since_resync_ >= (1u << 16)) {
      sum_ = ring_.head(std::min<Eigen::Index>(seen_, window_)).sum();
      since_resync_ = 0;
    }
  }
  return out;
}

RealTrace moving_average(const RealTrace& y_n, int window) {
  if (y_n.samples.size() == 0) {
    throw SimError("EmptySignal", "moving_average of empty trace");
  }
  if (window < 1) {
    throw SimError("InvalidConfig", "moving-average window must be >= 1");
  }
  if (y_n.samples.size() < window) {
    throw SimError("LengthMismatch", "trace shorter than the averaging window");
  }
  MovingAverage filt(window);
  RealTrace out;
  out.sample_rate_hz = y_n.sample_rate_hz;
  out.samples = filt.process(y_n.samples);
  return out;
}

int decode_symbol(const ArrayXd& segment, const DemodConfig& cfg, int m_order) {
  const int expected = (m_order + 1) * cfg.window_samples;
  if (segment.size() != expected) {
    throw SimError("LengthMismatch",
                   "symbol segment has " + std::to_string(segment.size()) +
                       " samples, expected " + std::to_string(expected));
  }
  Eigen::Index best = 0;
  double best_v = segment[0];
  for (Eigen::Index i = 1; i < segment.size(); ++i) {
    if (segment[i] > best_v) {
      best_v = segment[i];
      best = i;
    }
  }
  const int chip = static_cast<int>(best / cfg.window_samples);
  return std::clamp(chip, 1, m_order);
}

DemodResult demodulate(const RealTrace& y, const DemodConfig& cfg, int m_order) {
  cfg.validate();
  const RealTrace sampled = adc_sample(y, cfg);
  const RealTrace filtered = moving_average(sampled, cfg.window_samples);

  const Eigen::Index n = filtered.samples.size();
  if (cfg.symbol_offset >= n) {
    throw SimError("PartialSymbol", "symbol_offset beyond end of trace");
  }
  const Eigen::Index usable = n - cfg.symbol_offset;
  if (usable % cfg.samples_per_symbol != 0) {
    throw SimError("PartialSymbol",
                   std::to_string(usable) + " samples after offset is not a "
                       "whole number of " + std::to_string(cfg.samples_per_symbol) +
                       "-sample symbols");
  }

  DemodResult res;
  res.messages.resize(usable / cfg.samples_per_symbol);
  for (Eigen::Index s = 0; s < res.messages.size(); ++s) {
    const auto seg = filtered.samples.segment(
        cfg.symbol_offset + s * cfg.samples_per_symbol, cfg.samples_per_symbol);
    res.messages[s] = decode_symbol(seg, cfg, m_order);
  }
  res.bits = messages_to_bits(res.messages, m_order);
  return res;
}

}  // namespace swiptsim
