#include "swiptsim/rectifier.hpp"

#include <cmath>

namespace swiptsim {

void TaylorModelParams::validate() const {
  if (k2 <= 0.0 || k4 <= 0.0 || r_ant <= 0.0) {
    throw SimError("InvalidConfig", "Taylor model constants must be positive");
  }
}

double harvested_power_taylor(double mean_sq, double mean_fourth,
                              const TaylorModelParams& p) {
  p.validate();
  return p.k2 * p.r_ant * mean_sq + 1.5 * p.k4 * p.r_ant * p.r_ant * mean_fourth;
}

double harvested_power_taylor(const Waveform& rx, const TaylorModelParams& p) {
  if (rx.samples.size() == 0) {
    throw SimError("EmptySignal", "harvested_power_taylor of empty waveform");
  }
  const double ms2 = mean_square(rx.samples);
  ArrayXd sq = rx.samples.abs2();
  const double ms4 = mean_square(sq);  // mean of |x|^4
  return harvested_power_taylor(ms2, ms4, p);
}

double scaling_law_coefficient(SignalKind kind, int m_order) {
  switch (kind) {
    case SignalKind::CW:
    case SignalKind::BPSK:
      return 1.5;  // constant envelope: E{|m|^4} = 1
    case SignalKind::QAM16:
      return 1.98;  // E{|m|^4} = 1.32 over the unit-power constellation
    case SignalKind::PPM: {
      PpmConfig probe;
      probe.m_order = m_order;
      probe.validate();
      // One chip of M+1 at amplitude sqrt(M+1): E{|m|^4} = (M+1)^2/(M+1).
      return 1.5 * (m_order + 1);
    }
  }
  throw SimError("InvalidConfig", "unknown signal kind");
}

void RectifierParams::validate() const {
  if (i_s <= 0.0 || ideality_n <= 0.0 || v_t <= 0.0 || r_s <= 0.0 ||
      c_out <= 0.0 || r_load <= 0.0 || matching_gain <= 0.0 || v_max_clip <= 0.0) {
    throw SimError("InvalidConfig", "rectifier parameters must be strictly positive");
  }
}

RectifierParams rect1() {
  RectifierParams p;
  p.c_out = 1e-9;
  return p;
}

RectifierParams rect2() {
  RectifierParams p;
  p.c_out = 200e-12;
  return p;
}

const std::vector<std::string>& rect_preset_names() {
  static const std::vector<std::string> names = {"rect1", "rect2"};
  return names;
}

RectifierParams rect_preset(const std::string& name) {
  if (name == "rect1") return rect1();
  if (name == "rect2") return rect2();
  throw SimError("UnknownPreset",
                 "rectifier preset '" + name + "' (available: rect1, rect2)");
}

EnvelopeRectifier::EnvelopeRectifier(const RectifierParams& p,
                                     double sample_rate_hz, double dt_max_s)
    : p_(p) {
  p_.validate();
  if (sample_rate_hz <= 0.0) {
    throw SimError("InvalidConfig", "sample_rate_hz must be positive");
  }
  dt_ = 1.0 / sample_rate_hz;
  dt_cap_ = p_.r_load * p_.c_out / 100.0;
  if (dt_max_s > 0.0 && dt_max_s < dt_cap_) {
    dt_cap_ = dt_max_s;
  }
  inv_nvt_ = 1.0 / (p_.ideality_n * p_.v_t);
}

double EnvelopeRectifier::step(double env) {
  double remaining = dt_;
  int substeps = 0;
  while (remaining > 0.0) {
    double u = env - v_;
    if (u > p_.v_max_clip) u = p_.v_max_clip;
    const double ex = std::expm1(u * inv_nvt_);
    const double i_d = p_.i_s * ex;
    const double g_d = p_.i_s * (ex + 1.0) * inv_nvt_;
    double h = 0.25 * p_.c_out / (g_d + 1.0 / p_.r_load);
    if (h > dt_cap_) h = dt_cap_;
    if (h > remaining) h = remaining;
    v_ += h * (i_d - v_ / p_.r_load) / p_.c_out;
    remaining -= h;
    if (!std::isfinite(v_) || ++substeps > 200000) {
      throw SimError("IntegratorDiverged",
                     "at sample " + std::to_string(n_steps_) + ", v=" +
                         std::to_string(v_) + ", substeps=" + std::to_string(substeps));
    }
  }
  ++n_steps_;
  return v_;
}

ArrayXd EnvelopeRectifier::process(const ArrayXd& v_env) {
  ArrayXd out(v_env.size());
  for (Eigen::Index i = 0; i < v_env.size(); ++i) {
    out[i] = step(v_env[i]);
  }
  return out;
}

ArrayXd envelope_voltage(const Waveform& rx, const RectifierParams& p,
                         double r_ant) {
  if (rx.samples.size() == 0) {
    throw SimError("EmptySignal", "envelope_voltage of empty waveform");
  }
  return p.matching_gain * std::sqrt(2.0 * r_ant) * rx.samples.abs();
}

RealTrace rectify_envelope(const Waveform& rx, const RectifierParams& p,
                           double dt_max_s, double r_ant) {
  EnvelopeRectifier integ(p, rx.sample_rate_hz, dt_max_s);
  RealTrace out;
  out.sample_rate_hz = rx.sample_rate_hz;
  out.samples = integ.process(envelope_voltage(rx, p, r_ant));
  return out;
}

RippleStats fundamental_ripple(const RealTrace& v_dc, double transient_skip_s) {
  if (v_dc.samples.size() == 0) {
    throw SimError("EmptySignal", "fundamental_ripple of empty trace");
  }
  if (v_dc.sample_rate_hz <= 0.0) {
    throw SimError("InvalidConfig", "trace sample rate must be positive");
  }
  const Eigen::Index skip =
      static_cast<Eigen::Index>(std::llround(transient_skip_s * v_dc.sample_rate_hz));
  if (skip < 0 || skip >= v_dc.samples.size()) {
    throw SimError("InvalidConfig", "transient skip leaves no samples");
  }
  const auto tail = v_dc.samples.tail(v_dc.samples.size() - skip);

  const Eigen::Index n = tail.size();
  double mean = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mean += tail[i];
  }
  mean /= static_cast<double>(n);
  if (mean <= 0.0) {
    throw SimError("NoDcComponent",
                   "post-transient mean " + std::to_string(mean) + " V");
  }

  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = tail[i] - mean;
    acc += d * d;
  }
  RippleStats stats;
  stats.peak_to_peak = tail.maxCoeff() - tail.minCoeff();
  stats.ripple_factor = std::sqrt(acc / static_cast<double>(n)) / mean;
  return stats;
}

void RectNoiseParams::validate() const {
  if (snr_db.has_value() == sigma_v.has_value()) {
    throw SimError("InvalidConfig", "set exactly one of snr_db / sigma_v");
  }
  if (sigma_v && *sigma_v < 0.0) {
    throw SimError("InvalidConfig", "sigma_v must be nonnegative");
  }
}

NoiseSource::NoiseSource(double sigma, const SimSeed& seed)
    : sigma_(sigma), rng_(make_rng(seed)), dist_(0.0, 1.0) {
  if (sigma < 0.0) {
    throw SimError("InvalidConfig", "noise sigma must be nonnegative");
  }
}

void NoiseSource::add_to(ArrayXd& chunk) {
  if (sigma_ == 0.0) return;
  for (Eigen::Index i = 0; i < chunk.size(); ++i) {
    chunk[i] += sigma_ * dist_(rng_);
  }
}

RealTrace add_rect_noise(const RealTrace& v_dc, const RectNoiseParams& noise,
                         const SimSeed& seed) {
  noise.validate();
  if (v_dc.samples.size() == 0) {
    throw SimError("EmptySignal", "add_rect_noise of empty trace");
  }

  double sigma = 0.0;
  if (noise.sigma_v) {
    sigma = *noise.sigma_v;
  } else if (std::isinf(*noise.snr_db)) {
    sigma = 0.0;  // noise disabled
  } else {
    const double ms = mean_square(v_dc.samples);
    if (ms <= 0.0) {
      throw SimError("ZeroPower", "snr_db given but trace has zero mean square");
    }
    sigma = std::sqrt(ms / std::pow(10.0, *noise.snr_db / 10.0));
  }

  RealTrace out;
  out.sample_rate_hz = v_dc.sample_rate_hz;
  out.samples = v_dc.samples;
  NoiseSource source(sigma, seed);
  source.add_to(out.samples);
  return out;
}

}  // namespace swiptsim
