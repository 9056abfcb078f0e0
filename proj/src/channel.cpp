#include "swiptsim/channel.hpp"

#include <cmath>

#include <numbers>

namespace swiptsim {

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watts_to_dbm(double watts) {
  if (watts <= 0.0) {
    throw SimError("ZeroPower", "watts_to_dbm of non-positive power");
  }
  return 10.0 * std::log10(watts / 1e-3);
}

double free_space_path_loss(double distance_m, double carrier_hz) {
  if (distance_m <= 0.0 || carrier_hz <= 0.0) {
    throw SimError("InvalidConfig", "distance and carrier frequency must be positive");
  }
  constexpr double c = 299792458.0;
  const double x = 4.0 * std::numbers::pi * distance_m * carrier_hz / c;
  return x * x;
}

void ChannelParams::validate() const {
  if (path_loss_linear < 1.0) {
    throw SimError("InvalidConfig", "path_loss_linear must be >= 1");
  }
}

Waveform apply_channel(const Waveform& tx, const ChannelParams& params) {
  params.validate();
  if (tx.samples.size() == 0) {
    throw SimError("EmptySignal", "apply_channel with empty waveform");
  }

  const cplx gain = params.fading_coeff / std::sqrt(params.path_loss_linear);
  Waveform rx;
  rx.sample_rate_hz = tx.sample_rate_hz;
  rx.samples = tx.samples * gain;

  double power = tx.avg_power_w * std::norm(gain);
  if (params.rx_power_dbm_override) {
    const double target = dbm_to_watts(*params.rx_power_dbm_override);
    const double actual = mean_square(rx.samples);
    if (actual <= 0.0) {
      throw SimError("ZeroPower", "cannot rescale an all-zero waveform to a power target");
    }
    rx.samples *= std::sqrt(target / actual);
    power = target;
  }
  rx.avg_power_w = power;
  return rx;
}

cplx sample_fading(const FadingModel& model, const SimSeed& seed) {
  switch (model.kind) {
    case FadingModel::Kind::Fixed:
      return model.fixed_value;
    case FadingModel::Kind::RayleighBlock: {
      auto rng = make_rng(seed);
      std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
      const double re = gauss(rng);
      const double im = gauss(rng);
      return cplx(re, im);
    }
  }
  throw SimError("InvalidConfig", "unknown fading model");
}

}  // namespace swiptsim
