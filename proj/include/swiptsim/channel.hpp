#pragma once

#include "swiptsim/signal.hpp"

#include <optional>

namespace swiptsim {

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Linear free-space power attenuation (4*pi*d*f/c)^2.
double free_space_path_loss(double distance_m, double carrier_hz);

// Frequency-flat block channel: rx = fading_coeff / sqrt(path_loss_linear) * tx.
// When rx_power_dbm_override is set the output is rescaled so its mean square
// equals the override, which pins the receiver operating point directly.
struct ChannelParams {
  double path_loss_linear = 1.0;
  cplx fading_coeff = cplx(1.0, 0.0);
  std::optional<double> rx_power_dbm_override;

  void validate() const;  // throws InvalidConfig
};

Waveform apply_channel(const Waveform& tx, const ChannelParams& params);

struct FadingModel {
  enum class Kind { Fixed, RayleighBlock } kind = Kind::Fixed;
  cplx fixed_value = cplx(1.0, 0.0);
};

// One block-fading draw. RayleighBlock gives h ~ CN(0,1), so E|h|^2 = 1.
cplx sample_fading(const FadingModel& model, const SimSeed& seed);

}  // namespace swiptsim
