#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace swiptsim {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using cplx = std::complex<double>;

// Error taxonomy shared across the library. `code` is a stable machine-readable
// tag (the CLI forwards it verbatim); `detail` is free-form.
class SimError : public std::runtime_error {
public:
  SimError(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// Complex-baseband waveform. `avg_power_w` is the design average power carried
// alongside the samples so downstream stages can scale without re-measuring.
struct Waveform {
  ArrayXcd samples;
  double sample_rate_hz = 0.0;
  double avg_power_w = 0.0;
};

// Real-valued trace on a uniform time grid (rectifier output, ADC stream, ...).
struct RealTrace {
  ArrayXd samples;
  double sample_rate_hz = 0.0;
};

// Deterministic seeding: every consumer derives an independent substream from
// (seed, stream_id) so results are reproducible regardless of evaluation order.
struct SimSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  SimSeed substream(std::uint64_t salt) const;
  std::uint64_t mixed() const;
};

std::uint64_t mix64(std::uint64_t x);

// mt19937_64 seeded from the mixed (seed, stream_id) pair.
std::mt19937_64 make_rng(const SimSeed& seed);

// Mean of |x|^2 over the waveform, compensated summation. Throws EmptySignal.
double mean_square(const ArrayXcd& samples);
double mean_square(const ArrayXd& samples);

// Peak-to-average power ratio of the envelope. Throws EmptySignal / ZeroPower.
double papr(const ArrayXcd& samples);

Waveform make_waveform(ArrayXcd samples, double sample_rate_hz);

}  // namespace swiptsim
