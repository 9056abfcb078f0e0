#include "swiptsim/signal.hpp"

#include <cmath>

namespace swiptsim {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer: full-period bijection with good avalanche.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SimSeed SimSeed::substream(std::uint64_t salt) const {
  return SimSeed{seed, mix64(stream_id ^ mix64(salt))};
}

std::uint64_t SimSeed::mixed() const {
  return mix64(mix64(seed) ^ stream_id);
}

std::mt19937_64 make_rng(const SimSeed& seed) {
  return std::mt19937_64(seed.mixed());
}

namespace {

// Neumaier-compensated sum; keeps mean_square exact enough for tight
// equality checks on long traces.
template <typename Fn>
double compensated_mean(Eigen::Index n, Fn term) {
  double sum = 0.0;
  double comp = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = term(i);
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return (sum + comp) / static_cast<double>(n);
}

}  // namespace

double mean_square(const ArrayXcd& samples) {
  if (samples.size() == 0) {
    throw SimError("EmptySignal", "mean_square of empty waveform");
  }
  return compensated_mean(samples.size(),
                          [&](Eigen::Index i) { return std::norm(samples[i]); });
}

double mean_square(const ArrayXd& samples) {
  if (samples.size() == 0) {
    throw SimError("EmptySignal", "mean_square of empty trace");
  }
  return compensated_mean(samples.size(),
                          [&](Eigen::Index i) { return samples[i] * samples[i]; });
}

double papr(const ArrayXcd& samples) {
  const double avg = mean_square(samples);
  if (avg <= 0.0) {
    throw SimError("ZeroPower", "papr of all-zero waveform");
  }
  return samples.abs2().maxCoeff() / avg;
}

Waveform make_waveform(ArrayXcd samples, double sample_rate_hz) {
  if (samples.size() == 0) {
    throw SimError("EmptySignal", "make_waveform with no samples");
  }
  if (sample_rate_hz <= 0.0) {
    throw SimError("InvalidConfig", "sample_rate_hz must be positive");
  }
  Waveform w;
  w.avg_power_w = mean_square(samples);
  w.samples = std::move(samples);
  w.sample_rate_hz = sample_rate_hz;
  return w;
}

}  // namespace swiptsim
