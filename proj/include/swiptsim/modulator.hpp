#pragma once

#include "swiptsim/signal.hpp"

namespace swiptsim {

using MessageSeq = Eigen::ArrayXi;  // symbol values in 1..M
using BitSeq = Eigen::ArrayXi;      // 0/1 entries

// Pulse-position modulation over M+1 chips per symbol: chips 0..M-1 carry the
// pulse for messages 1..M, the trailing chip is a guard that lets the
// harvester discharge between symbols. Chip duration is 1/bandwidth_hz.
struct PpmConfig {
  int m_order = 4;
  double bandwidth_hz = 5e6;
  double avg_power_w = 1.0;
  int samples_per_chip = 8;

  int chips_per_symbol() const { return m_order + 1; }
  int samples_per_symbol() const { return chips_per_symbol() * samples_per_chip; }
  double chip_period_s() const { return 1.0 / bandwidth_hz; }
  double symbol_period_s() const { return chips_per_symbol() * chip_period_s(); }
  double sample_rate_hz() const { return bandwidth_hz * samples_per_chip; }
  int bits_per_symbol() const;

  void validate() const;  // throws InvalidConfig
};

int gray_encode(int value);
int gray_decode(int code);

// k = log2(M) bits per message, MSB first; message = gray_decode(bits) + 1.
// bits.size() must be a multiple of k (PartialSymbol otherwise).
MessageSeq bits_to_messages(const BitSeq& bits, int m_order);
BitSeq messages_to_bits(const MessageSeq& messages, int m_order);

MessageSeq random_messages(int n_symbols, int m_order, const SimSeed& seed);

// Flash transmission: message s lights chip s-1 at envelope sqrt((M+1)*P),
// all other chips are silent, so the long-run mean square equals avg_power_w.
Waveform modulate_ppm(const MessageSeq& messages, const PpmConfig& cfg);

enum class SignalKind { CW, BPSK, QAM16, PPM };

const char* to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);

// Constant-envelope and QAM reference transmitters used for harvested-power
// comparisons. Symbol rate equals bandwidth_hz; QAM16/BPSK symbols are drawn
// uniformly from the unit-average-power constellation and scaled to
// avg_power_w. PPM is not valid here (use modulate_ppm).
Waveform modulate_baseline(SignalKind kind, int n_symbols, double avg_power_w,
                           double bandwidth_hz, const SimSeed& seed,
                           int samples_per_symbol = 8);

}  // namespace swiptsim
