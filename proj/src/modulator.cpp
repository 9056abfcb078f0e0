#include "swiptsim/modulator.hpp"

#include <cmath>

#include <bit>

namespace swiptsim {

int PpmConfig::bits_per_symbol() const {
  return std::countr_zero(static_cast<unsigned>(m_order));
}

void PpmConfig::validate() const {
  if (m_order < 2 || !std::has_single_bit(static_cast<unsigned>(m_order))) {
    throw SimError("InvalidConfig", "m_order must be a power of two >= 2, got " +
                                        std::to_string(m_order));
  }
  if (bandwidth_hz <= 0.0) {
    throw SimError("InvalidConfig", "bandwidth_hz must be positive");
  }
  if (avg_power_w <= 0.0) {
    throw SimError("InvalidConfig", "avg_power_w must be positive");
  }
  if (samples_per_chip < 1) {
    throw SimError("InvalidConfig", "samples_per_chip must be >= 1");
  }
}

int gray_encode(int value) { return value ^ (value >> 1); }

int gray_decode(int code) {
  int value = 0;
  for (; code != 0; code >>= 1) {
    value ^= code;
  }
  return value;
}

MessageSeq bits_to_messages(const BitSeq& bits, int m_order) {
  PpmConfig probe;
  probe.m_order = m_order;
  probe.validate();
  const int k = probe.bits_per_symbol();
  if (bits.size() % k != 0) {
    throw SimError("PartialSymbol", std::to_string(bits.size()) +
                                        " bits do not fill symbols of " +
                                        std::to_string(k) + " bits");
  }
  MessageSeq messages(bits.size() / k);
  for (Eigen::Index s = 0; s < messages.size(); ++s) {
    int code = 0;
    for (int b = 0; b < k; ++b) {
      const int bit = bits[s * k + b];
      if (bit != 0 && bit != 1) {
        throw SimError("InvalidConfig", "bit values must be 0 or 1");
      }
      code = (code << 1) | bit;
    }
    messages[s] = gray_decode(code) + 1;
  }
  return messages;
}

BitSeq messages_to_bits(const MessageSeq& messages, int m_order) {
  PpmConfig probe;
  probe.m_order = m_order;
  probe.validate();
  const int k = probe.bits_per_symbol();
  BitSeq bits(messages.size() * k);
  for (Eigen::Index s = 0; s < messages.size(); ++s) {
    const int m = messages[s];
    if (m < 1 || m > m_order) {
      throw SimError("InvalidConfig", "message " + std::to_string(m) +
                                          " outside 1.." + std::to_string(m_order));
    }
    const int code = gray_encode(m - 1);
    for (int b = 0; b < k; ++b) {
      bits[s * k + b] = (code >> (k - 1 - b)) & 1;
    }
  }
  return bits;
}

MessageSeq random_messages(int n_symbols, int m_order, const SimSeed& seed) {
  if (n_symbols <= 0) {
    throw SimError("InvalidConfig", "n_symbols must be positive");
  }
  auto rng = make_rng(seed);
  std::uniform_int_distribution<int> dist(1, m_order);
  MessageSeq messages(n_symbols);
  for (Eigen::Index s = 0; s < messages.size(); ++s) {
    messages[s] = dist(rng);
  }
  return messages;
}

Waveform modulate_ppm(const MessageSeq& messages, const PpmConfig& cfg) {
  cfg.validate();
  if (messages.size() == 0) {
    throw SimError("EmptySignal", "modulate_ppm with no messages");
  }
  const int L = cfg.samples_per_chip;
  const int sps = cfg.samples_per_symbol();
  const double amp = std::sqrt((cfg.m_order + 1) * cfg.avg_power_w);

  ArrayXcd samples = ArrayXcd::Zero(messages.size() * sps);
  for (Eigen::Index s = 0; s < messages.size(); ++s) {
    const int m = messages[s];
    if (m < 1 || m > cfg.m_order) {
      throw SimError("InvalidConfig", "message " + std::to_string(m) +
                                          " outside 1.." + std::to_string(cfg.m_order));
    }
    samples.segment(s * sps + (m - 1) * L, L) = cplx(amp, 0.0);
  }

  Waveform w;
  w.samples = std::move(samples);
  w.sample_rate_hz = cfg.sample_rate_hz();
  w.avg_power_w = cfg.avg_power_w;
  return w;
}

const char* to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::CW: return "cw";
    case SignalKind::BPSK: return "bpsk";
    case SignalKind::QAM16: return "qam16";
    case SignalKind::PPM: return "ppm";
  }
  return "unknown";
}

SignalKind signal_kind_from_string(const std::string& name) {
  if (name == "cw") return SignalKind::CW;
  if (name == "bpsk") return SignalKind::BPSK;
  if (name == "qam16") return SignalKind::QAM16;
  if (name == "ppm") return SignalKind::PPM;
  throw SimError("InvalidConfig", "unknown signal kind '" + name + "'");
}

Waveform modulate_baseline(SignalKind kind, int n_symbols, double avg_power_w,
                           double bandwidth_hz, const SimSeed& seed,
                           int samples_per_symbol) {
  if (n_symbols <= 0) {
    throw SimError("InvalidConfig", "n_symbols must be positive");
  }
  if (avg_power_w <= 0.0 || bandwidth_hz <= 0.0) {
    throw SimError("InvalidConfig", "avg_power_w and bandwidth_hz must be positive");
  }
  if (samples_per_symbol < 1) {
    throw SimError("InvalidConfig", "samples_per_symbol must be >= 1");
  }
  if (kind == SignalKind::PPM) {
    throw SimError("InvalidConfig", "use modulate_ppm for pulse-position signals");
  }

  const double root_p = std::sqrt(avg_power_w);
  auto rng = make_rng(seed);
  ArrayXcd samples(static_cast<Eigen::Index>(n_symbols) * samples_per_symbol);

  for (int s = 0; s < n_symbols; ++s) {
    cplx sym;
    switch (kind) {
      case SignalKind::CW:
        sym = cplx(root_p, 0.0);
        break;
      case SignalKind::BPSK: {
        std::uniform_int_distribution<int> coin(0, 1);
        sym = cplx(coin(rng) ? root_p : -root_p, 0.0);
        break;
      }
      case SignalKind::QAM16: {
        // Levels {-3,-1,1,3}/sqrt(10) per rail give unit average power.
        std::uniform_int_distribution<int> level(0, 3);
        const double scale = root_p / std::sqrt(10.0);
        sym = cplx((2 * level(rng) - 3) * scale, (2 * level(rng) - 3) * scale);
        break;
      }
      case SignalKind::PPM:
        sym = cplx(0.0, 0.0);  // unreachable, rejected above
        break;
    }
    samples.segment(static_cast<Eigen::Index>(s) * samples_per_symbol,
                    samples_per_symbol) = sym;
  }

  Waveform w;
  w.samples = std::move(samples);
  w.sample_rate_hz = bandwidth_hz * samples_per_symbol;
  w.avg_power_w = avg_power_w;
  return w;
}

}  // namespace swiptsim
