#include "swiptsim/modulator.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <bit>

using namespace swiptsim;
using testutil::thrown_code;

TEST_CASE("gray code round-trips and matches the 3-bit table") {
  const int expected[8] = {0, 1, 3, 2, 6, 7, 5, 4};
  for (int v = 0; v < 8; ++v) CHECK(gray_encode(v) == expected[v]);
  for (int v = 0; v < 256; ++v) CHECK(gray_decode(gray_encode(v)) == v);
}

TEST_CASE("adjacent gray codes differ in exactly one bit") {
  for (int v = 0; v + 1 < 64; ++v) {
    const unsigned diff = gray_encode(v) ^ gray_encode(v + 1);
    CHECK(std::popcount(diff) == 1);
  }
}

TEST_CASE("bit/message mapping for M=4 follows the gray order") {
  BitSeq bits(8);
  bits << 0, 0, 0, 1, 1, 1, 1, 0;  // codes 0,1,3,2 MSB first
  const MessageSeq msgs = bits_to_messages(bits, 4);
  REQUIRE(msgs.size() == 4);
  CHECK(msgs[0] == 1);
  CHECK(msgs[1] == 2);
  CHECK(msgs[2] == 3);
  CHECK(msgs[3] == 4);

  const BitSeq back = messages_to_bits(msgs, 4);
  REQUIRE(back.size() == bits.size());
  CHECK((back == bits).all());
}

TEST_CASE("bit/message mapping round-trips for every message") {
  for (int m : {2, 4, 8, 16}) {
    MessageSeq msgs(m);
    for (int s = 1; s <= m; ++s) msgs[s - 1] = s;
    const MessageSeq round = bits_to_messages(messages_to_bits(msgs, m), m);
    CHECK((round == msgs).all());
  }
}

TEST_CASE("partial symbols in the bit stream are rejected") {
  BitSeq bits(3);
  bits << 0, 1, 0;
  CHECK(thrown_code([&] { bits_to_messages(bits, 4); }) == "PartialSymbol");
}

TEST_CASE("random messages stay in range and reproduce per seed") {
  const SimSeed seed{11, 0};
  const MessageSeq a = random_messages(500, 8, seed);
  const MessageSeq b = random_messages(500, 8, seed);
  REQUIRE(a.size() == 500);
  CHECK((a >= 1).all());
  CHECK((a <= 8).all());
  CHECK((a == b).all());
  CHECK(a.maxCoeff() == 8);  // 500 draws over 8 values hit the top
  CHECK(a.minCoeff() == 1);
}

TEST_CASE("ppm config derives chip and symbol geometry") {
  PpmConfig cfg;
  cfg.m_order = 4;
  cfg.bandwidth_hz = 5e6;
  cfg.samples_per_chip = 8;
  CHECK(cfg.chips_per_symbol() == 5);
  CHECK(cfg.samples_per_symbol() == 40);
  CHECK(cfg.chip_period_s() == doctest::Approx(2e-7).epsilon(1e-14));
  CHECK(cfg.symbol_period_s() == doctest::Approx(1e-6).epsilon(1e-14));
  CHECK(cfg.sample_rate_hz() == doctest::Approx(4e7).epsilon(1e-14));
  CHECK(cfg.bits_per_symbol() == 2);
}

TEST_CASE("ppm config rejects non-power-of-two orders") {
  PpmConfig cfg;
  for (int bad : {0, 1, 3, 5, 6, 7, 9}) {
    cfg.m_order = bad;
    CHECK(thrown_code([&] { cfg.validate(); }) == "InvalidConfig");
  }
}

TEST_CASE("single ppm symbol puts one hot chip at the message slot") {
  PpmConfig cfg;
  cfg.m_order = 4;
  cfg.avg_power_w = 1.0;
  cfg.samples_per_chip = 4;
  MessageSeq msg(1);
  msg << 2;
  const Waveform w = modulate_ppm(msg, cfg);
  REQUIRE(w.samples.size() == 20);

  const double amp = std::sqrt(5.0);
  for (Eigen::Index i = 0; i < 20; ++i) {
    if (i >= 4 && i < 8) {
      CHECK(w.samples[i].real() == doctest::Approx(amp).epsilon(1e-14));
      CHECK(w.samples[i].imag() == 0.0);
    } else {
      CHECK(std::abs(w.samples[i]) == 0.0);
    }
  }
  CHECK(mean_square(w.samples) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(papr(w.samples) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("ppm mean square equals the configured power for any payload") {
  PpmConfig cfg;
  cfg.m_order = 8;
  cfg.avg_power_w = 2.5e-3;
  cfg.samples_per_chip = 3;
  const MessageSeq msgs = random_messages(200, 8, SimSeed{5, 0});
  const Waveform w = modulate_ppm(msgs, cfg);
  CHECK(w.samples.size() == 200 * 9 * 3);
  CHECK(mean_square(w.samples) == doctest::Approx(2.5e-3).epsilon(1e-12));
  CHECK(papr(w.samples) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(w.sample_rate_hz == doctest::Approx(cfg.sample_rate_hz()).epsilon(1e-14));
}

TEST_CASE("ppm rejects out-of-range messages") {
  PpmConfig cfg;
  cfg.m_order = 4;
  MessageSeq msg(1);
  msg << 5;
  CHECK(thrown_code([&] { modulate_ppm(msg, cfg); }) == "InvalidConfig");
  msg << 0;
  CHECK(thrown_code([&] { modulate_ppm(msg, cfg); }) == "InvalidConfig");
}

TEST_CASE("signal kind names round-trip") {
  for (SignalKind k : {SignalKind::CW, SignalKind::BPSK, SignalKind::QAM16,
                       SignalKind::PPM}) {
    CHECK(signal_kind_from_string(to_string(k)) == k);
  }
  CHECK(thrown_code([] { signal_kind_from_string("psk8"); }) == "InvalidConfig");
}

TEST_CASE("cw baseline is a constant envelope at the target power") {
  const Waveform w = modulate_baseline(SignalKind::CW, 10, 4e-3, 1e6, SimSeed{1, 0});
  CHECK(mean_square(w.samples) == doctest::Approx(4e-3).epsilon(1e-12));
  CHECK(papr(w.samples) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bpsk baseline keeps the cw envelope") {
  const Waveform w =
      modulate_baseline(SignalKind::BPSK, 400, 1e-3, 1e6, SimSeed{2, 0});
  CHECK(mean_square(w.samples) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(papr(w.samples) == doctest::Approx(1.0).epsilon(1e-12));
  bool saw_positive = false, saw_negative = false;
  for (Eigen::Index i = 0; i < w.samples.size(); ++i) {
    saw_positive |= w.samples[i].real() > 0.0;
    saw_negative |= w.samples[i].real() < 0.0;
  }
  CHECK(saw_positive);
  CHECK(saw_negative);
}

TEST_CASE("qam16 baseline reproduces the constellation fourth moment") {
  // Unit-power 16QAM: rails (2k-3)/sqrt(10), E{|m|^4} = 1.32 by enumeration.
  double m4 = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double re = (2.0 * a - 3.0) / std::sqrt(10.0);
      const double im = (2.0 * b - 3.0) / std::sqrt(10.0);
      const double p = re * re + im * im;
      m4 += p * p / 16.0;
    }
  }
  CHECK(m4 == doctest::Approx(1.32).epsilon(1e-12));

  const Waveform w =
      modulate_baseline(SignalKind::QAM16, 100000, 1.0, 1e6, SimSeed{3, 0}, 1);
  CHECK(mean_square(w.samples) == doctest::Approx(1.0).epsilon(0.02));
  const double emp_m4 = w.samples.abs2().square().mean();
  CHECK(emp_m4 == doctest::Approx(1.32).epsilon(0.03));
}

TEST_CASE("ppm is rejected by the baseline modulator") {
  CHECK(thrown_code([] {
          modulate_baseline(SignalKind::PPM, 10, 1.0, 1e6, SimSeed{4, 0});
        }) == "InvalidConfig");
}
