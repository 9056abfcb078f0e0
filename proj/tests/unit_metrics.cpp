#include "swiptsim/metrics.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace swiptsim;
using testutil::thrown_code;

TEST_CASE("throughput follows BW/(M+1)*log2(M)") {
  CHECK(throughput(4, 5e6) == doctest::Approx(2e6).epsilon(1e-12));
  CHECK(throughput(2, 5e6) == doctest::Approx(5e6 / 3.0).epsilon(1e-12));
  CHECK(throughput(8, 5e6) == doctest::Approx(5e6 / 3.0).epsilon(1e-12));
  CHECK(thrown_code([] { throughput(3, 5e6); }) == "InvalidConfig");
  CHECK(thrown_code([] { throughput(4, 0.0); }) == "InvalidConfig");
}

TEST_CASE("spectral efficiency peaks at M=4") {
  // (M+1)^-1 * log2(M): 1/3, 2/5, 3/9, 4/17 -> maximum at M=4 (0.4 b/s/Hz).
  CHECK(throughput(4, 1.0) == doctest::Approx(0.4).epsilon(1e-12));
  for (int m : {2, 8, 16}) {
    CHECK(throughput(m, 1.0) < throughput(4, 1.0));
  }
}

TEST_CASE("wilson interval matches the hand-computed 5/1000 case") {
  const BerEstimate est = ber_from_counts(5, 1000);
  CHECK(est.ber == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(est.ci_lo == doctest::Approx(0.0021375355273245).epsilon(1e-9));
  CHECK(est.ci_hi == doctest::Approx(0.0116509553733751).epsilon(1e-9));
  CHECK(est.n_bits == 1000);
  CHECK(est.n_errors == 5);
}

TEST_CASE("wilson interval behaves at the extremes") {
  const BerEstimate zero = ber_from_counts(0, 1000);
  CHECK(zero.ber == 0.0);
  CHECK(zero.ci_lo >= 0.0);
  CHECK(zero.ci_lo < 1e-12);
  CHECK(zero.ci_hi == doctest::Approx(0.0038267584855551).epsilon(1e-9));

  const BerEstimate ones = ber_from_counts(1000, 1000);
  CHECK(ones.ber == 1.0);
  CHECK(ones.ci_hi == 1.0);
  CHECK(ones.ci_lo == doctest::Approx(0.9961732415144450).epsilon(1e-9));

  CHECK(thrown_code([] { ber_from_counts(5, 0); }) == "InvalidConfig");
  CHECK(thrown_code([] { ber_from_counts(-1, 100); }) == "InvalidConfig");
  CHECK(thrown_code([] { ber_from_counts(101, 100); }) == "InvalidConfig");
}

TEST_CASE("bit stream comparison counts errors") {
  BitSeq tx(6), rx(6);
  tx << 0, 1, 1, 0, 0, 1;
  rx << 0, 1, 0, 0, 1, 1;
  const BerEstimate est = ber(tx, rx);
  CHECK(est.n_errors == 2);
  CHECK(est.ber == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(est.ci_lo <= est.ber);
  CHECK(est.ber <= est.ci_hi);

  const BerEstimate same = ber(tx, tx);
  CHECK(same.ber == 0.0);

  const BitSeq flipped = 1 - tx;
  CHECK(ber(tx, flipped).ber == doctest::Approx(1.0).epsilon(1e-12));

  BitSeq shorter(4);
  shorter << 0, 1, 1, 0;
  CHECK(thrown_code([&] { ber(tx, shorter); }) == "LengthMismatch");
}

TEST_CASE("gain over the cw reference is a percentage") {
  CHECK(gain_over_cw(2e-6, 1e-6) == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(gain_over_cw(1e-6, 1e-6) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(thrown_code([] { gain_over_cw(1e-6, 0.0); }) == "ZeroPower");
}

TEST_CASE("empirical cdf sorts, steps, and collapses duplicates") {
  const auto cdf = empirical_cdf({3.0, 1.0, 2.0});
  REQUIRE(cdf.size() == 3);
  CHECK(cdf[0].first == 1.0);
  CHECK(cdf[0].second == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(cdf[1].first == 2.0);
  CHECK(cdf[1].second == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(cdf[2].first == 3.0);
  CHECK(cdf[2].second == doctest::Approx(1.0).epsilon(1e-12));

  const auto dup = empirical_cdf({1.0, 1.0, 2.0});
  REQUIRE(dup.size() == 2);
  CHECK(dup[0].first == 1.0);
  CHECK(dup[0].second == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(dup[1].second == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(thrown_code([] { empirical_cdf({}); }) == "EmptySignal");
}

TEST_CASE("empirical cdf is monotone and ends at one") {
  std::vector<double> values;
  for (int i = 0; i < 100; ++i) values.push_back((i * 37) % 50);
  const auto cdf = empirical_cdf(values);
  for (std::size_t i = 1; i < cdf.size(); ++i) {
    CHECK(cdf[i].first > cdf[i - 1].first);
    CHECK(cdf[i].second > cdf[i - 1].second);
  }
  CHECK(cdf.back().second == doctest::Approx(1.0).epsilon(1e-12));
}
