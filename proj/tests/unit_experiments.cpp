#include "swiptsim/experiments.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace swiptsim;
using testutil::thrown_code;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const std::string& body) {
  Csv csv;
  std::istringstream in(body);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.push_back("");
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comments.push_back(line);
    } else if (csv.columns.empty()) {
      csv.columns = split(line);
    } else {
      csv.rows.push_back(split(line));
    }
  }
  return csv;
}

int column_of(const Csv& csv, const std::string& name) {
  for (std::size_t i = 0; i < csv.columns.size(); ++i) {
    if (csv.columns[i] == name) return static_cast<int>(i);
  }
  REQUIRE_MESSAGE(false, "missing column " << name);
  return -1;
}

ExperimentConfig seeded() {
  ExperimentConfig cfg;
  cfg.seed = SimSeed{20260819, 0};
  cfg.has_seed = true;
  cfg.out_dir = "test_artifacts";
  return cfg;
}

}  // namespace

TEST_CASE("format_double is shortest-round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(2.5) == "2.5");
  CHECK(format_double(5e6) == "5e+06");
  CHECK(format_double(std::nan("")) == "nan");
  for (double v : {0.1 + 0.2, 1.0 / 3.0, 1e-5, 123456.789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("preset catalog covers every figure preset") {
  const auto& presets = list_presets();
  CHECK(presets.size() == 13);
  bool saw_fig7 = false;
  for (const PresetInfo& p : presets) {
    CHECK(!p.description.empty());
    CHECK(!p.subcommand.empty());
    if (p.name == "fig7") {
      saw_fig7 = true;
      CHECK(p.subcommand == "ber-sweep");
    }
  }
  CHECK(saw_fig7);
}

TEST_CASE("runs without a seed are refused") {
  ExperimentConfig cfg;
  cfg.preset = "fig7";
  CHECK(thrown_code([&] { run_ber_sweep(cfg); }) == "SeedRequired");
}

TEST_CASE("unknown presets report the available names") {
  ExperimentConfig cfg = seeded();
  cfg.preset = "fig99";
  CHECK(thrown_code([&] { run_ber_sweep(cfg); }) == "UnknownPreset");
  try {
    run_ber_sweep(cfg);
  } catch (const SimError& e) {
    const std::string what = e.what();
    CHECK(what.find("fig7") != std::string::npos);
    CHECK(what.find("fig8") != std::string::npos);
  }
}

TEST_CASE("preset and subcommand must agree") {
  ExperimentConfig cfg = seeded();
  cfg.preset = "fig11";  // a power-sweep preset
  CHECK(thrown_code([&] { run_ber_sweep(cfg); }) == "InvalidConfig");
}

TEST_CASE("ber estimates need at least 100 symbols") {
  ExperimentConfig cfg = seeded();
  cfg.preset = "fig7";
  cfg.n_symbols = 50;
  CHECK(thrown_code([&] { run_ber_sweep(cfg); }) == "InvalidConfig");
}

TEST_CASE("ber sweep output is byte-identical across worker counts") {
  ExperimentConfig cfg = seeded();
  cfg.m_orders = {2};
  cfg.bandwidths_hz = {5e6};
  cfg.rect_presets = {"rect2"};
  cfg.snr_db = {10.0, 20.0};
  cfg.rx_power_dbm = {-20.0};
  cfg.n_symbols = 100;

  cfg.out_dir = "test_artifacts/w1";
  cfg.workers = 1;
  const RunArtifacts a = run_ber_sweep(cfg);
  cfg.out_dir = "test_artifacts/w2";
  cfg.workers = 2;
  const RunArtifacts b = run_ber_sweep(cfg);

  const std::string body_a = slurp(a.csv_path);
  CHECK(body_a == slurp(b.csv_path));

  const Csv csv = parse_csv(body_a);
  CHECK(csv.rows.size() == 2);
  const int ber_col = column_of(csv, "ber");
  const int snr_col = column_of(csv, "snr_db");
  CHECK(csv.rows[0][snr_col] == "10");
  CHECK(csv.rows[1][snr_col] == "20");
  // Paired noise: more SNR never means more errors in one run.
  CHECK(std::stod(csv.rows[1][ber_col]) <= std::stod(csv.rows[0][ber_col]));

  bool has_snr_definition = false;
  for (const std::string& c : csv.comments) {
    has_snr_definition |= c.find("snr_definition") != std::string::npos;
  }
  CHECK(has_snr_definition);
}

TEST_CASE("power sweep reports the cw reference at 100 percent") {
  ExperimentConfig cfg = seeded();
  cfg.kinds = {"cw", "ppm"};
  cfg.m_orders = {2};
  cfg.bandwidths_hz = {5e6};
  cfg.rect_presets = {"rect2"};
  cfg.rx_power_dbm = {-20.0};
  cfg.n_symbols = 60;
  cfg.matching_gain = 2.0;
  cfg.out_dir = "test_artifacts/power";

  const RunArtifacts art = run_power_sweep(cfg);
  const Csv csv = parse_csv(slurp(art.csv_path));
  REQUIRE(csv.rows.size() == 2);
  const int kind_col = column_of(csv, "kind");
  const int gain_t = column_of(csv, "gain_taylor_pct");
  const int p_taylor = column_of(csv, "p_del_taylor_w");
  const int p_beh = column_of(csv, "p_del_behavioral_w");

  REQUIRE(csv.rows[0][kind_col] == "cw");
  CHECK(csv.rows[0][gain_t] == "100");
  REQUIRE(csv.rows[1][kind_col] == "ppm2");
  // 2-PPM quadruples the fourth-order term: taylor gain strictly above 100.
  CHECK(std::stod(csv.rows[1][gain_t]) > 100.0);
  CHECK(std::stod(csv.rows[1][p_taylor]) > std::stod(csv.rows[0][p_taylor]));
  CHECK(std::stod(csv.rows[0][p_beh]) > 0.0);
  CHECK(std::stod(csv.rows[1][p_beh]) > 0.0);
}

TEST_CASE("ripple run reports positive ripple on a pulsed input") {
  ExperimentConfig cfg = seeded();
  cfg.m_orders = {4};
  cfg.bandwidths_hz = {5e6};
  cfg.rect_presets = {"rect2"};
  cfg.rx_power_dbm = {-20.0};
  cfg.n_symbols = 100;
  cfg.out_dir = "test_artifacts/ripple";

  const Csv csv = parse_csv(slurp(run_ripple(cfg).csv_path));
  REQUIRE(csv.rows.size() == 1);
  CHECK(std::stod(csv.rows[0][column_of(csv, "ripple_factor")]) > 0.0);
  CHECK(std::stod(csv.rows[0][column_of(csv, "peak_to_peak_v")]) > 0.0);
  CHECK(std::stod(csv.rows[0][column_of(csv, "vdc_mean_v")]) > 0.0);
}

TEST_CASE("walkthrough dump decodes its first payload symbol as 2") {
  ExperimentConfig cfg = seeded();
  cfg.preset = "fig5";
  cfg.out_dir = "test_artifacts/fig5";
  const RunArtifacts art = run_waveform_dump(cfg);
  const std::string body = slurp(art.csv_path);
  CHECK(body.find("# decoded_messages = 2\n") != std::string::npos);

  const Csv csv = parse_csv(body);
  const int settle_col = column_of(csv, "is_settle");
  const int t_col = column_of(csv, "t_s");
  REQUIRE(!csv.rows.empty());
  CHECK(csv.rows.front()[settle_col] == "1");
  CHECK(csv.rows.back()[settle_col] == "0");
  CHECK(std::stod(csv.rows.front()[t_col]) < 0.0);
  CHECK(std::stod(csv.rows.back()[t_col]) > 0.0);
}

TEST_CASE("cdf run emits one step per draw ending at probability one") {
  ExperimentConfig cfg = seeded();
  cfg.preset = "fig18";
  cfg.n_fading_draws = 10;
  cfg.out_dir = "test_artifacts/cdf";
  const RunArtifacts art = run_cdf(cfg);
  const Csv csv = parse_csv(slurp(art.csv_path));
  const int kind_col = column_of(csv, "kind");
  const int prob_col = column_of(csv, "cum_prob");

  int cw_rows = 0;
  double cw_last = 0.0;
  for (const auto& row : csv.rows) {
    if (row[kind_col] == "cw") {
      ++cw_rows;
      cw_last = std::stod(row[prob_col]);
    }
  }
  CHECK(cw_rows == 10);
  CHECK(cw_last == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(art.extra_paths.size() == 1);
  CHECK(std::filesystem::exists(art.extra_paths[0]));
}

TEST_CASE("json config loads known keys and rejects unknown ones") {
  std::filesystem::create_directories("test_artifacts");
  {
    std::ofstream out("test_artifacts/good.json");
    out << R"({"preset":"fig7","seed":7,"stream_id":2,"n_symbols":500,)"
        << R"("m_orders":[2,4],"sigma_v":0.001,"plot":true})";
  }
  const ExperimentConfig cfg = load_config_json("test_artifacts/good.json");
  CHECK(cfg.preset == "fig7");
  CHECK(cfg.has_seed);
  CHECK(cfg.seed.seed == 7);
  CHECK(cfg.seed.stream_id == 2);
  CHECK(cfg.n_symbols == 500);
  REQUIRE(cfg.m_orders.size() == 2);
  CHECK(cfg.m_orders[1] == 4);
  CHECK(cfg.sigma_v == 0.001);
  CHECK(cfg.plot);

  {
    std::ofstream out("test_artifacts/unknown.json");
    out << R"({"preset":"fig7","bogus_key":1})";
  }
  CHECK(thrown_code([] { load_config_json("test_artifacts/unknown.json"); }) ==
        "InvalidConfig");

  {
    std::ofstream out("test_artifacts/badtype.json");
    out << R"({"n_symbols":"many"})";
  }
  CHECK(thrown_code([] { load_config_json("test_artifacts/badtype.json"); }) ==
        "InvalidConfig");

  CHECK(thrown_code([] { load_config_json("test_artifacts/missing.json"); }) ==
        "InvalidConfig");
}
