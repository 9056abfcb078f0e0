#pragma once

#include "swiptsim/link.hpp"
#include "swiptsim/metrics.hpp"

#include <string>
#include <vector>

namespace swiptsim {

inline constexpr const char* kVersion = "1.0.0";

// Resolved experiment description. Presets fill any field the user left at
// its sentinel; explicit values (from a config file or CLI flags) win.
struct ExperimentConfig {
  std::string preset;

  SimSeed seed;
  bool has_seed = false;

  int n_symbols = 0;        // 0 = preset default
  int workers = 1;
  std::string out_dir = ".";
  bool plot = false;

  // Grid axes; empty = preset default.
  std::vector<int> m_orders;
  std::vector<double> bandwidths_hz;
  std::vector<std::string> rect_presets;
  std::vector<double> snr_db;
  std::vector<double> rx_power_dbm;
  std::vector<std::string> kinds;  // power sweep: cw, bpsk, qam16, ppm

  double sigma_v = 0.0;        // fixed noise level for BER-vs-power presets
  double adc_rate_hz = 0.0;    // 0 = preset default
  double matching_gain = 0.0;  // 0 = preset default
  int n_fading_draws = 0;      // 0 = preset default (CDF runs)
};

struct RunArtifacts {
  std::string csv_path;
  std::vector<std::string> extra_paths;  // plots, secondary CSVs
};

// One row per (m_order, bandwidth, rectifier, operating point, noise level).
RunArtifacts run_ber_sweep(const ExperimentConfig& cfg);

// Harvested power per signal kind and operating point, Taylor and behavioral.
RunArtifacts run_power_sweep(const ExperimentConfig& cfg);

// Noiseless ripple statistics over the grid.
RunArtifacts run_ripple(const ExperimentConfig& cfg);

// Aligned (t, |x|, v_dc, y, filter output) traces for one operating point.
RunArtifacts run_waveform_dump(const ExperimentConfig& cfg);

// Harvested-power CDF under Rayleigh block fading, common draws per kind.
RunArtifacts run_cdf(const ExperimentConfig& cfg);

struct PresetInfo {
  std::string name;
  std::string subcommand;
  std::string description;
};

const std::vector<PresetInfo>& list_presets();

// Strict JSON config loader; unknown keys are rejected.
ExperimentConfig load_config_json(const std::string& path);

// Deterministic shortest round-trip formatting used in all CSV output.
std::string format_double(double v);

}  // namespace swiptsim
