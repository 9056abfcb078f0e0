#include "swiptsim/experiments.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <iostream>

namespace {

using swiptsim::ExperimentConfig;
using swiptsim::RunArtifacts;

// Option handles so the callback can tell "flag given" from "default value"
// when overlaying CLI flags onto a config file.
struct SweepCli {
  std::string config_path;
  ExperimentConfig flags;

  CLI::Option* preset = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* stream = nullptr;
  CLI::Option* n_symbols = nullptr;
  CLI::Option* workers = nullptr;
  CLI::Option* out_dir = nullptr;
  CLI::Option* plot = nullptr;
  CLI::Option* m_orders = nullptr;
  CLI::Option* bandwidths = nullptr;
  CLI::Option* rects = nullptr;
  CLI::Option* snr_db = nullptr;
  CLI::Option* rx_power_dbm = nullptr;
  CLI::Option* kinds = nullptr;
  CLI::Option* sigma_v = nullptr;
  CLI::Option* adc_rate = nullptr;
  CLI::Option* matching_gain = nullptr;
  CLI::Option* n_draws = nullptr;
};

void add_common_options(CLI::App* sub, SweepCli& cli) {
  sub->add_option("--config", cli.config_path,
                  "JSON config file; flags given here override file values");
  cli.preset = sub->add_option("--preset", cli.flags.preset, "named experiment preset");
  cli.seed = sub->add_option("--seed", cli.flags.seed.seed,
                             "base RNG seed (required for every run)");
  cli.stream = sub->add_option("--stream", cli.flags.seed.stream_id, "RNG stream id");
  cli.n_symbols =
      sub->add_option("--n-symbols", cli.flags.n_symbols, "payload symbols per point");
  cli.workers = sub->add_option("--workers", cli.flags.workers,
                                "worker threads (results are worker-independent)");
  cli.out_dir = sub->add_option("-o,--out", cli.flags.out_dir,
                                "output directory (default $SWIPTSIM_OUT_DIR or .)");
  cli.plot = sub->add_flag("--plot", cli.flags.plot, "also write SVG line plots");
  cli.m_orders = sub->add_option("--m-orders", cli.flags.m_orders,
                                 "modulation orders, powers of two >= 2")
                     ->delimiter(',');
  cli.bandwidths = sub->add_option("--bandwidths-hz", cli.flags.bandwidths_hz,
                                   "signal bandwidths")
                       ->delimiter(',');
  cli.rects = sub->add_option("--rects", cli.flags.rect_presets,
                              "rectifier presets (rect1, rect2)")
                  ->delimiter(',');
  cli.snr_db = sub->add_option("--snr-db", cli.flags.snr_db, "SNR grid points")
                   ->delimiter(',');
  cli.rx_power_dbm = sub->add_option("--rx-power-dbm", cli.flags.rx_power_dbm,
                                     "received power grid points")
                         ->delimiter(',');
  cli.kinds = sub->add_option("--kinds", cli.flags.kinds,
                              "signal kinds: cw, bpsk, qam16, ppm")
                  ->delimiter(',');
  cli.sigma_v = sub->add_option("--sigma-v", cli.flags.sigma_v,
                                "fixed noise std-dev (volts) instead of an SNR grid");
  cli.adc_rate = sub->add_option("--adc-rate-hz", cli.flags.adc_rate_hz, "ADC sample rate");
  cli.matching_gain = sub->add_option("--matching-gain", cli.flags.matching_gain,
                                      "matching network voltage gain");
  cli.n_draws =
      sub->add_option("--n-draws", cli.flags.n_fading_draws, "fading draws (cdf runs)");
}

ExperimentConfig resolve(const SweepCli& cli) {
  ExperimentConfig cfg;
  if (!cli.config_path.empty()) {
    cfg = swiptsim::load_config_json(cli.config_path);
  }
  if (cli.preset->count()) cfg.preset = cli.flags.preset;
  if (cli.seed->count()) {
    cfg.seed.seed = cli.flags.seed.seed;
    cfg.has_seed = true;
  }
  if (cli.stream->count()) cfg.seed.stream_id = cli.flags.seed.stream_id;
  if (cli.n_symbols->count()) cfg.n_symbols = cli.flags.n_symbols;
  if (cli.workers->count()) cfg.workers = cli.flags.workers;
  if (cli.plot->count()) cfg.plot = cli.flags.plot;
  if (cli.m_orders->count()) cfg.m_orders = cli.flags.m_orders;
  if (cli.bandwidths->count()) cfg.bandwidths_hz = cli.flags.bandwidths_hz;
  if (cli.rects->count()) cfg.rect_presets = cli.flags.rect_presets;
  if (cli.snr_db->count()) cfg.snr_db = cli.flags.snr_db;
  if (cli.rx_power_dbm->count()) cfg.rx_power_dbm = cli.flags.rx_power_dbm;
  if (cli.kinds->count()) cfg.kinds = cli.flags.kinds;
  if (cli.sigma_v->count()) cfg.sigma_v = cli.flags.sigma_v;
  if (cli.adc_rate->count()) cfg.adc_rate_hz = cli.flags.adc_rate_hz;
  if (cli.matching_gain->count()) cfg.matching_gain = cli.flags.matching_gain;
  if (cli.n_draws->count()) cfg.n_fading_draws = cli.flags.n_fading_draws;

  if (cli.out_dir->count()) {
    cfg.out_dir = cli.flags.out_dir;
  } else if (cfg.out_dir == ".") {
    if (const char* env = std::getenv("SWIPTSIM_OUT_DIR")) cfg.out_dir = env;
  }
  return cfg;
}

void report(const RunArtifacts& art) {
  std::cout << "wrote " << art.csv_path << "\n";
  for (const std::string& p : art.extra_paths) std::cout << "wrote " << p << "\n";
}

int fail(const std::string& code, const std::string& detail) {
  const nlohmann::json line = {{"error", code}, {"detail", detail}};
  std::cerr << line.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Link-level simulator for PPM signals feeding a rectifier-based "
      "energy-harvesting receiver that decodes from the rectifier output."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("swiptsim ") + swiptsim::kVersion);

  SweepCli ber, power, ripple, waveform, cdf;
  RunArtifacts (*runner)(const ExperimentConfig&) = nullptr;
  const SweepCli* active = nullptr;

  auto wire = [&](const char* name, const char* help, SweepCli& cli,
                  RunArtifacts (*fn)(const ExperimentConfig&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common_options(sub, cli);
    sub->callback([&cli, fn, &runner, &active] {
      runner = fn;
      active = &cli;
    });
  };
  wire("ber-sweep", "bit error rate over an SNR or received-power grid", ber,
       swiptsim::run_ber_sweep);
  wire("power-sweep", "harvested DC power per signal kind and operating point",
       power, swiptsim::run_power_sweep);
  wire("ripple", "rectifier output ripple statistics over a grid", ripple,
       swiptsim::run_ripple);
  wire("waveform", "aligned receiver traces for one operating point", waveform,
       swiptsim::run_waveform_dump);
  wire("cdf", "harvested-power CDF under block fading", cdf, swiptsim::run_cdf);

  CLI::App* presets = app.add_subcommand("presets", "preset catalog");
  presets->require_subcommand(1);
  bool list_requested = false;
  presets->add_subcommand("list", "list available presets")->callback([&] {
    list_requested = true;
  });

  CLI11_PARSE(app, argc, argv);

  if (list_requested) {
    for (const swiptsim::PresetInfo& p : swiptsim::list_presets()) {
      std::cout << p.name << "\t" << p.subcommand << "\t" << p.description << "\n";
    }
    return 0;
  }

  try {
    report(runner(resolve(*active)));
  } catch (const swiptsim::SimError& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail("Internal", e.what());
  }
  return 0;
}
