#include "swiptsim/experiments.hpp"

#include "swiptsim/channel.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace swiptsim {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

SimSeed sub_seed(const SimSeed& base, const std::string& tag) {
  return base.substream(fnv1a64(tag));
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto drain = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

template <typename T>
std::string join_list(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, std::string>) {
      out += xs[i];
    } else if constexpr (std::is_floating_point_v<T>) {
      out += format_double(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets

struct PresetDefaults {
  std::string subcommand;
  std::string description;
  std::vector<int> m_orders;
  std::vector<double> bandwidths_hz;
  std::vector<std::string> rects;
  std::vector<double> snr_db;
  std::vector<double> rx_power_dbm;
  std::vector<std::string> kinds;
  double sigma_v = 0.0;
  int n_symbols = 0;
  double adc_rate_hz = 2e9;
  double matching_gain = 1.0;
  int n_fading_draws = 0;
};

std::vector<double> linspace_db(double lo, double hi, double step) {
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
  return out;
}

const std::map<std::string, PresetDefaults>& preset_table() {
  static const std::map<std::string, PresetDefaults> table = [] {
    std::map<std::string, PresetDefaults> t;
    const std::vector<std::string> both = {"rect1", "rect2"};
    const std::vector<double> all_bw = {1e6, 2e6, 5e6, 10e6};
    const std::vector<double> snr = linspace_db(0.0, 40.0, 5.0);
    const std::vector<double> rx_sweep = linspace_db(-30.0, -5.0, 2.5);

    PresetDefaults fig5;
    fig5.subcommand = "waveform";
    fig5.description = "decoder walkthrough traces: 4-PPM, 5 MHz, SNR 20 dB, 1 GSPS ADC";
    fig5.m_orders = {4};
    fig5.bandwidths_hz = {5e6};
    fig5.rects = {"rect1"};
    fig5.snr_db = {20.0};
    fig5.rx_power_dbm = {-20.0};
    fig5.n_symbols = 1;
    fig5.adc_rate_hz = 1e9;
    t["fig5"] = fig5;

    PresetDefaults fig6;
    fig6.subcommand = "ripple";
    fig6.description = "fundamental ripple of 4-PPM vs bandwidth, both rectifiers, -20 dBm";
    fig6.m_orders = {4};
    fig6.bandwidths_hz = all_bw;
    fig6.rects = both;
    fig6.rx_power_dbm = {-20.0};
    fig6.n_symbols = 200;
    t["fig6"] = fig6;

    PresetDefaults fig7;
    fig7.subcommand = "ber-sweep";
    fig7.description = "BER vs SNR for M in {2,4,8}, 5 MHz, both rectifiers";
    fig7.m_orders = {2, 4, 8};
    fig7.bandwidths_hz = {5e6};
    fig7.rects = both;
    fig7.snr_db = snr;
    fig7.rx_power_dbm = {-20.0};
    fig7.n_symbols = 2000;
    t["fig7"] = fig7;

    PresetDefaults fig8;
    fig8.subcommand = "ber-sweep";
    fig8.description = "BER vs SNR for 4-PPM over bandwidths {1,2,5,10} MHz, both rectifiers";
    fig8.m_orders = {4};
    fig8.bandwidths_hz = all_bw;
    fig8.rects = both;
    fig8.snr_db = snr;
    fig8.rx_power_dbm = {-20.0};
    fig8.n_symbols = 2000;
    t["fig8"] = fig8;

    PresetDefaults fig10;
    fig10.subcommand = "ripple";
    fig10.description = "fundamental ripple vs modulation order at 5 MHz, both rectifiers, -20 dBm";
    fig10.m_orders = {2, 4, 8};
    fig10.bandwidths_hz = {5e6};
    fig10.rects = both;
    fig10.rx_power_dbm = {-20.0};
    fig10.n_symbols = 200;
    t["fig10"] = fig10;

    PresetDefaults fig11;
    fig11.subcommand = "power-sweep";
    fig11.description = "harvested DC power of CW/BPSK/16QAM/M-PPM at -20 dBm, rect1";
    fig11.m_orders = {2, 4, 8};
    fig11.bandwidths_hz = {5e6};
    fig11.rects = {"rect1"};
    fig11.rx_power_dbm = {-20.0};
    fig11.kinds = {"cw", "bpsk", "qam16", "ppm"};
    fig11.n_symbols = 200;
    fig11.matching_gain = 2.0;
    t["fig11"] = fig11;

    PresetDefaults fig12;
    fig12.subcommand = "ripple";
    fig12.description = "ripple factor grid M x BW at -17 dBm, both rectifiers";
    fig12.m_orders = {2, 4, 8};
    fig12.bandwidths_hz = all_bw;
    fig12.rects = both;
    fig12.rx_power_dbm = {-17.0};
    fig12.n_symbols = 200;
    t["fig12"] = fig12;

    PresetDefaults fig13;
    fig13.subcommand = "ber-sweep";
    fig13.description = "BER vs received power for M in {2,4,8}, 5 MHz, fixed noise floor";
    fig13.m_orders = {2, 4, 8};
    fig13.bandwidths_hz = {5e6};
    fig13.rects = both;
    fig13.rx_power_dbm = rx_sweep;
    fig13.sigma_v = 1e-3;
    fig13.n_symbols = 2000;
    t["fig13"] = fig13;

    PresetDefaults fig14;
    fig14.subcommand = "ber-sweep";
    fig14.description = "BER vs received power for 4-PPM over bandwidths, fixed noise floor";
    fig14.m_orders = {4};
    fig14.bandwidths_hz = all_bw;
    fig14.rects = both;
    fig14.rx_power_dbm = rx_sweep;
    fig14.sigma_v = 1e-3;
    fig14.n_symbols = 2000;
    t["fig14"] = fig14;

    PresetDefaults fig15;
    fig15.subcommand = "power-sweep";
    fig15.description = "harvested DC power vs received power for M in {2,4,8}, 5 MHz";
    fig15.m_orders = {2, 4, 8};
    fig15.bandwidths_hz = {5e6};
    fig15.rects = both;
    fig15.rx_power_dbm = linspace_db(-30.0, -5.0, 5.0);
    fig15.kinds = {"ppm"};
    fig15.n_symbols = 200;
    fig15.matching_gain = 2.0;
    t["fig15"] = fig15;

    PresetDefaults fig16;
    fig16.subcommand = "power-sweep";
    fig16.description = "harvested DC power vs received power for 4-PPM over bandwidths";
    fig16.m_orders = {4};
    fig16.bandwidths_hz = all_bw;
    fig16.rects = both;
    fig16.rx_power_dbm = linspace_db(-30.0, -5.0, 5.0);
    fig16.kinds = {"ppm"};
    fig16.n_symbols = 200;
    fig16.matching_gain = 2.0;
    t["fig16"] = fig16;

    PresetDefaults fig17;
    fig17.subcommand = "power-sweep";
    fig17.description = "harvested DC power of CW/BPSK/16QAM/M-PPM at -17 dBm, rect1";
    fig17.m_orders = {2, 4, 8};
    fig17.bandwidths_hz = {5e6};
    fig17.rects = {"rect1"};
    fig17.rx_power_dbm = {-17.0};
    fig17.kinds = {"cw", "bpsk", "qam16", "ppm"};
    fig17.n_symbols = 200;
    fig17.matching_gain = 2.0;
    t["fig17"] = fig17;

    PresetDefaults fig18;
    fig18.subcommand = "cdf";
    fig18.description = "harvested-power CDF over 50 Rayleigh draws, 27 dBm tx, 3 m";
    fig18.m_orders = {2, 4, 8};
    fig18.bandwidths_hz = {5e6};
    fig18.rects = {"rect1"};
    fig18.kinds = {"cw", "ppm"};
    fig18.n_fading_draws = 50;
    fig18.n_symbols = 200;
    fig18.matching_gain = 2.0;
    t["fig18"] = fig18;

    return t;
  }();
  return table;
}

std::string available_presets_for(const std::string& subcommand) {
  std::string out;
  for (const auto& [name, def] : preset_table()) {
    if (!subcommand.empty() && def.subcommand != subcommand) continue;
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

// Fills preset defaults into unset fields; validates the preset/subcommand
// pairing. fig6 is reachable from both ripple (stats) and waveform (traces).
ExperimentConfig resolve_config(const ExperimentConfig& in,
                                const std::string& subcommand) {
  ExperimentConfig cfg = in;
  if (!cfg.has_seed) {
    throw SimError("SeedRequired", "--seed is required for " + subcommand);
  }

  if (cfg.preset.empty()) {
    if (cfg.m_orders.empty() || cfg.bandwidths_hz.empty() || cfg.rect_presets.empty()) {
      throw SimError("UnknownPreset",
                     "no preset and no explicit grid; presets for " + subcommand +
                         ": " + available_presets_for(subcommand));
    }
  } else {
    const auto it = preset_table().find(cfg.preset);
    if (it == preset_table().end()) {
      throw SimError("UnknownPreset",
                     "preset '" + cfg.preset + "' (available for " + subcommand +
                         ": " + available_presets_for(subcommand) + ")");
    }
    const PresetDefaults& def = it->second;
    const bool fig6_traces = cfg.preset == "fig6" && subcommand == "waveform";
    if (def.subcommand != subcommand && !fig6_traces) {
      throw SimError("InvalidConfig",
                     "preset '" + cfg.preset + "' belongs to subcommand '" +
                         def.subcommand + "'");
    }
    if (cfg.m_orders.empty()) cfg.m_orders = def.m_orders;
    if (cfg.bandwidths_hz.empty()) cfg.bandwidths_hz = def.bandwidths_hz;
    if (cfg.rect_presets.empty()) cfg.rect_presets = def.rects;
    if (cfg.snr_db.empty()) cfg.snr_db = def.snr_db;
    if (cfg.rx_power_dbm.empty()) cfg.rx_power_dbm = def.rx_power_dbm;
    if (cfg.kinds.empty()) cfg.kinds = def.kinds;
    if (cfg.sigma_v == 0.0) cfg.sigma_v = def.sigma_v;
    if (cfg.n_symbols == 0) cfg.n_symbols = def.n_symbols;
    if (cfg.adc_rate_hz == 0.0) cfg.adc_rate_hz = def.adc_rate_hz;
    if (cfg.matching_gain == 0.0) cfg.matching_gain = def.matching_gain;
    if (cfg.n_fading_draws == 0) cfg.n_fading_draws = def.n_fading_draws;
  }

  if (cfg.adc_rate_hz == 0.0) cfg.adc_rate_hz = 2e9;
  if (cfg.matching_gain == 0.0) cfg.matching_gain = 1.0;
  if (cfg.n_symbols <= 0) {
    throw SimError("InvalidConfig", "n_symbols must be positive");
  }
  if (cfg.workers < 1) {
    throw SimError("InvalidConfig", "workers must be >= 1");
  }
  for (int m : cfg.m_orders) {
    PpmConfig probe;
    probe.m_order = m;
    probe.validate();
  }
  for (const std::string& r : cfg.rect_presets) {
    rect_preset(r);  // throws UnknownPreset
  }
  return cfg;
}

int derive_samples_per_chip(double adc_rate_hz, double bandwidth_hz) {
  const double exact = adc_rate_hz / bandwidth_hz;
  const int spc = static_cast<int>(std::llround(exact));
  if (spc < 2 || std::abs(exact - spc) > 0.01 * spc) {
    throw SimError("WindowMismatch",
                   "ADC rate / bandwidth = " + format_double(exact) +
                       " is not close to an integer sample count");
  }
  return spc;
}

LinkConfig make_link_config(int m, double bw, const std::string& rect_name,
                            double rx_dbm, double adc_rate_hz,
                            double matching_gain) {
  LinkConfig lc;
  lc.ppm.m_order = m;
  lc.ppm.bandwidth_hz = bw;
  lc.ppm.avg_power_w = 1e-3;  // arbitrary: the rx power override sets the scale
  lc.ppm.samples_per_chip = derive_samples_per_chip(adc_rate_hz, bw);
  lc.channel.rx_power_dbm_override = rx_dbm;
  lc.rect = rect_preset(rect_name);
  lc.rect.matching_gain = matching_gain;
  lc.adc_rate_hz = adc_rate_hz;
  return lc;
}

// ---------------------------------------------------------------------------
// CSV + SVG output

class CsvWriter {
public:
  void comment(const std::string& key, const std::string& value) {
    body_ += "# " + key + " = " + value + "\n";
  }
  void header(const std::vector<std::string>& cols) {
    body_ += join_list(cols) + "\n";
  }
  void row(const std::vector<std::string>& cells) {
    body_ += join_list(cells) + "\n";
  }
  const std::string& body() const { return body_; }

private:
  std::string body_;
};

void manifest_common(CsvWriter& csv, const std::string& subcommand,
                     const ExperimentConfig& cfg) {
  csv.comment("tool", "swiptsim " + std::string(kVersion));
  csv.comment("subcommand", subcommand);
  csv.comment("preset", cfg.preset.empty() ? "(explicit grid)" : cfg.preset);
  csv.comment("seed", std::to_string(cfg.seed.seed));
  csv.comment("stream_id", std::to_string(cfg.seed.stream_id));
  csv.comment("n_symbols", std::to_string(cfg.n_symbols));
  csv.comment("m_orders", join_list(cfg.m_orders));
  csv.comment("bandwidths_hz", join_list(cfg.bandwidths_hz));
  csv.comment("rect_presets", join_list(cfg.rect_presets));
  csv.comment("adc_rate_hz", format_double(cfg.adc_rate_hz));
  csv.comment("matching_gain", format_double(cfg.matching_gain));
  csv.comment("snr_definition",
              "SNR(dB) = 10*log10(mean_square(settled noiseless v_dc) / sigma^2)");
}

std::string write_output(const std::string& out_dir, const std::string& name,
                         const std::string& content) {
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw SimError("InvalidConfig",
                   "cannot create output directory '" + dir.string() + "': " +
                       ec.message());
  }
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw SimError("InvalidConfig", "cannot open '" + path.string() + "' for writing");
  }
  out << content;
  out.close();
  if (!out) {
    throw SimError("InvalidConfig", "failed writing '" + path.string() + "'");
  }
  return path.string();
}

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal self-contained SVG line chart; log_y plots log10(max(y, floor)).
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<PlotSeries>& series, bool log_y) {
  constexpr double kW = 720, kH = 440, kL = 70, kR = 170, kT = 40, kB = 50;
  constexpr double kFloor = 1e-6;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                  "#17becf", "#bcbd22", "#aec7e8", "#ffbb78"};

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double y = s.y[i];
      if (log_y) y = std::log10(std::max(y, kFloor));
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      if (first) {
        x_min = x_max = s.x[i];
        y_min = y_max = y;
        first = false;
      } else {
        x_min = std::min(x_min, s.x[i]);
        x_max = std::max(x_max, s.x[i]);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;

  auto px = [&](double x) { return kL + (x - x_min) / (x_max - x_min) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y_min) / (y_max - y_min) * (kH - kT - kB); };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='"
      << kH << "' viewBox='0 0 " << kW << " " << kH << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << kW / 2 << "' y='24' text-anchor='middle' font-size='16'>"
      << title << "</text>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 4.0;
    const double fy = y_min + (y_max - y_min) * i / 4.0;
    svg << "<line x1='" << px(fx) << "' y1='" << kT << "' x2='" << px(fx)
        << "' y2='" << kH - kB << "' stroke='#ddd'/>\n"
        << "<line x1='" << kL << "' y1='" << py(fy) << "' x2='" << kW - kR
        << "' y2='" << py(fy) << "' stroke='#ddd'/>\n"
        << "<text x='" << px(fx) << "' y='" << kH - kB + 18
        << "' text-anchor='middle' font-size='11'>" << format_double(fx)
        << "</text>\n"
        << "<text x='" << kL - 8 << "' y='" << py(fy) + 4
        << "' text-anchor='end' font-size='11'>" << format_double(fy)
        << "</text>\n";
  }
  svg << "<text x='" << (kL + kW - kR) / 2 << "' y='" << kH - 12
      << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n"
      << "<text x='18' y='" << (kT + kH - kB) / 2
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
      << (kT + kH - kB) / 2 << ")'>" << y_label << (log_y ? " (log10)" : "")
      << "</text>\n";

  int color = 0;
  for (const auto& s : series) {
    const char* c = kColors[color % 12];
    svg << "<polyline fill='none' stroke='" << c << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double y = s.y[i];
      if (log_y) y = std::log10(std::max(y, kFloor));
      svg << px(s.x[i]) << "," << py(y) << " ";
    }
    svg << "'/>\n"
        << "<text x='" << kW - kR + 10 << "' y='" << kT + 16 * color + 12
        << "' font-size='11' fill='" << c << "'>" << s.label << "</text>\n";
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---------------------------------------------------------------------------
// Behavioral baseline run (CW / BPSK / 16QAM) for the power sweep.

struct BaselineStats {
  double p_del_behavioral_w = 0.0;
  double vdc_mean = 0.0;
  double ripple_factor = 0.0;
};

BaselineStats run_baseline_behavioral(SignalKind kind, const RectifierParams& rect,
                                      double rx_dbm, double bandwidth_hz,
                                      int n_symbols, const SimSeed& seed) {
  constexpr int kSps = 64;
  const double symbol_s = 1.0 / bandwidth_hz;
  const int n_settle = std::max(
      static_cast<int>(std::ceil(5.0 * rect.r_load * rect.c_out / symbol_s)), 3);

  Waveform payload = modulate_baseline(kind, n_symbols, 1e-3, bandwidth_hz, seed, kSps);
  // Payload defines the power scale; the settle prefix repeats the first
  // symbol with the same channel gain so there is no scale step at the seam.
  const double target = dbm_to_watts(rx_dbm);
  const double scale = std::sqrt(target / mean_square(payload.samples));
  payload.samples *= scale;
  payload.avg_power_w = target;

  ArrayXcd settle(static_cast<Eigen::Index>(n_settle) * kSps);
  for (int s = 0; s < n_settle; ++s) {
    settle.segment(static_cast<Eigen::Index>(s) * kSps, kSps) =
        payload.samples.head(kSps);
  }

  const double dt_max = rect.r_load * rect.c_out / 100.0;
  EnvelopeRectifier integ(rect, payload.sample_rate_hz, dt_max);
  Waveform settle_wf{settle, payload.sample_rate_hz, target};
  integ.process(envelope_voltage(settle_wf, rect));
  const ArrayXd vdc = integ.process(envelope_voltage(payload, rect));

  BaselineStats st;
  st.vdc_mean = vdc.mean();
  const double ms = mean_square(vdc);
  st.p_del_behavioral_w = ms / rect.r_load;
  const double var = std::max(0.0, ms - st.vdc_mean * st.vdc_mean);
  if (st.vdc_mean > 0.0) st.ripple_factor = std::sqrt(var) / st.vdc_mean;
  return st;
}

double taylor_pdel_from_coefficient(double p_rx_w, double coeff,
                                    const TaylorModelParams& tp) {
  return tp.k2 * tp.r_ant * p_rx_w + coeff * tp.k4 * tp.r_ant * tp.r_ant * p_rx_w * p_rx_w;
}

}  // namespace

// ---------------------------------------------------------------------------
// BER sweep

RunArtifacts run_ber_sweep(const ExperimentConfig& user_cfg) {
  const ExperimentConfig cfg = resolve_config(user_cfg, "ber-sweep");
  if (cfg.n_symbols < 100) {
    throw SimError("InvalidConfig",
                   "n_symbols must be >= 100 for BER estimates, got " +
                       std::to_string(cfg.n_symbols));
  }
  const bool power_axis = cfg.sigma_v > 0.0;
  if (!power_axis && cfg.snr_db.empty()) {
    throw SimError("InvalidConfig", "BER sweep needs snr_db points or sigma_v");
  }
  if (cfg.rx_power_dbm.empty()) {
    throw SimError("InvalidConfig", "BER sweep needs at least one rx power");
  }

  struct Point {
    int m;
    double bw;
    std::string rect;
    double rx_dbm;
  };
  std::vector<Point> points;
  for (int m : cfg.m_orders)
    for (double bw : cfg.bandwidths_hz)
      for (const std::string& r : cfg.rect_presets)
        for (double p : cfg.rx_power_dbm)
          points.push_back({m, bw, r, p});
  if (points.empty()) {
    throw SimError("InvalidConfig", "empty sweep grid");
  }

  std::vector<LinkResult> results(points.size());
  parallel_for(static_cast<int>(points.size()), cfg.workers, [&](int i) {
    const Point& pt = points[i];
    LinkConfig lc = make_link_config(pt.m, pt.bw, pt.rect, pt.rx_dbm,
                                     cfg.adc_rate_hz, cfg.matching_gain);
    if (power_axis) {
      lc.sigma_v_list = {cfg.sigma_v};
    } else {
      lc.snr_db_list = cfg.snr_db;
    }
    const MessageSeq messages = random_messages(
        cfg.n_symbols, pt.m,
        sub_seed(cfg.seed, "msgs|m=" + std::to_string(pt.m) + "|n=" +
                               std::to_string(cfg.n_symbols)));
    results[i] = run_link(lc, messages, sub_seed(cfg.seed, "noise"));
  });

  CsvWriter csv;
  manifest_common(csv, "ber-sweep", cfg);
  csv.comment("noise_axis", power_axis ? "rx_power_dbm at fixed sigma_v" : "snr_db");
  if (power_axis) csv.comment("sigma_v", format_double(cfg.sigma_v));
  if (!power_axis) csv.comment("snr_db_points", join_list(cfg.snr_db));
  csv.comment("rx_power_dbm_points", join_list(cfg.rx_power_dbm));
  csv.header({"m_order", "bandwidth_hz", "rect", "rx_power_dbm", "snr_db",
              "sigma_v", "n_symbols", "n_bits", "bit_errors", "ber", "ci95_lo",
              "ci95_hi", "symbol_errors", "throughput_bps",
              "effective_throughput_bps", "p_del_taylor_w", "p_del_behavioral_w",
              "ripple_factor", "vdc_mean_v"});

  TaylorModelParams taylor;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& pt = points[i];
    const LinkResult& lr = results[i];
    const double thr = throughput(pt.m, pt.bw);
    const double p_taylor =
        harvested_power_taylor(lr.rx_mean_sq, lr.rx_mean_fourth, taylor);
    for (const LinkNoisePoint& np : lr.noise_points) {
      csv.row({std::to_string(pt.m), format_double(pt.bw), pt.rect,
               format_double(pt.rx_dbm),
               np.snr_db ? format_double(*np.snr_db) : "",
               format_double(np.sigma_v), std::to_string(cfg.n_symbols),
               std::to_string(np.ber.n_bits), std::to_string(np.ber.n_errors),
               format_double(np.ber.ber), format_double(np.ber.ci_lo),
               format_double(np.ber.ci_hi), std::to_string(np.n_symbol_errors),
               format_double(thr), format_double((1.0 - np.ber.ber) * thr),
               format_double(p_taylor), format_double(lr.p_del_behavioral_w),
               format_double(lr.ripple_factor), format_double(lr.vdc_mean)});
    }
  }

  const std::string base = cfg.preset.empty() ? "ber_sweep" : cfg.preset;
  RunArtifacts art;
  art.csv_path = write_output(cfg.out_dir, base + ".csv", csv.body());

  if (cfg.plot) {
    std::vector<PlotSeries> series;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Point& pt = points[i];
      PlotSeries s;
      s.label = std::to_string(pt.m) + "-PPM " + format_double(pt.bw / 1e6) +
                "MHz " + pt.rect;
      if (power_axis) {
        // One row per rx power: collect across points sharing (m, bw, rect).
        continue;
      }
      for (const LinkNoisePoint& np : results[i].noise_points) {
        s.x.push_back(np.snr_db.value_or(0.0));
        s.y.push_back(np.ber.ber);
      }
      series.push_back(std::move(s));
    }
    if (power_axis) {
      std::map<std::string, PlotSeries> grouped;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const Point& pt = points[i];
        const std::string key = std::to_string(pt.m) + "-PPM " +
                                format_double(pt.bw / 1e6) + "MHz " + pt.rect;
        auto& s = grouped[key];
        s.label = key;
        s.x.push_back(pt.rx_dbm);
        s.y.push_back(results[i].noise_points.at(0).ber.ber);
      }
      for (auto& [k, s] : grouped) series.push_back(std::move(s));
    }
    const std::string svg = render_svg(
        base + ": bit error rate", power_axis ? "received power (dBm)" : "SNR (dB)",
        "BER", series, true);
    art.extra_paths.push_back(write_output(cfg.out_dir, base + ".svg", svg));
  }
  return art;
}

// ---------------------------------------------------------------------------
// Power sweep

RunArtifacts run_power_sweep(const ExperimentConfig& user_cfg) {
  ExperimentConfig cfg = resolve_config(user_cfg, "power-sweep");
  if (cfg.kinds.empty()) cfg.kinds = {"cw", "bpsk", "qam16", "ppm"};
  if (cfg.rx_power_dbm.empty()) {
    throw SimError("InvalidConfig", "power sweep needs at least one rx power");
  }

  struct Row {
    std::string kind;  // cw | bpsk | qam16 | ppm
    int m = 0;         // PPM order, 0 for baselines
    double bw;
    std::string rect;
    double rx_dbm;
  };
  std::vector<Row> rows;
  for (const std::string& kind : cfg.kinds) {
    if (kind == "ppm") {
      for (int m : cfg.m_orders)
        for (double bw : cfg.bandwidths_hz)
          for (const std::string& r : cfg.rect_presets)
            for (double p : cfg.rx_power_dbm) rows.push_back({kind, m, bw, r, p});
    } else {
      signal_kind_from_string(kind);  // validates
      for (double bw : cfg.bandwidths_hz)
        for (const std::string& r : cfg.rect_presets)
          for (double p : cfg.rx_power_dbm) rows.push_back({kind, 0, bw, r, p});
    }
  }
  if (rows.empty()) {
    throw SimError("InvalidConfig", "empty sweep grid");
  }

  struct Out {
    double p_rx_w = 0.0;
    double p_taylor = 0.0;
    double p_behavioral = 0.0;
    double vdc_mean = 0.0;
    double ripple = 0.0;
  };
  std::vector<Out> outs(rows.size());
  TaylorModelParams taylor;

  parallel_for(static_cast<int>(rows.size()), cfg.workers, [&](int i) {
    const Row& row = rows[i];
    Out out;
    out.p_rx_w = dbm_to_watts(row.rx_dbm);
    if (row.kind == "ppm") {
      LinkConfig lc = make_link_config(row.m, row.bw, row.rect, row.rx_dbm,
                                       cfg.adc_rate_hz, cfg.matching_gain);
      const MessageSeq messages = random_messages(
          cfg.n_symbols, row.m,
          sub_seed(cfg.seed, "msgs|m=" + std::to_string(row.m) + "|n=" +
                                 std::to_string(cfg.n_symbols)));
      const LinkResult lr = run_link(lc, messages, sub_seed(cfg.seed, "noise"));
      out.p_taylor = harvested_power_taylor(lr.rx_mean_sq, lr.rx_mean_fourth, taylor);
      out.p_behavioral = lr.p_del_behavioral_w;
      out.vdc_mean = lr.vdc_mean;
      out.ripple = lr.ripple_factor;
    } else {
      const SignalKind kind = signal_kind_from_string(row.kind);
      out.p_taylor = taylor_pdel_from_coefficient(
          out.p_rx_w, scaling_law_coefficient(kind), taylor);
      RectifierParams rect = rect_preset(row.rect);
      rect.matching_gain = cfg.matching_gain;
      const BaselineStats st = run_baseline_behavioral(
          kind, rect, row.rx_dbm, row.bw, cfg.n_symbols,
          sub_seed(cfg.seed, "baseline|" + row.kind + "|n=" +
                                 std::to_string(cfg.n_symbols)));
      out.p_behavioral = st.p_del_behavioral_w;
      out.vdc_mean = st.vdc_mean;
      out.ripple = st.ripple_factor;
    }
    outs[i] = out;
  });

  // CW reference per (bandwidth, rect, rx power) group for the gain columns.
  std::map<std::string, std::pair<double, double>> cw_ref;  // taylor, behavioral
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].kind == "cw") {
      cw_ref[format_double(rows[i].bw) + "|" + rows[i].rect + "|" +
             format_double(rows[i].rx_dbm)] = {outs[i].p_taylor,
                                               outs[i].p_behavioral};
    }
  }

  CsvWriter csv;
  manifest_common(csv, "power-sweep", cfg);
  csv.comment("kinds", join_list(cfg.kinds));
  csv.comment("rx_power_dbm_points", join_list(cfg.rx_power_dbm));
  csv.comment("p_del_behavioral", "mean(v_dc^2)/r_load over the settled trace");
  csv.header({"kind", "m_order", "bandwidth_hz", "rect", "rx_power_dbm", "p_rx_w",
              "p_del_taylor_w", "p_del_behavioral_w", "gain_taylor_pct",
              "gain_behavioral_pct", "ripple_factor", "vdc_mean_v", "n_symbols"});

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    const Out& out = outs[i];
    const auto ref = cw_ref.find(format_double(row.bw) + "|" + row.rect + "|" +
                                 format_double(row.rx_dbm));
    std::string gain_t = "nan", gain_b = "nan";
    if (ref != cw_ref.end()) {
      gain_t = format_double(gain_over_cw(out.p_taylor, ref->second.first));
      gain_b = format_double(gain_over_cw(out.p_behavioral, ref->second.second));
    }
    csv.row({row.kind == "ppm" ? "ppm" + std::to_string(row.m) : row.kind,
             std::to_string(row.m), format_double(row.bw), row.rect,
             format_double(row.rx_dbm), format_double(out.p_rx_w),
             format_double(out.p_taylor), format_double(out.p_behavioral), gain_t,
             gain_b, format_double(out.ripple), format_double(out.vdc_mean),
             std::to_string(cfg.n_symbols)});
  }

  const std::string base = cfg.preset.empty() ? "power_sweep" : cfg.preset;
  RunArtifacts art;
  art.csv_path = write_output(cfg.out_dir, base + ".csv", csv.body());

  if (cfg.plot) {
    std::map<std::string, PlotSeries> grouped;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& row = rows[i];
      const std::string key =
          (row.kind == "ppm" ? "ppm" + std::to_string(row.m) : row.kind) + " " +
          format_double(row.bw / 1e6) + "MHz " + row.rect;
      auto& s = grouped[key];
      s.label = key;
      s.x.push_back(row.rx_dbm);
      s.y.push_back(outs[i].p_behavioral);
    }
    std::vector<PlotSeries> series;
    for (auto& [k, s] : grouped) series.push_back(std::move(s));
    const std::string svg =
        render_svg(base + ": harvested DC power", "received power (dBm)",
                   "P_del (W)", series, true);
    art.extra_paths.push_back(write_output(cfg.out_dir, base + ".svg", svg));
  }
  return art;
}

// ---------------------------------------------------------------------------
// Ripple sweep

RunArtifacts run_ripple(const ExperimentConfig& user_cfg) {
  const ExperimentConfig cfg = resolve_config(user_cfg, "ripple");
  if (cfg.rx_power_dbm.size() != 1) {
    throw SimError("InvalidConfig", "ripple runs use exactly one rx power");
  }
  const double rx_dbm = cfg.rx_power_dbm.front();

  struct Point {
    int m;
    double bw;
    std::string rect;
  };
  std::vector<Point> points;
  for (int m : cfg.m_orders)
    for (double bw : cfg.bandwidths_hz)
      for (const std::string& r : cfg.rect_presets) points.push_back({m, bw, r});

  std::vector<LinkResult> results(points.size());
  parallel_for(static_cast<int>(points.size()), cfg.workers, [&](int i) {
    const Point& pt = points[i];
    LinkConfig lc = make_link_config(pt.m, pt.bw, pt.rect, rx_dbm,
                                     cfg.adc_rate_hz, cfg.matching_gain);
    const MessageSeq messages = random_messages(
        cfg.n_symbols, pt.m,
        sub_seed(cfg.seed, "msgs|m=" + std::to_string(pt.m) + "|n=" +
                               std::to_string(cfg.n_symbols)));
    results[i] = run_link(lc, messages, sub_seed(cfg.seed, "noise"));
  });

  CsvWriter csv;
  manifest_common(csv, "ripple", cfg);
  csv.comment("rx_power_dbm", format_double(rx_dbm));
  csv.header({"m_order", "bandwidth_hz", "rect", "rx_power_dbm", "ripple_factor",
              "peak_to_peak_v", "vdc_mean_v", "p_del_behavioral_w", "n_symbols"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& pt = points[i];
    const LinkResult& lr = results[i];
    csv.row({std::to_string(pt.m), format_double(pt.bw), pt.rect,
             format_double(rx_dbm), format_double(lr.ripple_factor),
             format_double(lr.ripple_peak_to_peak), format_double(lr.vdc_mean),
             format_double(lr.p_del_behavioral_w), std::to_string(cfg.n_symbols)});
  }

  const std::string base = cfg.preset.empty() ? "ripple" : cfg.preset;
  RunArtifacts art;
  art.csv_path = write_output(cfg.out_dir, base + ".csv", csv.body());

  if (cfg.plot) {
    std::map<std::string, PlotSeries> grouped;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Point& pt = points[i];
      const std::string key = std::to_string(pt.m) + "-PPM " + pt.rect;
      auto& s = grouped[key];
      s.label = key;
      s.x.push_back(pt.bw / 1e6);
      s.y.push_back(results[i].ripple_factor);
    }
    std::vector<PlotSeries> series;
    for (auto& [k, s] : grouped) series.push_back(std::move(s));
    const std::string svg = render_svg(base + ": ripple factor",
                                       "bandwidth (MHz)", "ripple factor",
                                       series, false);
    art.extra_paths.push_back(write_output(cfg.out_dir, base + ".svg", svg));
  }
  return art;
}

// ---------------------------------------------------------------------------
// Waveform dump

namespace {

// Settle prefix plus payload through the batch pipeline, all on one grid.
struct DumpTraces {
  int n_settle = 0;
  DemodConfig demod;
  RealTrace x_abs;
  RealTrace v_env;
  RealTrace v_dc;
  RealTrace y;
  RealTrace filtered;
  MessageSeq decoded;
};

DumpTraces dump_single_point(int m, double bw, const std::string& rect_name,
                             double rx_dbm, double adc_rate_hz,
                             double matching_gain, int n_symbols,
                             std::optional<double> snr_db, const SimSeed& seed) {
  PpmConfig ppm;
  ppm.m_order = m;
  ppm.bandwidth_hz = bw;
  ppm.avg_power_w = 1e-3;
  ppm.samples_per_chip = derive_samples_per_chip(adc_rate_hz, bw);

  RectifierParams rect = rect_preset(rect_name);
  rect.matching_gain = matching_gain;

  // Fixed walkthrough pattern; the first payload symbol carries message 2.
  static const int kPattern[] = {2, 4, 1, 3, 2, 3, 4, 1};
  MessageSeq payload(n_symbols);
  for (int s = 0; s < n_symbols; ++s) {
    payload[s] = std::min(kPattern[s % 8], m);
  }

  const int n_settle = settle_symbol_count(ppm, rect);
  MessageSeq full(n_settle + n_symbols);
  full.head(n_settle).setConstant(payload[0]);
  full.tail(n_symbols) = payload;

  ChannelParams channel;
  channel.rx_power_dbm_override = rx_dbm;

  const Waveform tx = modulate_ppm(full, ppm);
  const Waveform rx = apply_channel(tx, channel);

  const double dt_max =
      std::min(ppm.chip_period_s() / 32.0, rect.r_load * rect.c_out / 100.0);
  const RealTrace v_dc = rectify_envelope(rx, rect, dt_max);

  RectNoiseParams noise;
  if (snr_db) {
    noise.snr_db = *snr_db;
  } else {
    noise.sigma_v = 0.0;
  }
  const RealTrace y = add_rect_noise(v_dc, noise, seed);

  DumpTraces out;
  out.n_settle = n_settle;
  out.demod = make_demod_config(adc_rate_hz, ppm.chip_period_s(), m);
  out.x_abs = RealTrace{rx.samples.abs(), rx.sample_rate_hz};
  out.v_env = RealTrace{envelope_voltage(rx, rect), rx.sample_rate_hz};
  out.v_dc = v_dc;
  out.y = y;

  const RealTrace sampled = adc_sample(y, out.demod);
  out.filtered = moving_average(sampled, out.demod.window_samples);

  DemodConfig offset_cfg = out.demod;
  offset_cfg.symbol_offset = n_settle * out.demod.samples_per_symbol;
  out.decoded = demodulate(y, offset_cfg, m).messages;
  return out;
}

}  // namespace

RunArtifacts run_waveform_dump(const ExperimentConfig& user_cfg) {
  const ExperimentConfig cfg = resolve_config(user_cfg, "waveform");

  CsvWriter csv;
  manifest_common(csv, "waveform", cfg);

  const std::string base = cfg.preset.empty() ? "waveform" : cfg.preset;
  RunArtifacts art;

  if (cfg.preset == "fig6") {
    // Noiseless rectified traces over the bandwidth/rectifier grid.
    csv.comment("content", "settled noiseless v_dc, last 2 symbols per point");
    csv.header({"m_order", "bandwidth_hz", "rect", "t_s", "v_dc_v"});
    for (int m : cfg.m_orders) {
      for (double bw : cfg.bandwidths_hz) {
        for (const std::string& rect : cfg.rect_presets) {
          const DumpTraces tr =
              dump_single_point(m, bw, rect, cfg.rx_power_dbm.front(),
                                cfg.adc_rate_hz, cfg.matching_gain,
                                std::max(2, cfg.n_symbols), std::nullopt, cfg.seed);
          const int sps = tr.demod.samples_per_symbol;
          const auto n = static_cast<Eigen::Index>(2) * sps;
          const Eigen::Index start = tr.v_dc.samples.size() - n;
          for (Eigen::Index i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / tr.v_dc.sample_rate_hz;
            csv.row({std::to_string(m), format_double(bw), rect, format_double(t),
                     format_double(tr.v_dc.samples[start + i])});
          }
        }
      }
    }
    art.csv_path = write_output(cfg.out_dir, base + "_traces.csv", csv.body());
    return art;
  }

  const int m = cfg.m_orders.front();
  const double bw = cfg.bandwidths_hz.front();
  const std::string rect = cfg.rect_presets.front();
  std::optional<double> snr;
  if (!cfg.snr_db.empty()) snr = cfg.snr_db.front();

  const DumpTraces tr =
      dump_single_point(m, bw, rect, cfg.rx_power_dbm.front(), cfg.adc_rate_hz,
                        cfg.matching_gain, cfg.n_symbols, snr, cfg.seed);

  std::string decoded_list;
  for (Eigen::Index i = 0; i < tr.decoded.size(); ++i) {
    if (i) decoded_list += ",";
    decoded_list += std::to_string(tr.decoded[i]);
  }
  csv.comment("decoded_messages", decoded_list);
  csv.comment("settle_symbols", std::to_string(tr.n_settle));
  csv.comment("t_zero", "start of the first payload symbol");
  csv.header({"t_s", "x_abs", "v_env_v", "v_dc_v", "y_v", "ma_v", "is_settle"});

  // Synthesis grid may be finer than the ADC grid; emit rows on the ADC grid
  // (the filter output lives there) with source samples decimated to match.
  const long ratio = std::lround(tr.v_dc.sample_rate_hz / tr.demod.adc_rate_hz);
  const double t0 =
      static_cast<double>(tr.n_settle) * tr.demod.samples_per_symbol /
      tr.demod.adc_rate_hz;
  for (Eigen::Index i = 0; i < tr.filtered.samples.size(); ++i) {
    const Eigen::Index src = i * ratio;
    const double t = static_cast<double>(i) / tr.demod.adc_rate_hz - t0;
    csv.row({format_double(t), format_double(tr.x_abs.samples[src]),
             format_double(tr.v_env.samples[src]),
             format_double(tr.v_dc.samples[src]),
             format_double(tr.y.samples[src]),
             format_double(tr.filtered.samples[i]),
             t < 0.0 ? "1" : "0"});
  }

  art.csv_path = write_output(cfg.out_dir, base + ".csv", csv.body());

  if (cfg.plot) {
    PlotSeries vdc, ma;
    vdc.label = "v_dc";
    ma.label = "filter";
    for (Eigen::Index i = 0; i < tr.filtered.samples.size(); ++i) {
      const double t = static_cast<double>(i) / tr.demod.adc_rate_hz - t0;
      if (t < 0.0) continue;
      vdc.x.push_back(t * 1e6);
      vdc.y.push_back(tr.v_dc.samples[i * ratio]);
      ma.x.push_back(t * 1e6);
      ma.y.push_back(tr.filtered.samples[i]);
    }
    const std::string svg = render_svg(base + ": decoder traces", "t (us)",
                                       "volts", {vdc, ma}, false);
    art.extra_paths.push_back(write_output(cfg.out_dir, base + ".svg", svg));
  }
  return art;
}

// ---------------------------------------------------------------------------
// Fading CDF

RunArtifacts run_cdf(const ExperimentConfig& user_cfg) {
  ExperimentConfig cfg = resolve_config(user_cfg, "cdf");
  if (cfg.n_fading_draws <= 0) cfg.n_fading_draws = 50;
  if (cfg.kinds.empty()) cfg.kinds = {"cw", "ppm"};

  constexpr double kTxPowerDbm = 27.0;
  constexpr double kDistanceM = 3.0;
  constexpr double kCarrierHz = 2.45e9;
  const double tx_w = dbm_to_watts(kTxPowerDbm);
  const double loss = free_space_path_loss(kDistanceM, kCarrierHz);

  // One fading draw per location, shared by every kind (common random numbers).
  std::vector<cplx> draws(cfg.n_fading_draws);
  FadingModel rayleigh;
  rayleigh.kind = FadingModel::Kind::RayleighBlock;
  for (int i = 0; i < cfg.n_fading_draws; ++i) {
    draws[i] = sample_fading(rayleigh, sub_seed(cfg.seed, "fade|i=" + std::to_string(i)));
  }

  struct KindSpec {
    std::string label;
    double coeff;
  };
  std::vector<KindSpec> kinds;
  for (const std::string& k : cfg.kinds) {
    if (k == "ppm") {
      for (int m : cfg.m_orders) {
        kinds.push_back({"ppm" + std::to_string(m),
                         scaling_law_coefficient(SignalKind::PPM, m)});
      }
    } else {
      kinds.push_back({k, scaling_law_coefficient(signal_kind_from_string(k))});
    }
  }

  TaylorModelParams taylor;
  CsvWriter draws_csv;
  manifest_common(draws_csv, "cdf", cfg);
  draws_csv.comment("tx_power_dbm", format_double(kTxPowerDbm));
  draws_csv.comment("distance_m", format_double(kDistanceM));
  draws_csv.comment("carrier_hz", format_double(kCarrierHz));
  draws_csv.comment("path_loss_linear", format_double(loss));
  draws_csv.comment("n_fading_draws", std::to_string(cfg.n_fading_draws));
  draws_csv.header({"draw", "h_re", "h_im", "p_rx_w", "kind", "p_del_taylor_w"});

  std::map<std::string, std::vector<double>> per_kind;
  for (int i = 0; i < cfg.n_fading_draws; ++i) {
    const double p_rx = tx_w * std::norm(draws[i]) / loss;
    for (const KindSpec& ks : kinds) {
      const double p_del = taylor_pdel_from_coefficient(p_rx, ks.coeff, taylor);
      per_kind[ks.label].push_back(p_del);
      draws_csv.row({std::to_string(i), format_double(draws[i].real()),
                     format_double(draws[i].imag()), format_double(p_rx),
                     ks.label, format_double(p_del)});
    }
  }

  CsvWriter cdf_csv;
  manifest_common(cdf_csv, "cdf", cfg);
  cdf_csv.header({"kind", "p_del_taylor_w", "cum_prob"});
  for (const KindSpec& ks : kinds) {
    for (const auto& [v, p] : empirical_cdf(per_kind[ks.label])) {
      cdf_csv.row({ks.label, format_double(v), format_double(p)});
    }
  }

  const std::string base = cfg.preset.empty() ? "cdf" : cfg.preset;
  RunArtifacts art;
  art.csv_path = write_output(cfg.out_dir, base + ".csv", cdf_csv.body());
  art.extra_paths.push_back(
      write_output(cfg.out_dir, base + "_draws.csv", draws_csv.body()));

  if (cfg.plot) {
    std::vector<PlotSeries> series;
    for (const KindSpec& ks : kinds) {
      PlotSeries s;
      s.label = ks.label;
      for (const auto& [v, p] : empirical_cdf(per_kind[ks.label])) {
        s.x.push_back(v * 1e6);
        s.y.push_back(p);
      }
      series.push_back(std::move(s));
    }
    const std::string svg = render_svg(base + ": harvested power CDF",
                                       "P_del (uW)", "P[X <= x]", series, false);
    art.extra_paths.push_back(write_output(cfg.out_dir, base + ".svg", svg));
  }
  return art;
}

// ---------------------------------------------------------------------------

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> presets = [] {
    std::vector<PresetInfo> out;
    for (const auto& [name, def] : preset_table()) {
      out.push_back({name, def.subcommand, def.description});
    }
    return out;
  }();
  return presets;
}

ExperimentConfig load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SimError("InvalidConfig", "cannot open config file '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SimError("InvalidConfig", "config parse error: " + std::string(e.what()));
  }
  if (!j.is_object()) {
    throw SimError("InvalidConfig", "config root must be a JSON object");
  }

  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "preset") {
        cfg.preset = value.get<std::string>();
      } else if (key == "seed") {
        cfg.seed.seed = value.get<std::uint64_t>();
        cfg.has_seed = true;
      } else if (key == "stream_id") {
        cfg.seed.stream_id = value.get<std::uint64_t>();
      } else if (key == "n_symbols") {
        cfg.n_symbols = value.get<int>();
      } else if (key == "workers") {
        cfg.workers = value.get<int>();
      } else if (key == "out_dir") {
        cfg.out_dir = value.get<std::string>();
      } else if (key == "plot") {
        cfg.plot = value.get<bool>();
      } else if (key == "m_orders") {
        cfg.m_orders = value.get<std::vector<int>>();
      } else if (key == "bandwidths_hz") {
        cfg.bandwidths_hz = value.get<std::vector<double>>();
      } else if (key == "rect_presets") {
        cfg.rect_presets = value.get<std::vector<std::string>>();
      } else if (key == "snr_db") {
        cfg.snr_db = value.get<std::vector<double>>();
      } else if (key == "rx_power_dbm") {
        cfg.rx_power_dbm = value.get<std::vector<double>>();
      } else if (key == "kinds") {
        cfg.kinds = value.get<std::vector<std::string>>();
      } else if (key == "sigma_v") {
        cfg.sigma_v = value.get<double>();
      } else if (key == "adc_rate_hz") {
        cfg.adc_rate_hz = value.get<double>();
      } else if (key == "matching_gain") {
        cfg.matching_gain = value.get<double>();
      } else if (key == "n_fading_draws") {
        cfg.n_fading_draws = value.get<int>();
      } else {
        throw SimError("InvalidConfig", "unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw SimError("InvalidConfig",
                     "config key '" + key + "': " + std::string(e.what()));
    }
  }
  return cfg;
}

}  // namespace swiptsim
