#pragma once

#include "swiptsim/modulator.hpp"
#include "swiptsim/signal.hpp"

#include <optional>
#include <vector>

namespace swiptsim {

// Truncated-Taylor harvester model: P_del = k2*R*E{|x|^2} + (3/2)*k4*R^2*E{|x|^4}.
struct TaylorModelParams {
  double k2 = 0.0034;
  double k4 = 0.3829;
  double r_ant = 50.0;

  void validate() const;
};

double harvested_power_taylor(double mean_sq, double mean_fourth,
                              const TaylorModelParams& p);
double harvested_power_taylor(const Waveform& rx, const TaylorModelParams& p);

// Fourth-order coefficient c in P_del = k2*R*P + c*k4*R^2*P^2 for a
// unit-power constellation: c = (3/2)*E{|m|^4}. m_order is only read for PPM.
double scaling_law_coefficient(SignalKind kind, int m_order = 0);

// Single-diode envelope detector: series Schottky diode charging c_out against
// r_load. The input network is reduced to a voltage gain, so the diode sees
// v_env(t) = matching_gain*sqrt(2*r_ant)*|x(t)|.
struct RectifierParams {
  double i_s = 5e-6;        // diode saturation current (A)
  double ideality_n = 1.05;
  double v_t = 0.02585;     // thermal voltage (V)
  double r_s = 20.0;        // diode series resistance (ohm), reported only
  double c_out = 1e-9;      // smoothing capacitor (F)
  double r_load = 10e3;     // DC load (ohm)
  double matching_gain = 1.0;
  double v_max_clip = 0.34; // forward-voltage guard on the diode exponent (V)

  void validate() const;
};

RectifierParams rect1();  // c_out = 1 nF
RectifierParams rect2();  // c_out = 200 pF
RectifierParams rect_preset(const std::string& name);  // throws UnknownPreset
const std::vector<std::string>& rect_preset_names();

// Streaming integrator for C_out*dv/dt = i_diode(v_env - v) - v/r_load with
// i_diode(u) = i_s*expm1(u/(n*v_t)), exponent argument clipped at v_max_clip.
// The envelope is held constant over each input sample; explicit Euler
// substeps adapt to the local diode conductance. dt_max_s additionally caps
// the substep (0 disables the cap beyond r_load*c_out/100).
class EnvelopeRectifier {
public:
  EnvelopeRectifier(const RectifierParams& p, double sample_rate_hz,
                    double dt_max_s = 0.0);

  // Integrates one chunk of envelope voltage; returns v(t) on the input grid.
  ArrayXd process(const ArrayXd& v_env);

  double state() const { return v_; }
  void set_state(double v0) { v_ = v0; }

private:
  double step(double env);

  RectifierParams p_;
  double dt_;
  double dt_cap_;
  double inv_nvt_;
  double v_ = 0.0;
  std::uint64_t n_steps_ = 0;
};

// Envelope voltage seen by the diode for a received waveform.
ArrayXd envelope_voltage(const Waveform& rx, const RectifierParams& p,
                         double r_ant = 50.0);

// Batch form: envelope extraction + integration from v(0) = 0.
RealTrace rectify_envelope(const Waveform& rx, const RectifierParams& p,
                           double dt_max_s = 0.0, double r_ant = 50.0);

struct RippleStats {
  double peak_to_peak = 0.0;
  double ripple_factor = 0.0;  // RMS of the AC component over the DC mean
};

// Ripple of the rectified trace after discarding transient_skip_s seconds.
// Throws NoDcComponent when the post-skip mean is not positive.
RippleStats fundamental_ripple(const RealTrace& v_dc, double transient_skip_s);

// Additive white Gaussian noise on the rectified voltage. Exactly one of
// snr_db / sigma_v must be set; snr_db defines sigma^2 =
// mean_square(v_dc)/10^(snr_db/10) over the supplied trace.
struct RectNoiseParams {
  std::optional<double> snr_db;
  std::optional<double> sigma_v;

  void validate() const;
};

// Streaming N(0, sigma^2) source; draws are sequential so chunking does not
// change the realization.
class NoiseSource {
public:
  NoiseSource(double sigma, const SimSeed& seed);

  void add_to(ArrayXd& chunk);
  double sigma() const { return sigma_; }

private:
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_;
};

RealTrace add_rect_noise(const RealTrace& v_dc, const RectNoiseParams& noise,
                         const SimSeed& seed);

}  // namespace swiptsim
