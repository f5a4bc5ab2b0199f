#include "rydpulse/signal.hpp"

#include "rydpulse/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rydpulse {

namespace {

void require_duration(Nanoseconds duration) {
  if (duration < 1) {
    throw Error("waveform duration must be at least 1 ns, got " + std::to_string(duration));
  }
}

void require_finite(double v, const char *what) {
  if (!std::isfinite(v)) {
    throw Error(std::string("waveform ") + what + " must be finite");
  }
}

// Symmetric Blackman window, zero at both ends.
std::vector<double> blackman_window(Nanoseconds duration) {
  std::vector<double> w(static_cast<std::size_t>(duration), 1.0);
  if (duration == 1) return w;
  const double denom = double(duration - 1);
  for (Nanoseconds k = 0; k < duration; ++k) {
    const double x = kTwoPi * double(k) / denom;
    w[k] = std::max(0.0, 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x));
  }
  // Force exact mirror symmetry; cos() rounding differs on both halves.
  for (Nanoseconds k = 0; k < duration / 2; ++k) {
    w[duration - 1 - k] = w[k];
  }
  w.front() = w.back() = 0.0;
  return w;
}

double tick_sum(std::span<const double> samples) {
  return std::accumulate(samples.begin(), samples.end(), 0.0) * kTickUs;
}

} // namespace

double normalize_phase(double phase) {
  double p = std::fmod(phase, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  if (p >= kTwoPi) p = 0.0;
  return p;
}

const char *to_string(WaveformKind kind) {
  switch (kind) {
  case WaveformKind::Constant: return "constant";
  case WaveformKind::Ramp: return "ramp";
  case WaveformKind::Blackman: return "blackman";
  case WaveformKind::Arbitrary: return "arbitrary";
  }
  return "?";
}

Nanoseconds round_duration(double ns) {
  if (!std::isfinite(ns)) {
    throw Error("duration must be finite");
  }
  return static_cast<Nanoseconds>(std::llround(ns));
}

Waveform::Waveform(WaveformKind kind, std::vector<double> params, std::vector<double> samples)
    : kind_(kind), params_(std::move(params)), samples_(std::move(samples)) {}

Waveform Waveform::constant(Nanoseconds duration, double value) {
  require_duration(duration);
  require_finite(value, "value");
  return Waveform(WaveformKind::Constant, {value},
                  std::vector<double>(static_cast<std::size_t>(duration), value));
}

Waveform Waveform::ramp(Nanoseconds duration, double start, double stop) {
  require_duration(duration);
  require_finite(start, "start");
  require_finite(stop, "stop");
  std::vector<double> s(static_cast<std::size_t>(duration));
  if (duration == 1) {
    s[0] = start;
  } else {
    const double slope = (stop - start) / double(duration - 1);
    for (Nanoseconds k = 0; k < duration; ++k) {
      s[k] = start + slope * double(k);
    }
    s.back() = stop;
  }
  return Waveform(WaveformKind::Ramp, {start, stop}, std::move(s));
}

Waveform Waveform::blackman(Nanoseconds duration, double area) {
  require_duration(duration);
  require_finite(area, "area");
  auto w = blackman_window(duration);
  const double scale = area / tick_sum(w);
  for (auto &v : w) v *= scale;
  return Waveform(WaveformKind::Blackman, {area}, std::move(w));
}

Waveform Waveform::blackman_from_max_val(double max_val, double area) {
  require_finite(max_val, "max_val");
  require_finite(area, "area");
  if (max_val == 0.0 || area == 0.0 || std::signbit(max_val) != std::signbit(area)) {
    throw Error("blackman_from_max_val: max_val and area must be non-zero with the same sign");
  }
  // Continuous-window estimate, then lengthen until the discrete peak fits.
  auto duration = static_cast<Nanoseconds>(std::ceil(area / (0.42 * max_val) / kTickUs - 1e-9));
  duration = std::max<Nanoseconds>(duration, 1);
  auto wf = blackman(duration, area);
  while (std::abs(area > 0 ? wf.max_value() : wf.min_value()) > std::abs(max_val)) {
    wf = blackman(++duration, area);
  }
  return wf;
}

Waveform Waveform::arbitrary(std::vector<double> samples) {
  require_duration(Nanoseconds(samples.size()));
  for (double v : samples) require_finite(v, "sample");
  return Waveform(WaveformKind::Arbitrary, {}, std::move(samples));
}

double Waveform::integral() const { return tick_sum(samples_); }

double Waveform::max_value() const { return *std::max_element(samples_.begin(), samples_.end()); }

double Waveform::min_value() const { return *std::min_element(samples_.begin(), samples_.end()); }

Pulse::Pulse(Waveform amplitude, Waveform detuning, double phase)
    : amplitude_(std::move(amplitude)), detuning_(std::move(detuning)),
      phase_(normalize_phase(phase)) {
  if (amplitude_.duration() != detuning_.duration()) {
    throw Error("pulse amplitude and detuning durations differ (" +
                std::to_string(amplitude_.duration()) + " vs " +
                std::to_string(detuning_.duration()) + " ns)");
  }
  if (amplitude_.min_value() < 0.0) {
    throw Error("pulse amplitude must be non-negative");
  }
  if (!std::isfinite(phase)) {
    throw Error("pulse phase must be finite");
  }
}

Pulse Pulse::constant_detuning(Waveform amplitude, double detuning, double phase) {
  auto det = Waveform::constant(amplitude.duration(), detuning);
  return Pulse(std::move(amplitude), std::move(det), phase);
}

Pulse Pulse::constant_amplitude(double amplitude, Waveform detuning, double phase) {
  auto amp = Waveform::constant(detuning.duration(), amplitude);
  return Pulse(std::move(amp), std::move(detuning), phase);
}

Pulse Pulse::constant_pulse(Nanoseconds duration, double amplitude, double detuning,
                            double phase) {
  return Pulse(Waveform::constant(duration, amplitude), Waveform::constant(duration, detuning),
               phase);
}

Pulse Pulse::with_phase_offset(double delta) const {
  return Pulse(amplitude_, detuning_, phase_ + delta);
}

// ---------------------------------------------------------------------------

WaveformSpec::WaveformSpec(const Waveform &wf) {
  switch (wf.kind()) {
  case WaveformKind::Constant:
    *this = constant(wf.duration(), wf.parameters()[0]);
    break;
  case WaveformKind::Ramp:
    *this = ramp(wf.duration(), wf.parameters()[0], wf.parameters()[1]);
    break;
  case WaveformKind::Blackman:
    *this = blackman(wf.duration(), wf.parameters()[0]);
    break;
  case WaveformKind::Arbitrary:
    *this = arbitrary({wf.samples().begin(), wf.samples().end()});
    break;
  }
}

WaveformSpec WaveformSpec::constant(Param duration, Param value) {
  WaveformSpec s;
  s.kind = WaveformSpecKind::Constant;
  s.duration = std::move(duration);
  s.params = {std::move(value)};
  return s;
}

WaveformSpec WaveformSpec::ramp(Param duration, Param start, Param stop) {
  WaveformSpec s;
  s.kind = WaveformSpecKind::Ramp;
  s.duration = std::move(duration);
  s.params = {std::move(start), std::move(stop)};
  return s;
}

WaveformSpec WaveformSpec::blackman(Param duration, Param area) {
  WaveformSpec s;
  s.kind = WaveformSpecKind::Blackman;
  s.duration = std::move(duration);
  s.params = {std::move(area)};
  return s;
}

WaveformSpec WaveformSpec::blackman_from_max_val(Param max_val, Param area) {
  WaveformSpec s;
  s.kind = WaveformSpecKind::BlackmanMaxVal;
  s.params = {std::move(max_val), std::move(area)};
  return s;
}

WaveformSpec WaveformSpec::arbitrary(std::vector<double> samples) {
  WaveformSpec s;
  s.kind = WaveformSpecKind::Arbitrary;
  s.samples = std::move(samples);
  return s;
}

WaveformSpec WaveformSpec::matching_constant(Param value) {
  WaveformSpec s;
  s.kind = WaveformSpecKind::Constant;
  s.params = {std::move(value)};
  return s;
}

Waveform WaveformSpec::resolve(const VariableValues &values,
                               std::optional<Nanoseconds> fallback_duration) const {
  auto p = [&](std::size_t i) { return params.at(i).resolve(values); };
  auto dur = [&]() -> Nanoseconds {
    if (duration) return round_duration(duration->resolve(values));
    if (fallback_duration) return *fallback_duration;
    throw Error("waveform has no duration");
  };
  switch (kind) {
  case WaveformSpecKind::Constant: return Waveform::constant(dur(), p(0));
  case WaveformSpecKind::Ramp: return Waveform::ramp(dur(), p(0), p(1));
  case WaveformSpecKind::Blackman: return Waveform::blackman(dur(), p(0));
  case WaveformSpecKind::BlackmanMaxVal: return Waveform::blackman_from_max_val(p(0), p(1));
  case WaveformSpecKind::Arbitrary: return Waveform::arbitrary(samples);
  }
  throw Error("unknown waveform kind");
}

void WaveformSpec::collect_variables(std::set<std::string> &names) const {
  if (duration) duration->collect_variables(names);
  for (const auto &p : params) p.collect_variables(names);
}

nlohmann::json WaveformSpec::to_json() const {
  nlohmann::json j;
  nlohmann::json params_json = nlohmann::json::object();
  switch (kind) {
  case WaveformSpecKind::Constant:
    j["kind"] = "constant";
    params_json["value"] = params[0].to_json();
    break;
  case WaveformSpecKind::Ramp:
    j["kind"] = "ramp";
    params_json["start"] = params[0].to_json();
    params_json["stop"] = params[1].to_json();
    break;
  case WaveformSpecKind::Blackman:
    j["kind"] = "blackman";
    params_json["area"] = params[0].to_json();
    break;
  case WaveformSpecKind::BlackmanMaxVal:
    j["kind"] = "blackman_max_val";
    params_json["max_val"] = params[0].to_json();
    params_json["area"] = params[1].to_json();
    break;
  case WaveformSpecKind::Arbitrary:
    j["kind"] = "arbitrary";
    params_json["samples"] = samples;
    j["duration_ns"] = samples.size();
    break;
  }
  if (duration) j["duration_ns"] = duration->to_json();
  j["params"] = params_json;
  return j;
}

WaveformSpec WaveformSpec::from_json(const nlohmann::json &j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto &params = j.at("params");
  auto duration = [&]() -> std::optional<Param> {
    if (j.contains("duration_ns")) return Param::from_json(j.at("duration_ns"));
    return std::nullopt;
  };
  auto required_duration = [&] {
    auto d = duration();
    if (!d) throw Error("waveform '" + kind + "' requires duration_ns");
    return *d;
  };
  auto field = [&](const char *name) { return Param::from_json(params.at(name)); };
  if (kind == "constant") {
    auto d = duration();
    return d ? constant(*d, field("value")) : matching_constant(field("value"));
  }
  if (kind == "ramp") return ramp(required_duration(), field("start"), field("stop"));
  if (kind == "blackman") return blackman(required_duration(), field("area"));
  if (kind == "blackman_max_val") return blackman_from_max_val(field("max_val"), field("area"));
  if (kind == "arbitrary") {
    auto s = arbitrary(params.at("samples").get<std::vector<double>>());
    if (j.contains("duration_ns") && j.at("duration_ns").get<std::size_t>() != s.samples.size()) {
      throw Error("arbitrary waveform: duration_ns does not match sample count");
    }
    return s;
  }
  throw Error("unknown waveform kind '" + kind + "'");
}

PulseSpec::PulseSpec(WaveformSpec amplitude_, WaveformSpec detuning_, Param phase_)
    : amplitude(std::move(amplitude_)), detuning(std::move(detuning_)), phase(std::move(phase_)) {}

PulseSpec::PulseSpec(const Pulse &pulse)
    : amplitude(pulse.amplitude()), detuning(pulse.detuning()), phase(pulse.phase()) {}

PulseSpec PulseSpec::constant_detuning(WaveformSpec amplitude, Param detuning, Param phase) {
  return PulseSpec(std::move(amplitude), WaveformSpec::matching_constant(std::move(detuning)),
                   std::move(phase));
}

PulseSpec PulseSpec::constant_amplitude(Param amplitude, WaveformSpec detuning, Param phase) {
  return PulseSpec(WaveformSpec::matching_constant(std::move(amplitude)), std::move(detuning),
                   std::move(phase));
}

PulseSpec PulseSpec::constant_pulse(Param duration, Param amplitude, Param detuning,
                                    Param phase) {
  return PulseSpec(WaveformSpec::constant(duration, std::move(amplitude)),
                   WaveformSpec::constant(duration, std::move(detuning)), std::move(phase));
}

Pulse PulseSpec::resolve(const VariableValues &values) const {
  if (amplitude.borrows_duration() && detuning.borrows_duration()) {
    throw Error("pulse needs at least one waveform with an explicit duration");
  }
  if (amplitude.borrows_duration()) {
    auto det = detuning.resolve(values);
    auto amp = amplitude.resolve(values, det.duration());
    return Pulse(std::move(amp), std::move(det), phase.resolve(values));
  }
  auto amp = amplitude.resolve(values);
  auto det = detuning.resolve(values, amp.duration());
  return Pulse(std::move(amp), std::move(det), phase.resolve(values));
}

void PulseSpec::collect_variables(std::set<std::string> &names) const {
  amplitude.collect_variables(names);
  detuning.collect_variables(names);
  phase.collect_variables(names);
}

nlohmann::json PulseSpec::to_json() const {
  return {{"amplitude", amplitude.to_json()},
          {"detuning", detuning.to_json()},
          {"phase_rad", phase.to_json()}};
}

PulseSpec PulseSpec::from_json(const nlohmann::json &j) {
  return PulseSpec(WaveformSpec::from_json(j.at("amplitude")),
                   WaveformSpec::from_json(j.at("detuning")),
                   Param::from_json(j.value("phase_rad", nlohmann::json(0.0))));
}

} // namespace rydpulse
