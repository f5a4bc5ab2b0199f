#pragma once

// Waveforms and pulses.
//
// Time is discretised in 1 ns ticks; every waveform value is in rad/us.
// Integrals convert ns to us, so an area is in rad.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydpulse/param.hpp"

namespace rydpulse {

/// Integer duration in nanoseconds (one clock tick = 1 ns).
using Nanoseconds = std::int64_t;

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = kTwoPi / 2.0;
/// Length of one tick in microseconds.
constexpr double kTickUs = 1e-3;

/// Wraps an angle into [0, 2pi).
double normalize_phase(double phase);

enum class WaveformKind { Constant, Ramp, Blackman, Arbitrary };

const char *to_string(WaveformKind kind);

/// Immutable, time-discretised control signal.
class Waveform {
public:
  static Waveform constant(Nanoseconds duration, double value);
  /// Linear interpolation from `start` (tick 0) to `stop` (tick duration-1).
  static Waveform ramp(Nanoseconds duration, double start, double stop);
  /// Blackman window whose discrete area equals `area` (rad).
  static Waveform blackman(Nanoseconds duration, double area);
  /// Shortest Blackman waveform with the given area whose peak does not exceed `max_val`.
  static Waveform blackman_from_max_val(double max_val, double area);
  static Waveform arbitrary(std::vector<double> samples);

  WaveformKind kind() const { return kind_; }
  Nanoseconds duration() const { return Nanoseconds(samples_.size()); }
  std::span<const double> samples() const { return samples_; }
  /// Kind-specific parameters: {value}, {start, stop}, {area} or {}.
  const std::vector<double> &parameters() const { return params_; }

  /// Sum of samples times one tick, in rad.
  double integral() const;
  double max_value() const;
  double min_value() const;

  friend bool operator==(const Waveform &, const Waveform &) = default;

private:
  Waveform(WaveformKind kind, std::vector<double> params, std::vector<double> samples);

  WaveformKind kind_;
  std::vector<double> params_;
  std::vector<double> samples_;
};

/// (amplitude, detuning, phase) triple driving one transition.
class Pulse {
public:
  Pulse(Waveform amplitude, Waveform detuning, double phase);

  static Pulse constant_detuning(Waveform amplitude, double detuning, double phase);
  static Pulse constant_amplitude(double amplitude, Waveform detuning, double phase);
  static Pulse constant_pulse(Nanoseconds duration, double amplitude, double detuning,
                              double phase);

  const Waveform &amplitude() const { return amplitude_; }
  const Waveform &detuning() const { return detuning_; }
  /// Phase in [0, 2pi).
  double phase() const { return phase_; }
  Nanoseconds duration() const { return amplitude_.duration(); }

  /// Same waveforms with `delta` added to the phase.
  Pulse with_phase_offset(double delta) const;

  friend bool operator==(const Pulse &, const Pulse &) = default;

private:
  Waveform amplitude_;
  Waveform detuning_;
  double phase_;
};

// ---------------------------------------------------------------------------
// Deferred descriptions, used by sequence blueprints. They resolve into the
// concrete types above once every variable has a value.

enum class WaveformSpecKind { Constant, Ramp, Blackman, BlackmanMaxVal, Arbitrary };

struct WaveformSpec {
  WaveformSpecKind kind = WaveformSpecKind::Constant;
  /// Absent only for a constant waveform that borrows the duration of the
  /// other waveform in its pulse, and for kinds that derive it.
  std::optional<Param> duration;
  std::vector<Param> params;
  std::vector<double> samples; // Arbitrary only

  WaveformSpec() = default;
  WaveformSpec(const Waveform &wf); // NOLINT(google-explicit-constructor)

  static WaveformSpec constant(Param duration, Param value);
  static WaveformSpec ramp(Param duration, Param start, Param stop);
  static WaveformSpec blackman(Param duration, Param area);
  static WaveformSpec blackman_from_max_val(Param max_val, Param area);
  static WaveformSpec arbitrary(std::vector<double> samples);
  /// Constant waveform whose duration is taken from its pulse partner.
  static WaveformSpec matching_constant(Param value);

  /// Realises the waveform. `fallback_duration` is used when the spec
  /// borrows its duration.
  Waveform resolve(const VariableValues &values,
                   std::optional<Nanoseconds> fallback_duration = std::nullopt) const;
  bool borrows_duration() const { return !duration && kind == WaveformSpecKind::Constant; }
  void collect_variables(std::set<std::string> &names) const;

  nlohmann::json to_json() const;
  static WaveformSpec from_json(const nlohmann::json &j);
};

struct PulseSpec {
  WaveformSpec amplitude;
  WaveformSpec detuning;
  Param phase = 0.0;

  PulseSpec() = default;
  PulseSpec(WaveformSpec amplitude, WaveformSpec detuning, Param phase);
  PulseSpec(const Pulse &pulse); // NOLINT(google-explicit-constructor)

  static PulseSpec constant_detuning(WaveformSpec amplitude, Param detuning, Param phase);
  static PulseSpec constant_amplitude(Param amplitude, WaveformSpec detuning, Param phase);
  static PulseSpec constant_pulse(Param duration, Param amplitude, Param detuning, Param phase);

  Pulse resolve(const VariableValues &values) const;
  void collect_variables(std::set<std::string> &names) const;

  nlohmann::json to_json() const;
  static PulseSpec from_json(const nlohmann::json &j);
};

/// Rounds a real duration in ns to the nearest integer tick.
Nanoseconds round_duration(double ns);

} // namespace rydpulse
