#pragma once

// Sequences shared by the unit and acceptance tests.

#include <string>

#include "rydpulse/sequence.hpp"

namespace fixtures {

using namespace rydpulse;

inline Register pair_register() { return Register({{"c", -2, 0}, {"t", 2, 0}}); }

/// Bell-state preparation on two atoms: Hadamard-like rotations on the
/// digital transition around the Rydberg CZ.
inline Sequence bell() {
  Sequence seq(pair_register(), reference_device());
  seq.declare_channel("digital", "raman_local");
  seq.declare_channel("rydberg", "rydberg_local", "c");
  seq.target("c", "digital");
  auto half = Waveform::blackman(200, kPi / 2);
  auto ry = Pulse::constant_detuning(half, 0.0, -kPi / 2);
  auto ry_dag = Pulse::constant_detuning(half, 0.0, kPi / 2);
  auto pi = Pulse::constant_detuning(Waveform::blackman(200, kPi), 0.0, 0.0);
  const double max_val = reference_device().rabi_from_blockade(8.0);
  auto twopi =
      Pulse::constant_detuning(Waveform::blackman_from_max_val(max_val, kTwoPi), 0.0, 0.0);
  seq.add(ry, "digital");
  seq.target("t", "digital");
  seq.add(ry_dag, "digital");
  seq.align({"digital", "rydberg"});
  seq.add(pi, "rydberg");
  seq.target("t", "rydberg");
  seq.add(twopi, "rydberg");
  seq.target("c", "rydberg");
  seq.add(pi, "rydberg");
  seq.align({"digital", "rydberg"});
  seq.add(ry, "digital");
  seq.measure(Basis::Digital);
  return seq;
}

/// CZ pulse train (pi on control, 2pi on target, pi on control) with
/// amplitudes set by the blockade radius `rb` at the peak.
inline Sequence cz(double rb) {
  Sequence seq(pair_register(), reference_device());
  seq.declare_channel("digital", "raman_local", "c");
  seq.declare_channel("rydberg", "rydberg_local", "c");
  const double omega = reference_device().rabi_from_blockade(rb);
  auto pi = Pulse::constant_detuning(Waveform::blackman_from_max_val(omega, kPi), 0.0, 0.0);
  auto twopi = Pulse::constant_detuning(Waveform::blackman_from_max_val(omega, kTwoPi), 0.0, 0.0);
  seq.add(pi, "rydberg");
  seq.target("t", "rydberg");
  seq.add(twopi, "rydberg");
  seq.target("c", "rydberg");
  seq.add(pi, "rydberg");
  return seq;
}

constexpr double kAfmU = kTwoPi;
constexpr double kAfmOmega = 2.3 * kTwoPi;
constexpr double kAfmDelta0 = -6 * kAfmU;

inline Register afm_register() {
  return Register::square(3, reference_device().rydberg_blockade_radius(kAfmU), "q");
}

/// Antiferromagnetic preparation on a 3x3 square: rise, detuning sweep to
/// `ratio` * U, fall.
inline Sequence afm(double ratio) {
  const double df = ratio * kAfmU;
  const auto rise_t = Nanoseconds(250), fall_t = Nanoseconds(500);
  const auto sweep_t = round_duration((df - kAfmDelta0) / (kTwoPi * 10) * 1000);
  Sequence seq(afm_register(), reference_device());
  seq.declare_channel("ising", "rydberg_global");
  seq.add(Pulse::constant_detuning(Waveform::ramp(rise_t, 0.0, kAfmOmega), kAfmDelta0, 0.0),
          "ising");
  if (sweep_t > 0) {
    seq.add(Pulse::constant_amplitude(kAfmOmega, Waveform::ramp(sweep_t, kAfmDelta0, df), 0.0),
            "ising");
  }
  seq.add(Pulse::constant_detuning(Waveform::ramp(fall_t, kAfmOmega, 0.0), df, 0.0), "ising");
  return seq;
}

inline Register mis_register() {
  return Register::from_coordinates({{0, 0}, {-4, -7}, {4, -7}, {8, 6}, {-8, 6}});
}

/// Parametrized two-layer QAOA blueprint on the 5-atom MIS instance.
inline Sequence mis_qaoa(std::size_t layers = 2) {
  Sequence seq(mis_register(), reference_device());
  seq.declare_channel("ch0", "rydberg_global");
  auto t = seq.declare_variable("t_list", layers);
  auto s = seq.declare_variable("s_list", layers);
  for (std::size_t i = 0; i < layers; ++i) {
    seq.add(PulseSpec::constant_pulse(1000 * t[i], 1.0, 0.0, 0.0), "ch0");
    seq.add(PulseSpec::constant_pulse(1000 * s[i], 1.0, 1.0, 0.0), "ch0");
  }
  seq.measure(Basis::GroundRydberg);
  return seq;
}

} // namespace fixtures
