#include <doctest.h>

#include <cmath>

#include "rydpulse/device.hpp"

using namespace rydpulse;

namespace {

bool has(const std::vector<Violation> &vs, const std::string &constraint) {
  for (const auto &v : vs) {
    if (v.constraint == constraint) return true;
  }
  return false;
}

} // namespace

TEST_CASE("blockade conversions") {
  const auto &dev = reference_device();
  CHECK(dev.rabi_from_blockade(8.0) == doctest::Approx(19.10672378540039).epsilon(1e-13));
  CHECK(dev.rydberg_blockade_radius(19.10672378540039) == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(dev.rydberg_blockade_radius(dev.c6()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dev.rabi_from_blockade(1.0) == doctest::Approx(dev.c6()).epsilon(1e-14));
  CHECK(dev.c6() == doctest::Approx(5008713.0).epsilon(1e-12));
  // (c6 / 2pi)^(1/6)
  CHECK(dev.rydberg_blockade_radius(kTwoPi) == doctest::Approx(9.6293).epsilon(1e-4));
  CHECK(std::abs(dev.rydberg_blockade_radius(kTwoPi) - 9.63) < 5e-3);

  double prev = INFINITY;
  for (double r = 0.5; r < 40.0; r *= 1.37) {
    const double w = dev.rabi_from_blockade(r);
    CHECK(std::abs(dev.rydberg_blockade_radius(w) - r) < 1e-9 * r);
    CHECK(w < prev);
    prev = w;
  }
  CHECK_THROWS_AS(dev.rabi_from_blockade(0.0), Error);
  CHECK_THROWS_AS(dev.rydberg_blockade_radius(-1.0), Error);
}

TEST_CASE("pulse validation") {
  const auto &dev = reference_device();
  auto afm = Pulse::constant_detuning(Waveform::ramp(250, 0.0, 2.3 * kTwoPi), -6 * kTwoPi, 0.0);
  CHECK(dev.validate_pulse("rydberg_global", afm).empty());

  auto loud = Pulse::constant_pulse(100, 10 * 2.5 * kTwoPi, 0.0, 0.0);
  CHECK(has(dev.validate_pulse("rydberg_global", loud), "max_amplitude"));

  auto twopi = Pulse::constant_detuning(
      Waveform::blackman_from_max_val(dev.rabi_from_blockade(8.0), kTwoPi), 0.0, 0.0);
  CHECK(dev.validate_pulse("rydberg_local", twopi).empty());

  auto detuned = Pulse::constant_pulse(100, 1.0, 30 * kTwoPi, 0.0);
  CHECK(has(dev.validate_pulse("rydberg_global", detuned), "detuning_range"));
  auto short_pulse = Pulse::constant_pulse(8, 1.0, 0.0, 0.0);
  CHECK(has(dev.validate_pulse("raman_local", short_pulse), "min_duration"));

  CHECK(dev.validate_pulse("rydberg_global", loud) == dev.validate_pulse("rydberg_global", loud));
  CHECK_THROWS_AS(dev.validate_pulse("mw_global", loud), Error);
}

TEST_CASE("device json round trip") {
  const auto &dev = reference_device();
  CHECK(Device::from_json(dev.to_json()) == dev);
  CHECK(builtin_device("reference").has_value());
  CHECK_FALSE(builtin_device("other").has_value());
}

TEST_CASE("inconsistent devices are rejected") {
  ChannelSpec bad{"x", Addressing::Global, Basis::GroundRydberg, -1.0, -1.0, 1.0, 16, 0, 0};
  CHECK_THROWS_AS(bad.check(), ValidationError);
  ChannelSpec ok{"x", Addressing::Global, Basis::GroundRydberg, 1.0, -1.0, 1.0, 16, 0, 0};
  CHECK_THROWS_AS(Device("d", 1.0, 4.0, 50.0, 10, {ok, ok}, {Basis::GroundRydberg}), ValidationError);
  CHECK_THROWS_AS(Device("d", 1.0, 0.0, 50.0, 10, {ok}, {Basis::GroundRydberg}), ValidationError);
}

TEST_CASE("enum names") {
  CHECK(basis_from_string("digital") == Basis::Digital);
  CHECK(std::string(to_string(Basis::GroundRydberg)) == "ground-rydberg");
  CHECK(addressing_from_string(to_string(Addressing::Local)) == Addressing::Local);
  CHECK_THROWS_AS(basis_from_string("xy"), Error);
}
