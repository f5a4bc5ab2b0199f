#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "rydpulse/error.hpp"
#include "rydpulse/signal.hpp"

using namespace rydpulse;

TEST_CASE("constant and ramp samples") {
  auto c = Waveform::constant(3, 5.0);
  CHECK(std::vector<double>(c.samples().begin(), c.samples().end()) == std::vector<double>{5, 5, 5});
  auto r = Waveform::ramp(5, 0.0, 4.0);
  CHECK(std::vector<double>(r.samples().begin(), r.samples().end()) ==
        std::vector<double>{0, 1, 2, 3, 4});
  CHECK(Waveform::ramp(1, 3.0, 7.0).samples()[0] == 3.0);
}

TEST_CASE("integrals use the discrete sum") {
  CHECK(Waveform::constant(1000, kPi).integral() == doctest::Approx(kPi).epsilon(1e-14));
  // Trapezoid of a linear ramp coincides with the discrete sum of its samples.
  auto r = Waveform::ramp(1000, 0.0, 2.0);
  CHECK(r.integral() == doctest::Approx(1.0).epsilon(1e-12));
  auto s = r.samples();
  CHECK(r.integral() == doctest::Approx(std::accumulate(s.begin(), s.end(), 0.0) * 1e-3));
}

TEST_CASE("blackman matches a directly evaluated window") {
  auto wf = Waveform::blackman(200, kPi / 2);
  auto w = oracle::blackman_window(200);
  const double scale = (kPi / 2) / (std::accumulate(w.begin(), w.end(), 0.0) * 1e-3);
  for (int k = 0; k < 200; ++k) CHECK(wf.samples()[k] == doctest::Approx(w[k] * scale).epsilon(1e-11));
  CHECK(std::abs(wf.integral() - kPi / 2) < 1e-9 * kPi / 2);
  for (int k = 0; k < 200; ++k) CHECK(std::abs(wf.samples()[k] - wf.samples()[199 - k]) < 1e-12);

  // Continuous estimate area / (0.42 T) = 18.70; the discrete peak is higher
  // because the sum includes two zero endpoints.
  CHECK(kPi / 2 / (0.42 * 0.2) == doctest::Approx(18.70).epsilon(1e-3));
  CHECK(wf.max_value() == doctest::Approx(18.7934).epsilon(1e-4));
  CHECK(std::abs(wf.max_value() - 18.70) < 0.1);

  // An independent quadrature of the rendered samples recovers the area.
  std::vector<double> y(wf.samples().begin(), wf.samples().end());
  CHECK(oracle::simpson(y, 1e-3) == doctest::Approx(kPi / 2).epsilon(1e-3));
}

TEST_CASE("blackman_from_max_val picks the shortest admissible duration") {
  const double mv = 19.10672378540039;
  auto wf = Waveform::blackman_from_max_val(mv, kTwoPi);
  CHECK(std::ceil(kTwoPi / (0.42 * mv) * 1000) == 783);
  CHECK(wf.duration() == 784);
  CHECK(Waveform::blackman(783, kTwoPi).max_value() > mv);
  CHECK(wf.max_value() <= mv);
  CHECK(std::abs(wf.integral() - kTwoPi) < 1e-9 * kTwoPi);

  for (int d : {16, 100, 200, 501}) {
    auto w = Waveform::blackman_from_max_val(1.0, 0.42e-3 * d);
    CHECK(w.max_value() <= 1.0);
    CHECK(w.duration() >= d);
    CHECK(Waveform::blackman(w.duration() - 1, 0.42e-3 * d).max_value() > 1.0);
  }

  auto neg = Waveform::blackman_from_max_val(-5.0, -1.0);
  CHECK(neg.min_value() >= -5.0);
  CHECK(neg.integral() == doctest::Approx(-1.0));
  CHECK_THROWS_AS(Waveform::blackman_from_max_val(5.0, -1.0), Error);
}

TEST_CASE("waveform construction errors") {
  CHECK_THROWS_AS(Waveform::constant(0, 1.0), Error);
  CHECK_THROWS_AS(Waveform::ramp(-3, 0.0, 1.0), Error);
  CHECK_THROWS_AS(Waveform::arbitrary({}), Error);
  CHECK_THROWS_AS(Waveform::arbitrary({1.0, NAN}), Error);
  CHECK(Waveform::arbitrary({1.0, 2.0}).duration() == 2);
}

TEST_CASE("pulses") {
  auto half = Waveform::blackman(200, kPi / 2);
  auto ry = Pulse::constant_detuning(half, 0.0, -kPi / 2);
  CHECK(ry.duration() == 200);
  CHECK(ry.phase() == doctest::Approx(3 * kPi / 2));
  CHECK(ry.detuning().max_value() == 0.0);

  CHECK(Pulse::constant_pulse(100, 1.0, 0.0, 0.3 + kTwoPi).phase() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(Pulse::constant_pulse(100, 1.0, 0.0, 0.3) == Pulse::constant_pulse(100, 1.0, 0.0, 0.3));
  CHECK_THROWS_AS(Pulse(Waveform::constant(100, 1.0), Waveform::constant(99, 0.0), 0.0), Error);
  CHECK_THROWS_AS(Pulse::constant_detuning(Waveform::ramp(10, -1.0, 1.0), 0.0, 0.0), Error);
  auto p = Pulse::constant_amplitude(2.0, Waveform::ramp(10, -1.0, 1.0), 0.0);
  CHECK(p.amplitude().max_value() == 2.0);
  CHECK(p.with_phase_offset(kPi).phase() == doctest::Approx(kPi));
}

TEST_CASE("normalize_phase") {
  CHECK(normalize_phase(-kPi / 2) == doctest::Approx(3 * kPi / 2));
  CHECK(normalize_phase(kTwoPi) == 0.0);
  CHECK(normalize_phase(5 * kTwoPi + 1.0) == doctest::Approx(1.0));
}

TEST_CASE("round_duration") {
  CHECK(round_duration(1000 * 0.8) == 800);
  CHECK(round_duration(15.5) == 16);
  CHECK_THROWS_AS(round_duration(INFINITY), Error);
}

TEST_CASE("waveform specs resolve and serialise") {
  auto t = Expr::variable("t", 0);
  auto spec = PulseSpec::constant_pulse(1000 * Expr(t), 1.0, 0.0, 0.0);
  auto pulse = spec.resolve({{"t", {0.25}}});
  CHECK(pulse.duration() == 250);
  auto back = PulseSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  CHECK(back.resolve({{"t", {0.25}}}) == pulse);

  PulseSpec concrete(Pulse::constant_detuning(Waveform::blackman(200, 1.0), 0.5, 1.0));
  CHECK(PulseSpec::from_json(concrete.to_json()).resolve({}) == concrete.resolve({}));

  auto bm = WaveformSpec::blackman_from_max_val(19.10672378540039, kTwoPi);
  CHECK(bm.resolve({}).duration() == 784);
}
