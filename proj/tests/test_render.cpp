#include <doctest.h>

#include "fixtures.hpp"
#include "rydpulse/render.hpp"

using namespace rydpulse;

TEST_CASE("text rendering is exact") {
  Sequence seq(fixtures::pair_register(), reference_device());
  seq.declare_channel("ryd", "rydberg_local", "c");
  seq.add(Pulse::constant_pulse(100, 1.0, 0.0, 0.0), "ryd");
  seq.target("t", "ryd");
  seq.delay(30, "ryd");
  seq.add(Pulse::constant_detuning(Waveform::blackman(200, kPi), -1.5, kPi / 2), "ryd");
  seq.measure(Basis::GroundRydberg);
  const std::string expected =
      "sequence duration=550 ns measurement=ground-rydberg\n"
      "channel ryd id=rydberg_local basis=ground-rydberg addressing=Local\n"
      "  0 0 target c\n"
      "  0 100 pulse amp=constant(1) det=constant(0) phase=0\n"
      "  100 320 target t\n"
      "  320 350 delay\n"
      "  350 550 pulse amp=blackman(3.14159) det=constant(-1.5) phase=1.5708\n";
  CHECK(render_text(seq) == expected);
}

TEST_CASE("walkthrough drawing") {
  auto seq = fixtures::bell();
  auto d = draw_data(seq);
  CHECK(d.duration == 2444);
  REQUIRE(d.channels.size() == 2);
  CHECK(d.measurement_basis == Basis::Digital);
  for (const auto &ch : d.channels) {
    CHECK(ch.amplitude.size() == 2444);
    for (double v : ch.detuning) CHECK(v == 0.0);
  }
  const auto &ryd = d.channels[1];
  CHECK(ryd.name == "rydberg");
  REQUIRE(ryd.targets.size() == 3);
  CHECK(ryd.targets[1].time == 820);
  CHECK(ryd.targets[1].qubits == std::vector<std::string>{"t"});

  const auto text = render_text(seq);
  std::size_t slot_lines = 0;
  for (const auto &ch : seq.channels()) slot_lines += ch.slots.size();
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 1 + seq.channels().size() + slot_lines);
  CHECK(text.find("measurement=digital") != std::string::npos);

  const auto svg = render_svg(seq);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("measured in digital") != std::string::npos);
}

TEST_CASE("empty sequence") {
  Sequence seq(fixtures::pair_register(), reference_device());
  seq.declare_channel("ryd", "rydberg_local");
  auto d = draw_data(seq);
  CHECK(d.duration == 0);
  REQUIRE(d.channels.size() == 1);
  CHECK(d.channels[0].amplitude.empty());
  CHECK(render_text(seq) ==
        "sequence duration=0 ns measurement=none\n"
        "channel ryd id=rydberg_local basis=ground-rydberg addressing=Local\n");
  CHECK_NOTHROW(render_svg(seq));
}
