#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rydpulse/emulator.hpp"

using namespace rydpulse;

namespace {

DriveSamples one_tick(std::size_t n, const std::set<Basis> &bases) {
  DriveSamples s;
  s.duration = 1;
  s.n_qubits = n;
  s.bases = bases;
  for (std::size_t q = 0; q < n; ++q) {
    for (auto b : bases) s.tracks[{q, b}] = DriveTrack{{0.0}, {0.0}, {0.0}, {0, 1}};
  }
  return s;
}

double max_abs(const Operator &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("level structure") {
  LevelStructure both({Basis::GroundRydberg, Basis::Digital}, 2);
  CHECK(both.label() == "rgh");
  CHECK(both.dimension() == 9);
  CHECK(both.index_of({Level::G, Level::H}) == 1 * 3 + 2);
  CHECK(both.level_of(5, 0) == Level::G);
  CHECK(both.level_of(5, 1) == Level::H);
  LevelStructure dig({Basis::Digital}, 3);
  CHECK(dig.label() == "gh");
  CHECK(dig.dimension() == 8);
  CHECK_FALSE(dig.has(Level::R));
  CHECK(LevelStructure({}, 1).label() == "rg");
}

TEST_CASE("measurement bits") {
  CHECK(measurement_bit(Level::R, Basis::GroundRydberg) == 1);
  CHECK(measurement_bit(Level::G, Basis::GroundRydberg) == 0);
  CHECK(measurement_bit(Level::H, Basis::GroundRydberg) == 0);
  CHECK(measurement_bit(Level::H, Basis::Digital) == 1);
  CHECK(measurement_bit(Level::R, Basis::Digital) == 0);
  CHECK(measurement_bit(Level::G, Basis::Digital) == 0);
}

TEST_CASE("hamiltonian matches the Kronecker-product construction") {
  const auto &dev = reference_device();
  Register reg({{"a", 0, 0}, {"b", 6.5, 1.0}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = one_tick(2, {Basis::GroundRydberg, Basis::Digital});
    std::vector<oracle::LocalDrive> ryd(2), dig(2);
    for (std::size_t q = 0; q < 2; ++q) {
      for (auto b : {Basis::GroundRydberg, Basis::Digital}) {
        auto &tr = s.tracks[{q, b}];
        tr.amplitude[0] = std::abs(u(rng));
        tr.detuning[0] = u(rng);
        tr.phase[0] = normalize_phase(u(rng));
        auto &d = b == Basis::GroundRydberg ? ryd[q] : dig[q];
        d = {tr.amplitude[0], tr.detuning[0], tr.phase[0]};
      }
    }
    LevelStructure ls(s.bases, 2);
    auto h = build_hamiltonian(s, reg, dev, ls, 0);
    auto ref = oracle::kron_hamiltonian("rgh", {{0, 0}, {6.5, 1.0}}, dev.c6(), ryd, dig);
    CHECK(max_abs(h - ref) < 1e-9 * std::max(1.0, max_abs(ref)));
    CHECK(max_abs(h - h.adjoint()) == 0.0);
  }
}

TEST_CASE("hamiltonian special cases") {
  const auto &dev = reference_device();
  Register pair({{"a", 0, 0}, {"b", 5, 0}});
  auto s = one_tick(2, {Basis::GroundRydberg});
  LevelStructure ls(s.bases, 2);
  auto h = build_hamiltonian(s, pair, dev, ls, 0);
  Operator expected = Operator::Zero(4, 4);
  expected(0, 0) = dev.c6() / std::pow(5.0, 6);
  CHECK(max_abs(h - expected) < 1e-9);

  Register solo({{"a", 0, 0}});
  auto one = one_tick(1, {Basis::GroundRydberg});
  one.tracks[{0, Basis::GroundRydberg}].amplitude[0] = kTwoPi;
  auto h1 = build_hamiltonian(one, solo, dev, LevelStructure(one.bases, 1), 0);
  Operator pi_sx = Operator::Zero(2, 2);
  pi_sx(0, 1) = pi_sx(1, 0) = kPi;
  CHECK(max_abs(h1 - pi_sx) < 1e-14);
  CHECK_THROWS_AS(build_hamiltonian(one, solo, dev, LevelStructure(one.bases, 1), 1), Error);
}

TEST_CASE("interpolated hamiltonian") {
  Sequence seq(Register({{"a", 0, 0}}), reference_device());
  seq.declare_channel("g", "rydberg_global");
  seq.add(Pulse::constant_amplitude(3.0, Waveform::ramp(101, 0.0, 10.0), 0.0), "g");
  auto s = sample_sequence(seq);
  LevelStructure ls(s.bases, 1);
  for (Nanoseconds t : {0, 37, 100}) {
    auto h = hamiltonian_at(s, seq.reg(), seq.device(), ls, double(t) + 0.5, 1.0);
    CHECK(max_abs(h - build_hamiltonian(s, seq.reg(), seq.device(), ls, t)) < 1e-12);
  }
  // Between sampled ticks the detuning is linear; rate 0.1 samples every 10 ticks.
  auto h = hamiltonian_at(s, seq.reg(), seq.device(), ls, 15.5, 0.1);
  CHECK(h(1, 1).real() == doctest::Approx(1.5 / 2.0).epsilon(1e-12));
  CHECK(max_abs(h - h.adjoint()) == 0.0);
}

TEST_CASE("resonant and detuned Rabi oscillations") {
  for (auto [omega, delta] : std::vector<std::pair<double, double>>{
           {kTwoPi, 0.0}, {1.7 * kTwoPi, 0.0}, {kTwoPi, 1.5 * kTwoPi}, {2.0, -3.0}}) {
    Sequence seq(Register({{"a", 0, 0}}), reference_device());
    seq.declare_channel("g", "rydberg_global");
    seq.add(Pulse::constant_pulse(1500, omega, delta, 0.4), "g");
    auto res = run(seq);
    LevelStructure ls({Basis::GroundRydberg}, 1);
    auto pr = res.expect({rydberg_occupation(ls, 0)})[0];
    double err = 0.0;
    for (std::size_t i = 0; i < pr.size(); ++i) {
      err = std::max(err, std::abs(pr[i] - oracle::rabi_population(omega, delta, res.times()[i])));
    }
    CHECK(err < 1e-6);
    CHECK(res.times().size() == 1501);
    CHECK(res.times().back() == doctest::Approx(1.5));
  }
}

TEST_CASE("piecewise-constant drives match exact exponentials") {
  Register reg({{"c", 0, 0}, {"t", 6, 0}});
  const auto &dev = reference_device();
  Sequence seq(reg, dev);
  seq.declare_channel("ryd", "rydberg_local", "c");
  seq.declare_channel("dig", "raman_local", "t");
  seq.add(Pulse::constant_pulse(300, 5.0, 2.0, 0.7), "ryd");
  seq.add(Pulse::constant_pulse(200, 4.0, -1.0, 1.3), "dig");
  seq.add(Pulse::constant_pulse(160, 3.0, 0.5, 0.0), "dig");

  const std::vector<std::array<double, 2>> pos{{0, 0}, {6, 0}};
  using oracle::LocalDrive;
  const LocalDrive off{};
  const LocalDrive p1{5.0, 2.0, 0.7}, p2{4.0, -1.0, 1.3}, p3{3.0, 0.5, 0.0};
  auto h_a = oracle::kron_hamiltonian("rgh", pos, dev.c6(), {p1, off}, {off, p2});
  auto h_b = oracle::kron_hamiltonian("rgh", pos, dev.c6(), {p1, off}, {off, p3});
  auto h_c = oracle::kron_hamiltonian("rgh", pos, dev.c6(), {off, off}, {off, p3});
  oracle::Vector psi = oracle::kron_state("rgh", "gg");
  psi = oracle::unitary_eig(h_a, 0.2) * psi;
  psi = oracle::unitary_eig(h_b, 0.1) * psi;
  psi = oracle::unitary_eig(h_c, 0.06) * psi;

  for (double rate : {1.0, 0.1}) {
    auto res = run(seq, {rate});
    CHECK((res.states().back() - psi).norm() < 1e-8);
  }
  // Same check through the Taylor-series exponential.
  oracle::Vector phi = oracle::kron_state("rgh", "gg");
  const oracle::Complex mi(0.0, -1.0);
  phi = oracle::expm(mi * 0.2 * h_a) * phi;
  phi = oracle::expm(mi * 0.1 * h_b) * phi;
  phi = oracle::expm(mi * 0.06 * h_c) * phi;
  CHECK((phi - psi).norm() < 1e-10);
}

TEST_CASE("pulse phase equals conjugation by z rotations") {
  const double theta = 1.1, phi = 0.9;
  Sequence seq(Register({{"q", 0, 0}}), reference_device());
  seq.declare_channel("dig", "raman_local", "q");
  seq.phase_shift(phi, {"q"});
  seq.add(Pulse::constant_detuning(Waveform::blackman(300, theta), 0.0, 0.0), "dig");

  LevelStructure ls({Basis::Digital}, 1);
  StateVector in(2);
  in << Complex(0.6, 0.1), Complex(-0.3, 0.734846922834953);
  in.normalize();
  SimConfig cfg;
  cfg.initial_state = in;
  auto out = run(seq, cfg).states().back();

  // Basis (g, h); sz = |h><h| - |g><g|.
  oracle::Matrix sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << -1, 0, 0, 1;
  const oracle::Complex mi(0.0, -1.0);
  auto rz = [&](double a) { return oracle::expm(mi * (a / 2) * sz); };
  oracle::Matrix u = rz(-phi) * oracle::expm(mi * (theta / 2) * sx) * rz(phi);
  const double fidelity = std::norm((u * in).dot(out));
  CHECK(fidelity > 1 - 1e-6);
}

TEST_CASE("expectation values and reduction") {
  auto seq = fixtures::cz(10.0);
  auto res = run(seq, {0.1});
  const auto d = res.structure().dimension();
  auto id = res.expect({Operator::Identity(Eigen::Index(d), Eigen::Index(d))})[0];
  for (double v : id) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  const auto &psi0 = res.states().front();
  CHECK(res.expect({psi0 * psi0.adjoint()})[0][0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(res.expect({Operator::Identity(2, 2)}), SimulationError);

  auto reduced = res.final_state(Basis::GroundRydberg);
  CHECK(reduced.size() == 4);
  CHECK(reduced.norm() == doctest::Approx(1.0));
  // The default state |gg> lives in the kept subspace at every step.
  CHECK(std::abs(reduced[3]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(res.final_state(Basis::Digital, 0.0), SimulationError);
}

TEST_CASE("leaked populations block reduction") {
  Sequence seq(Register({{"q", 0, 0}}), reference_device());
  seq.declare_channel("ryd", "rydberg_local", "q");
  seq.declare_channel("dig", "raman_local", "q");
  seq.add(Pulse::constant_detuning(Waveform::blackman(200, kPi / 2), 0.0, 0.0), "ryd");
  auto res = run(seq);
  CHECK_THROWS_AS(res.final_state(Basis::Digital), SimulationError);
  CHECK_NOTHROW(res.final_state(Basis::Digital, 0.6));
  CHECK(res.final_state().size() == 3);
}

TEST_CASE("sampling follows the measurement table") {
  Sequence seq(fixtures::pair_register(), reference_device());
  seq.declare_channel("ryd", "rydberg_local", "c");
  seq.declare_channel("dig", "raman_local", "c");
  seq.delay(50, "ryd");
  LevelStructure ls(seq.addressed_bases(), 2);

  SimConfig cfg;
  cfg.initial_state = product_state(ls, {Level::H, Level::H});
  auto res = run(seq, cfg);
  CHECK(res.sample_final_state(500, Basis::Digital, 1) == Counts{{"11", 500}});
  CHECK(res.sample_final_state(500, Basis::GroundRydberg, 1) == Counts{{"00", 500}});
  CHECK_THROWS_AS(res.sample_final_state(10, std::nullopt, 1), SimulationError);

  cfg.initial_state = product_state(ls, {Level::R, Level::G});
  res = run(seq, cfg);
  CHECK(res.sample_final_state(100, Basis::Digital, 1) == Counts{{"00", 100}});
  CHECK(res.sample_final_state(100, Basis::GroundRydberg, 1) == Counts{{"10", 100}});
}

TEST_CASE("multinomial sampling") {
  Distribution d{{"00", 0.5}, {"01", 0.2}, {"11", 0.3}};
  auto a = sample_distribution(d, 100000, 3);
  auto b = sample_distribution(d, 100000, 3);
  CHECK(a == b);
  std::int64_t total = 0;
  for (const auto &[k, v] : a) total += v;
  CHECK(total == 100000);
  for (const auto &[k, p] : d) {
    const double sigma = std::sqrt(100000 * p * (1 - p));
    CHECK(std::abs(double(a[k]) - 100000 * p) < 4 * sigma);
  }
  CHECK(sample_distribution(d, 100000, 4) != a);
  CHECK_THROWS_AS(sample_distribution(d, 0, 1), Error);
}

TEST_CASE("run configuration errors") {
  auto seq = fixtures::cz(10.0);
  CHECK_THROWS_AS(run(seq, {0.0}), SimulationError);
  CHECK_THROWS_AS(run(seq, {1.5}), SimulationError);
  SimConfig small;
  small.max_dimension = 8;
  CHECK_THROWS_AS(run(seq, small), SimulationError);
  SimConfig bad;
  bad.initial_state = StateVector::Ones(9);
  CHECK_THROWS_AS(run(seq, bad), SimulationError);
  bad.initial_state = StateVector::Ones(4) / 2.0;
  CHECK_THROWS_AS(run(seq, bad), SimulationError);
}

TEST_CASE("results json") {
  Sequence seq(Register({{"a", 0, 0}}), reference_device());
  seq.declare_channel("g", "rydberg_global");
  seq.add(Pulse::constant_pulse(100, kTwoPi, 0.0, 0.0), "g");
  seq.measure(Basis::GroundRydberg);
  auto res = run(seq, {0.05});
  auto j = res.to_json();
  CHECK(j["levels"] == "rg");
  CHECK(j["n_atoms"] == 1);
  CHECK(j["times_us"].size() == 6);
  CHECK(j["states"][0][1][0] == 1.0);
  CHECK(j["states"][0][1][1] == 0.0);
  CHECK(j["measurement_basis"] == "ground-rydberg");
  // Half a 2pi-per-us oscillation in 0.1 us: P(r) = sin^2(pi/10).
  CHECK(std::norm(res.states().back()[0]) == doctest::Approx(std::pow(std::sin(kPi / 10), 2)));
}
