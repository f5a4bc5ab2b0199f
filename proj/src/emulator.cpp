#include "rydpulse/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace rydpulse {

namespace {

// Largest |H| h per Magnus step while the drives vary.
double magnus_step_norm = 0.5;

char level_char(Level l) {
  switch (l) {
  case Level::R: return 'r';
  case Level::G: return 'g';
  case Level::H: return 'h';
  }
  return '?';
}

// Upper (b) and lower (a) level of the transition addressed in `basis`.
std::pair<Level, Level> transition_levels(Basis basis) {
  return basis == Basis::GroundRydberg ? std::pair{Level::R, Level::G}
                                       : std::pair{Level::H, Level::G};
}

std::vector<Level> basis_levels(Basis basis) {
  return basis == Basis::GroundRydberg ? std::vector{Level::R, Level::G}
                                       : std::vector{Level::G, Level::H};
}

// Averaged drive of one (qubit, basis) track over a window.
struct DriveValue {
  Complex coupling; // mean of amp * exp(-i phase)
  double detuning = 0.0;
};

// H = diag + sum over atoms of a local off-diagonal block. Kept in this
// factored form so that H|psi> costs O(dim * atoms).
class StepHamiltonian {
public:
  StepHamiltonian(Eigen::VectorXd diag, std::vector<Operator> offdiag,
                  const std::vector<std::size_t> &stride, std::size_t levels)
      : diag_(std::move(diag)), offdiag_(std::move(offdiag)), stride_(stride), levels_(levels) {
    bound_ = diag_.size() ? diag_.cwiseAbs().maxCoeff() : 0.0;
    for (const auto &h : offdiag_) bound_ += h.cwiseAbs().colwise().sum().maxCoeff();
  }

  // y = H x
  void apply(const StateVector &x, StateVector &y) const {
    y = diag_.cast<Complex>().cwiseProduct(x);
    const auto dim = std::size_t(x.size());
    for (std::size_t i = 0; i < offdiag_.size(); ++i) {
      const auto &h = offdiag_[i];
      if (h.isZero(0.0)) continue;
      const std::size_t st = stride_[i];
      for (std::size_t s = 0; s < dim; ++s) {
        const std::size_t li = (s / st) % levels_;
        const std::size_t base = s - li * st;
        const Complex xs = x[Eigen::Index(s)];
        if (xs == Complex{}) continue;
        for (std::size_t lp = 0; lp < levels_; ++lp) {
          if (lp == li) continue;
          const Complex v = h(Eigen::Index(lp), Eigen::Index(li));
          if (v != Complex{}) y[Eigen::Index(base + lp * st)] += v * xs;
        }
      }
    }
  }

  double bound() const { return bound_; }

  Operator dense() const {
    const auto dim = diag_.size();
    Operator H(dim, dim);
    StateVector e = StateVector::Zero(dim);
    StateVector col(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      e[k] = 1.0;
      apply(e, col);
      H.col(k) = col;
      e[k] = 0.0;
    }
    return H;
  }

  // psi <- exp(-i H dt) psi by a truncated Taylor series on substeps with
  // |H| tau <= 1.
  void propagate(StateVector &psi, double dt) const {
    const auto substeps = std::max<long long>(1, std::llround(std::ceil(bound_ * dt)));
    const double tau = dt / double(substeps);
    StateVector term(psi.size());
    StateVector next(psi.size());
    for (long long m = 0; m < substeps; ++m) {
      term = psi;
      StateVector acc = psi;
      const double scale = psi.squaredNorm();
      for (int k = 1; k <= 60; ++k) {
        apply(term, next);
        term = next * Complex(0.0, -tau / double(k));
        acc += term;
        if (term.squaredNorm() <= 1e-34 * scale) break;
      }
      psi = std::move(acc);
    }
  }

private:
  Eigen::VectorXd diag_;
  std::vector<Operator> offdiag_;
  const std::vector<std::size_t> &stride_;
  std::size_t levels_;
  double bound_ = 0.0;
};

class HamiltonianBuilder {
public:
  HamiltonianBuilder(const DriveSamples &samples, const Register &reg, const Device &device,
                     const LevelStructure &structure)
      : samples_(samples), structure_(structure),
        interaction_(Eigen::VectorXd::Zero(Eigen::Index(structure.dimension()))) {
    const std::size_t n = structure.n_atoms();
    stride_.assign(n, 1);
    for (std::size_t i = n; i-- > 1;) {
      stride_[i - 1] = stride_[i] * structure.levels_per_atom();
    }
    if (structure.has(Level::R) && n > 1) {
      const std::size_t r = structure.local_index(Level::R);
      for (std::size_t s = 0; s < structure.dimension(); ++s) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (digit(s, i) != r) continue;
          for (std::size_t j = i + 1; j < n; ++j) {
            if (digit(s, j) != r) continue;
            const double d = reg.distance(i, j);
            const double d3 = d * d * d;
            e += device.c6() / (d3 * d3);
          }
        }
        interaction_[Eigen::Index(s)] = e;
      }
    }
  }

  /// Drive values of every track at one tick.
  std::vector<DriveValue> drives_at(Nanoseconds tick) const {
    std::vector<DriveValue> out;
    out.reserve(samples_.tracks.size());
    const auto t = static_cast<std::size_t>(tick);
    for (const auto &[key, tr] : samples_.tracks) {
      DriveValue v;
      if (tr.amplitude[t] != 0.0) v.coupling = tr.amplitude[t] * std::polar(1.0, -tr.phase[t]);
      v.detuning = tr.detuning[t];
      out.push_back(v);
    }
    return out;
  }

  StepHamiltonian build(const std::vector<DriveValue> &drives) const {
    const std::size_t n = structure_.n_atoms();
    const auto d = Eigen::Index(structure_.levels_per_atom());

    std::vector<Operator> offdiag(n, Operator::Zero(d, d));
    Eigen::MatrixXd local_diag = Eigen::MatrixXd::Zero(Eigen::Index(n), d);
    std::size_t k = 0;
    for (const auto &[key, tr] : samples_.tracks) {
      const auto &v = drives[k++];
      const auto [upper, lower] = transition_levels(key.second);
      const auto b = Eigen::Index(structure_.local_index(upper));
      const auto a = Eigen::Index(structure_.local_index(lower));
      const auto q = Eigen::Index(key.first);
      offdiag[key.first](a, b) += 0.5 * v.coupling;
      offdiag[key.first](b, a) += 0.5 * std::conj(v.coupling);
      local_diag(q, b) -= 0.5 * v.detuning;
      local_diag(q, a) += 0.5 * v.detuning;
    }

    Eigen::VectorXd diag = interaction_;
    if (!local_diag.isZero(0.0)) {
      for (std::size_t s = 0; s < structure_.dimension(); ++s) {
        for (std::size_t i = 0; i < n; ++i) {
          diag[Eigen::Index(s)] += local_diag(Eigen::Index(i), Eigen::Index(digit(s, i)));
        }
      }
    }
    return StepHamiltonian(std::move(diag), std::move(offdiag), stride_,
                           structure_.levels_per_atom());
  }

private:
  std::size_t digit(std::size_t s, std::size_t atom) const {
    return (s / stride_[atom]) % structure_.levels_per_atom();
  }

  const DriveSamples &samples_;
  const LevelStructure &structure_;
  std::vector<std::size_t> stride_;
  Eigen::VectorXd interaction_;
};

// Drive coefficients as functions of time. Each track is split at the
// edges of its pulse slots; inside a segment the drives are sampled at its
// first and last tick and every `step` ticks, each sample sits at the
// centre of its tick, and values are linearly interpolated in between and
// held up to the segment edges.
class DriveSchedule {
public:
  DriveSchedule(const DriveSamples &samples, Nanoseconds step) {
    for (const auto &[key, tr] : samples.tracks) {
      std::set<Nanoseconds> edges(tr.edges.begin(), tr.edges.end());
      edges.insert(0);
      edges.insert(samples.duration);
      std::vector<Segment> segs;
      for (auto it = edges.begin(); std::next(it) != edges.end(); ++it) {
        const Nanoseconds a = *it;
        const Nanoseconds b = *std::next(it);
        Segment seg{a, b, {}, {}};
        std::set<Nanoseconds> ticks{a, b - 1};
        for (Nanoseconds t = (a + step - 1) / step * step; t < b; t += step) ticks.insert(t);
        for (auto t : ticks) {
          const auto k = static_cast<std::size_t>(t);
          DriveValue v;
          if (tr.amplitude[k] != 0.0) v.coupling = tr.amplitude[k] * std::polar(1.0, -tr.phase[k]);
          v.detuning = tr.detuning[k];
          seg.nodes.push_back(double(t) + 0.5);
          seg.values.push_back(v);
          breaks_.insert(double(t) + 0.5);
        }
        breaks_.insert(double(a));
        segs.push_back(std::move(seg));
      }
      tracks_.push_back(std::move(segs));
    }
    breaks_.insert(double(samples.duration));
  }

  /// Times (ns) between which every drive is linear.
  const std::set<double> &breaks() const { return breaks_; }

  std::vector<DriveValue> at(double t) const {
    std::vector<DriveValue> out(tracks_.size());
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      const auto &segs = tracks_[i];
      auto it = std::upper_bound(segs.begin(), segs.end(), t,
                                 [](double x, const Segment &s) { return x < double(s.start); });
      if (it == segs.begin()) continue;
      const Segment &seg = *std::prev(it);
      if (t >= double(seg.end) && std::next(std::prev(it)) != segs.end()) continue;
      out[i] = seg.value(t);
    }
    return out;
  }

  static std::vector<DriveValue> mix(double a, const std::vector<DriveValue> &x, double b,
                                     const std::vector<DriveValue> &y) {
    std::vector<DriveValue> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i].coupling = a * x[i].coupling + b * y[i].coupling;
      out[i].detuning = a * x[i].detuning + b * y[i].detuning;
    }
    return out;
  }

private:
  struct Segment {
    Nanoseconds start;
    Nanoseconds end;
    std::vector<double> nodes;
    std::vector<DriveValue> values;

    DriveValue value(double t) const {
      if (t <= nodes.front()) return values.front();
      if (t >= nodes.back()) return values.back();
      const auto k = std::size_t(std::upper_bound(nodes.begin(), nodes.end(), t) - nodes.begin());
      const double w = (t - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
      return {(1.0 - w) * values[k - 1].coupling + w * values[k].coupling,
              (1.0 - w) * values[k - 1].detuning + w * values[k].detuning};
    }
  };

  std::vector<std::vector<Segment>> tracks_;
  std::set<double> breaks_;
};

bool same_drives(const std::vector<DriveValue> &x, const std::vector<DriveValue> &y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].coupling != y[i].coupling || x[i].detuning != y[i].detuning) return false;
  }
  return true;
}

// Fourth-order commutator-free Magnus steps over [a, b] (ns), on which
// every drive is linear in time. H is affine in the drives, so each
// exponent w1 H(t1) + w2 H(t2) equals H(2 w1 D(t1) + 2 w2 D(t2)) / 2.
void integrate(const HamiltonianBuilder &builder, const DriveSchedule &sched, double a, double b,
               StateVector &psi) {
  static const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  static const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  static const double w1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
  static const double w2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

  const auto first = sched.at(a + c1 * (b - a));
  const auto second = sched.at(a + c2 * (b - a));
  if (same_drives(first, second)) {
    builder.build(first).propagate(psi, (b - a) * kTickUs);
    return;
  }
  const double bound = std::max(builder.build(first).bound(), builder.build(second).bound());
  const auto n = std::max<long long>(
      1, std::llround(std::ceil((b - a) * kTickUs * bound / magnus_step_norm)));
  const double h = (b - a) / double(n);
  for (long long k = 0; k < n; ++k) {
    const double t = a + double(k) * h;
    const auto d1 = sched.at(t + c1 * h);
    const auto d2 = sched.at(t + c2 * h);
    builder.build(DriveSchedule::mix(2 * w2, d1, 2 * w1, d2)).propagate(psi, 0.5 * h * kTickUs);
    builder.build(DriveSchedule::mix(2 * w1, d1, 2 * w2, d2)).propagate(psi, 0.5 * h * kTickUs);
  }
}

} // namespace

// -- LevelStructure -----------------------------------------------------------

LevelStructure::LevelStructure(const std::set<Basis> &bases, std::size_t n_atoms)
    : n_atoms_(n_atoms) {
  std::set<Level> lv;
  for (auto b : bases) {
    for (auto l : basis_levels(b)) lv.insert(l);
  }
  if (lv.empty()) lv = {Level::R, Level::G};
  levels_.assign(lv.begin(), lv.end());
  dimension_ = 1;
  for (std::size_t i = 0; i < n_atoms_; ++i) dimension_ *= levels_.size();
}

bool LevelStructure::has(Level l) const {
  return std::find(levels_.begin(), levels_.end(), l) != levels_.end();
}

std::size_t LevelStructure::local_index(Level l) const {
  auto it = std::find(levels_.begin(), levels_.end(), l);
  if (it == levels_.end()) {
    throw SimulationError(std::string("level '") + level_char(l) + "' is not part of the system");
  }
  return std::size_t(it - levels_.begin());
}

Level LevelStructure::level_of(std::size_t index, std::size_t atom) const {
  const std::size_t d = levels_.size();
  for (std::size_t i = n_atoms_ - 1; i > atom; --i) index /= d;
  return levels_[index % d];
}

std::size_t LevelStructure::index_of(const std::vector<Level> &levels) const {
  if (levels.size() != n_atoms_) throw Error("index_of: wrong number of atoms");
  std::size_t idx = 0;
  for (auto l : levels) idx = idx * levels_.size() + local_index(l);
  return idx;
}

std::string LevelStructure::label() const {
  std::string s;
  for (auto l : levels_) s += level_char(l);
  return s;
}

// -- helpers ----------------------------------------------------------------------

int measurement_bit(Level level, Basis basis) {
  if (basis == Basis::GroundRydberg) return level == Level::R ? 1 : 0;
  return level == Level::H ? 1 : 0;
}

StateVector product_state(const LevelStructure &structure, const std::vector<Level> &levels) {
  StateVector psi = StateVector::Zero(Eigen::Index(structure.dimension()));
  psi[Eigen::Index(structure.index_of(levels))] = 1.0;
  return psi;
}

Operator rydberg_occupation(const LevelStructure &structure, std::size_t atom) {
  const auto dim = Eigen::Index(structure.dimension());
  Operator op = Operator::Zero(dim, dim);
  for (std::size_t s = 0; s < structure.dimension(); ++s) {
    if (structure.level_of(s, atom) == Level::R) op(Eigen::Index(s), Eigen::Index(s)) = 1.0;
  }
  return op;
}

Counts sample_distribution(const Distribution &dist, std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw Error("n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  Counts counts;
  double remaining_mass = 0.0;
  for (const auto &[k, p] : dist) remaining_mass += std::max(0.0, p);
  std::int64_t remaining = n_samples;
  for (auto it = dist.begin(); it != dist.end() && remaining > 0; ++it) {
    const double p = std::max(0.0, it->second);
    std::int64_t k = 0;
    if (std::next(it) == dist.end() || p >= remaining_mass) {
      k = remaining;
    } else if (p > 0.0) {
      std::binomial_distribution<std::int64_t> binom(remaining,
                                                     std::clamp(p / remaining_mass, 0.0, 1.0));
      k = binom(rng);
    }
    remaining_mass -= p;
    remaining -= k;
    if (k > 0) counts[it->first] += k;
  }
  return counts;
}

// -- Hamiltonian --------------------------------------------------------------------

Operator build_hamiltonian(const DriveSamples &samples, const Register &reg, const Device &device,
                           const LevelStructure &structure, Nanoseconds tick) {
  HamiltonianBuilder builder(samples, reg, device, structure);
  if (samples.duration == 0 && tick == 0) {
    return builder.build(std::vector<DriveValue>(samples.tracks.size())).dense();
  }
  if (tick < 0 || tick >= samples.duration) {
    throw Error("build_hamiltonian: tick outside the sequence");
  }
  return builder.build(builder.drives_at(tick)).dense();
}

Operator hamiltonian_at(const DriveSamples &samples, const Register &reg, const Device &device,
                        const LevelStructure &structure, double time_ns, double sampling_rate) {
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0)) {
    throw SimulationError("sampling_rate must be in (0, 1]");
  }
  HamiltonianBuilder builder(samples, reg, device, structure);
  const DriveSchedule sched(samples, std::max<Nanoseconds>(1, std::llround(1.0 / sampling_rate)));
  return builder.build(sched.at(time_ns)).dense();
}

// -- run -------------------------------------------------------------------------------

SimResults run(const Sequence &seq, const SimConfig &config) {
  if (!(config.sampling_rate > 0.0 && config.sampling_rate <= 1.0)) {
    throw SimulationError("sampling_rate must be in (0, 1]");
  }
  const auto samples = sample_sequence(seq);
  LevelStructure structure(samples.bases, seq.reg().size());
  if (structure.dimension() > config.max_dimension) {
    throw SimulationError("Hilbert space dimension " + std::to_string(structure.dimension()) +
                          " exceeds the cap of " + std::to_string(config.max_dimension));
  }

  StateVector psi;
  if (config.initial_state) {
    psi = *config.initial_state;
    if (std::size_t(psi.size()) != structure.dimension()) {
      throw SimulationError("initial state has dimension " + std::to_string(psi.size()) +
                            ", expected " + std::to_string(structure.dimension()));
    }
    if (std::abs(psi.norm() - 1.0) > 1e-12) throw SimulationError("initial state is not normalized");
  } else {
    psi = product_state(structure, std::vector<Level>(structure.n_atoms(), Level::G));
  }

  const auto step = std::max<Nanoseconds>(1, std::llround(1.0 / config.sampling_rate));
  HamiltonianBuilder builder(samples, seq.reg(), seq.device(), structure);

  const DriveSchedule sched(samples, step);

  // Recording times, then everything the integrator must stop at.
  std::vector<double> marks;
  for (Nanoseconds t = step; t < samples.duration; t += step) marks.push_back(double(t));
  if (samples.duration > 0) marks.push_back(double(samples.duration));
  std::set<double> cuts(sched.breaks().begin(), sched.breaks().end());
  cuts.insert(marks.begin(), marks.end());

  std::vector<double> times{0.0};
  std::vector<StateVector> states{psi};
  double prev = 0.0;
  std::size_t next_mark = 0;
  for (double cut : cuts) {
    if (cut > samples.duration) break;
    if (cut > prev) integrate(builder, sched, prev, cut, psi);
    prev = std::max(prev, cut);
    if (next_mark < marks.size() && cut == marks[next_mark]) {
      times.push_back(cut * kTickUs);
      states.push_back(psi);
      ++next_mark;
    }
  }
  return SimResults(structure, std::move(times), std::move(states), seq.measurement_basis());
}

// -- SimResults ---------------------------------------------------------------------------

SimResults::SimResults(LevelStructure structure, std::vector<double> times_us,
                       std::vector<StateVector> states, std::optional<Basis> measurement_basis)
    : structure_(std::move(structure)), times_(std::move(times_us)), states_(std::move(states)),
      measurement_basis_(measurement_basis) {
  if (states_.empty() || states_.size() != times_.size()) {
    throw SimulationError("results need one state per recorded time");
  }
}

std::vector<std::vector<double>> SimResults::expect(const std::vector<Operator> &operators) const {
  std::vector<std::vector<double>> out;
  for (const auto &op : operators) {
    if (std::size_t(op.rows()) != structure_.dimension() ||
        std::size_t(op.cols()) != structure_.dimension()) {
      throw SimulationError("operator dimension does not match the system (" +
                            std::to_string(structure_.dimension()) + ")");
    }
    std::vector<double> series;
    series.reserve(states_.size());
    for (const auto &psi : states_) {
      series.push_back(psi.dot(op * psi).real());
    }
    out.push_back(std::move(series));
  }
  return out;
}

StateVector SimResults::final_state(std::optional<Basis> reduce_to, double tolerance) const {
  const StateVector &psi = states_.back();
  if (!reduce_to) return psi;
  const auto keep = basis_levels(*reduce_to);
  for (auto l : keep) {
    if (!structure_.has(l)) {
      throw SimulationError(std::string("cannot reduce to basis '") + to_string(*reduce_to) +
                            "': the system has no '" + level_char(l) + "' level");
    }
  }
  if (structure_.levels() == keep) return psi;

  const std::size_t n = structure_.n_atoms();
  StateVector out = StateVector::Zero(Eigen::Index(std::size_t{1} << n));
  double discarded = 0.0;
  for (std::size_t s = 0; s < structure_.dimension(); ++s) {
    std::size_t reduced = 0;
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) {
      const Level l = structure_.level_of(s, i);
      if (l == keep[0]) reduced = reduced << 1;
      else if (l == keep[1]) reduced = (reduced << 1) | 1;
      else inside = false;
    }
    if (inside) out[Eigen::Index(reduced)] = psi[Eigen::Index(s)];
    else discarded += std::norm(psi[Eigen::Index(s)]);
  }
  if (discarded > tolerance) {
    throw SimulationError("reduction to '" + std::string(to_string(*reduce_to)) +
                          "' discards population " + std::to_string(discarded) +
                          " above tolerance " + std::to_string(tolerance));
  }
  return out / out.norm();
}

Basis SimResults::resolve_basis(std::optional<Basis> basis) const {
  if (basis) return *basis;
  if (measurement_basis_) return *measurement_basis_;
  throw SimulationError("no measurement basis: measure the sequence or pass a basis");
}

Distribution SimResults::final_distribution(std::optional<Basis> basis) const {
  const Basis b = resolve_basis(basis);
  const StateVector &psi = states_.back();
  const double norm2 = psi.squaredNorm();
  Distribution dist;
  std::string bits(structure_.n_atoms(), '0');
  for (std::size_t s = 0; s < structure_.dimension(); ++s) {
    const double p = std::norm(psi[Eigen::Index(s)]);
    if (p == 0.0) continue;
    for (std::size_t i = 0; i < structure_.n_atoms(); ++i) {
      bits[i] = measurement_bit(structure_.level_of(s, i), b) ? '1' : '0';
    }
    dist[bits] += p / norm2;
  }
  return dist;
}

Counts SimResults::sample_final_state(std::int64_t n_samples, std::optional<Basis> basis,
                                      std::uint64_t seed) const {
  return sample_distribution(final_distribution(basis), n_samples, seed);
}

nlohmann::json SimResults::to_json() const {
  auto states = nlohmann::json::array();
  for (const auto &psi : states_) {
    auto amps = nlohmann::json::array();
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
      amps.push_back({psi[k].real(), psi[k].imag()});
    }
    states.push_back(std::move(amps));
  }
  nlohmann::json j = {{"levels", structure_.label()},
                      {"n_atoms", structure_.n_atoms()},
                      {"times_us", times_},
                      {"states", std::move(states)}};
  j["measurement_basis"] =
      measurement_basis_ ? nlohmann::json(to_string(*measurement_basis_)) : nlohmann::json();
  return j;
}

} // namespace rydpulse
