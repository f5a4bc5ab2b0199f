#pragma once

// State-vector emulation of a sequence.
//
// hbar = 1: energies are in rad/us and times in us. Each atom carries the
// levels needed by the addressed bases, ordered r < g < h; the first atom
// in the register is the most significant digit of a basis-state index.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "rydpulse/sampler.hpp"
#include "rydpulse/sequence.hpp"

namespace rydpulse {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using Operator = Eigen::MatrixXcd;

enum class Level { R = 0, G = 1, H = 2 };

class LevelStructure {
public:
  /// Levels for the given addressed bases ({r,g}, {g,h} or {r,g,h}).
  /// An empty set yields {r,g}.
  LevelStructure(const std::set<Basis> &bases, std::size_t n_atoms);

  std::size_t n_atoms() const { return n_atoms_; }
  std::size_t levels_per_atom() const { return levels_.size(); }
  const std::vector<Level> &levels() const { return levels_; }
  std::size_t dimension() const { return dimension_; }
  bool has(Level l) const;
  /// Position of a level within one atom's local basis; throws if absent.
  std::size_t local_index(Level l) const;
  /// Level of `atom` in the basis state `index`.
  Level level_of(std::size_t index, std::size_t atom) const;
  /// Index of the product state with the given per-atom levels.
  std::size_t index_of(const std::vector<Level> &levels) const;
  /// e.g. "rgh".
  std::string label() const;

private:
  std::vector<Level> levels_;
  std::size_t n_atoms_;
  std::size_t dimension_;
};

struct SimConfig {
  /// Fraction of ticks at which the drives are sampled; states are recorded
  /// every round(1 / sampling_rate) ns.
  double sampling_rate = 1.0;
  /// Defaults to every atom in |g>.
  std::optional<StateVector> initial_state;
  /// Largest discarded population tolerated when reducing to a basis.
  double leakage_tolerance = 1e-2;
  std::uint64_t seed = 0;
  /// Refuse runs whose Hilbert space exceeds this dimension (3^8).
  std::size_t max_dimension = 6561;
};

using Counts = std::map<std::string, std::int64_t>;
/// Bitstring -> probability.
using Distribution = std::map<std::string, double>;

class SimResults {
public:
  SimResults(LevelStructure structure, std::vector<double> times_us,
             std::vector<StateVector> states, std::optional<Basis> measurement_basis);

  const LevelStructure &structure() const { return structure_; }
  const std::vector<double> &times() const { return times_; }
  const std::vector<StateVector> &states() const { return states_; }
  std::optional<Basis> measurement_basis() const { return measurement_basis_; }

  /// <psi(t)|O|psi(t)> for every recorded time, one series per operator.
  std::vector<std::vector<double>> expect(const std::vector<Operator> &operators) const;

  /// Last state, optionally projected onto the two levels of `reduce_to`
  /// per atom and renormalised. Throws SimulationError when the discarded
  /// population exceeds `tolerance`.
  StateVector final_state(std::optional<Basis> reduce_to = std::nullopt,
                          double tolerance = 1e-2) const;

  /// Exact outcome probabilities of the final state in `basis`.
  Distribution final_distribution(std::optional<Basis> basis = std::nullopt) const;

  /// Multinomial sample of `n_samples` measurements of the final state.
  Counts sample_final_state(std::int64_t n_samples, std::optional<Basis> basis,
                            std::uint64_t seed) const;

  nlohmann::json to_json() const;

private:
  Basis resolve_basis(std::optional<Basis> basis) const;

  LevelStructure structure_;
  std::vector<double> times_;
  std::vector<StateVector> states_;
  std::optional<Basis> measurement_basis_;
};

/// H(t) for the drive values at `tick`, plus the Rydberg interaction.
Operator build_hamiltonian(const DriveSamples &samples, const Register &reg, const Device &device,
                           const LevelStructure &structure, Nanoseconds tick);

/// H at time `time_ns` for the drives seen by a run at `sampling_rate`.
/// Between pulse edges each drive is sampled at the first and last tick and
/// every round(1 / rate) ticks; samples sit at tick centres and are
/// linearly interpolated.
Operator hamiltonian_at(const DriveSamples &samples, const Register &reg, const Device &device,
                        const LevelStructure &structure, double time_ns,
                        double sampling_rate = 1.0);

/// Propagates a concrete sequence from t = 0 to its total duration.
SimResults run(const Sequence &seq, const SimConfig &config = {});

/// Bit of `level` when measured in `basis` (1 for r in ground-rydberg, 1
/// for h in digital, 0 otherwise).
int measurement_bit(Level level, Basis basis);

/// Product state with the given per-atom levels.
StateVector product_state(const LevelStructure &structure, const std::vector<Level> &levels);

/// Projector |r><r| acting on `atom`.
Operator rydberg_occupation(const LevelStructure &structure, std::size_t atom);

/// Multinomial sample from a probability table (used for exact
/// distributions and by SimResults).
Counts sample_distribution(const Distribution &dist, std::int64_t n_samples, std::uint64_t seed);

} // namespace rydpulse
