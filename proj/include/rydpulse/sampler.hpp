#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <ostream>
#include <utility>
#include <vector>

#include "rydpulse/sequence.hpp"

namespace rydpulse {

/// Per-tick drive seen by one (qubit, basis) pair.
struct DriveTrack {
  std::vector<double> amplitude; // rad/us, >= 0
  std::vector<double> detuning;  // rad/us
  std::vector<double> phase;     // rad, 0 where amplitude is 0
  /// Start and end times of the pulse slots writing to this track.
  std::set<Nanoseconds> edges;

  bool empty() const;
};

/// Flattened drives of a concrete sequence, one value per ns tick.
struct DriveSamples {
  Nanoseconds duration = 0;
  std::size_t n_qubits = 0;
  std::set<Basis> bases;
  /// Tracks for every (qubit, basis) with basis in `bases`.
  std::map<std::pair<std::size_t, Basis>, DriveTrack> tracks;

  const DriveTrack &track(std::size_t qubit, Basis basis) const;
};

/// Writes every pulse slot into the tracks of its targets. Throws Error when
/// two pulses drive the same (qubit, basis) with non-zero amplitude at the
/// same tick.
DriveSamples sample_sequence(const Sequence &seq);

/// CSV with header `tick,qubit,basis,amp,det,phase`; only non-idle ticks.
void write_samples_csv(std::ostream &os, const DriveSamples &samples, const Register &reg);

} // namespace rydpulse
