#include "rydpulse/sampler.hpp"

#include <iomanip>

namespace rydpulse {

bool DriveTrack::empty() const {
  for (std::size_t t = 0; t < amplitude.size(); ++t) {
    if (amplitude[t] != 0.0 || detuning[t] != 0.0) return false;
  }
  return true;
}

const DriveTrack &DriveSamples::track(std::size_t qubit, Basis basis) const {
  auto it = tracks.find({qubit, basis});
  if (it == tracks.end()) {
    throw Error("no drive track for qubit " + std::to_string(qubit) + " in basis " +
                to_string(basis));
  }
  return it->second;
}

DriveSamples sample_sequence(const Sequence &seq) {
  DriveSamples out;
  out.duration = seq.total_duration();
  out.n_qubits = seq.reg().size();
  out.bases = seq.addressed_bases();
  const auto n = static_cast<std::size_t>(out.duration);
  for (std::size_t q = 0; q < out.n_qubits; ++q) {
    for (auto b : out.bases) {
      out.tracks[{q, b}] = DriveTrack{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                                      std::vector<double>(n, 0.0), {}};
    }
  }
  for (const auto &ch : seq.channels()) {
    for (const auto &slot : ch.slots) {
      if (slot.kind != SlotKind::Pulse) continue;
      const auto &pulse = *slot.pulse;
      const auto amp = pulse.amplitude().samples();
      const auto det = pulse.detuning().samples();
      for (auto q : slot.targets) {
        auto &tr = out.tracks.at({q, ch.spec.basis});
        tr.edges.insert(slot.start);
        tr.edges.insert(slot.end);
        for (std::size_t k = 0; k < amp.size(); ++k) {
          const auto t = static_cast<std::size_t>(slot.start) + k;
          if (amp[k] != 0.0) {
            if (tr.amplitude[t] != 0.0) {
              throw Error("overlapping drives on qubit '" + seq.reg().atom(q).name +
                          "' (" + to_string(ch.spec.basis) + ") at t = " + std::to_string(t) +
                          " ns");
            }
            tr.amplitude[t] = amp[k];
            tr.phase[t] = pulse.phase();
          }
          tr.detuning[t] += det[k];
        }
      }
    }
  }
  return out;
}

void write_samples_csv(std::ostream &os, const DriveSamples &samples, const Register &reg) {
  os << "tick,qubit,basis,amp,det,phase\n";
  os << std::setprecision(17);
  for (const auto &[key, tr] : samples.tracks) {
    for (std::size_t t = 0; t < tr.amplitude.size(); ++t) {
      if (tr.amplitude[t] == 0.0 && tr.detuning[t] == 0.0) continue;
      os << t << ',' << reg.atom(key.first).name << ',' << to_string(key.second) << ','
         << tr.amplitude[t] << ',' << tr.detuning[t] << ',' << tr.phase[t] << '\n';
    }
  }
}

} // namespace rydpulse
