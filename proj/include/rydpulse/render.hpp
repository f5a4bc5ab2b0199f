#pragma once

// Timeline rendering: per-channel amplitude/detuning tracks with target
// annotations, as plain text or SVG.

#include <optional>
#include <string>
#include <vector>

#include "rydpulse/sequence.hpp"

namespace rydpulse {

struct TargetMark {
  Nanoseconds time = 0;
  std::vector<std::string> qubits;
};

struct ChannelTrace {
  std::string name;
  std::string channel_id;
  Basis basis = Basis::GroundRydberg;
  /// One value per tick over the whole sequence.
  std::vector<double> amplitude;
  std::vector<double> detuning;
  std::vector<TargetMark> targets;
};

struct DrawData {
  Nanoseconds duration = 0;
  std::vector<ChannelTrace> channels;
  std::optional<Basis> measurement_basis;
};

DrawData draw_data(const Sequence &seq);

/// One line per slot with start and end times. The format is stable:
///
///   sequence duration=<T> ns measurement=<basis|none>
///   channel <name> id=<id> basis=<basis> addressing=<Global|Local>
///     <start> <end> target <q,...>
///     <start> <end> pulse amp=<shape> det=<shape> phase=<rad>
///     <start> <end> delay
std::string render_text(const Sequence &seq);

std::string render_svg(const Sequence &seq);

} // namespace rydpulse
