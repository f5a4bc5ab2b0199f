#pragma once

// Pulse sequence builder.
//
// A Sequence owns one timeline per declared channel. Every builder call is
// also recorded in a blueprint; once a declared variable is used the
// sequence stops executing calls and only records them, and build() replays
// the blueprint with concrete values.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rydpulse/device.hpp"
#include "rydpulse/param.hpp"
#include "rydpulse/register.hpp"
#include "rydpulse/signal.hpp"

namespace rydpulse {

enum class Protocol { MinDelay, WaitForAll, NoDelay };

const char *to_string(Protocol p);
Protocol protocol_from_string(const std::string &s);

enum class SlotKind { Pulse, Target, Delay };

const char *to_string(SlotKind k);

struct TimeSlot {
  SlotKind kind = SlotKind::Delay;
  Nanoseconds start = 0;
  Nanoseconds end = 0;
  /// Register indices, sorted.
  std::vector<std::size_t> targets;
  /// Present for Pulse slots; phase already includes the phase reference.
  std::optional<Pulse> pulse;

  Nanoseconds duration() const { return end - start; }

  friend bool operator==(const TimeSlot &, const TimeSlot &) = default;
};

struct ChannelTimeline {
  std::string name;
  ChannelSpec spec;
  /// Current targets (register indices, sorted); empty until first targeted.
  std::vector<std::size_t> targets;
  std::vector<TimeSlot> slots;

  Nanoseconds end() const { return slots.empty() ? 0 : slots.back().end; }
  bool has_target() const { return !targets.empty(); }
};

namespace call {
struct DeclareChannel {
  std::string name;
  std::string channel_id;
  std::optional<std::vector<std::string>> initial_target;
};
struct Target {
  std::vector<std::string> qubits;
  std::string channel;
};
struct Add {
  PulseSpec pulse;
  std::string channel;
  Protocol protocol = Protocol::MinDelay;
};
struct Delay {
  Param duration;
  std::string channel;
};
struct Align {
  std::vector<std::string> channels;
};
struct PhaseShift {
  Param phase;
  std::vector<std::string> qubits;
  Basis basis = Basis::Digital;
};
struct Measure {
  Basis basis = Basis::GroundRydberg;
};
} // namespace call

using Call = std::variant<call::DeclareChannel, call::Target, call::Add, call::Delay,
                          call::Align, call::PhaseShift, call::Measure>;

class Sequence {
public:
  /// Throws ValidationError if the register breaks the device's constraints.
  Sequence(Register reg, Device device);

  const Register &reg() const { return register_; }
  const Device &device() const { return device_; }

  // -- building -------------------------------------------------------------

  void declare_channel(const std::string &name, const std::string &channel_id,
                       std::optional<std::vector<std::string>> initial_target = std::nullopt);
  void declare_channel(const std::string &name, const std::string &channel_id,
                       const std::string &initial_target);
  void target(const std::vector<std::string> &qubits, const std::string &channel);
  void target(const std::string &qubit, const std::string &channel);
  void add(const PulseSpec &pulse, const std::string &channel,
           Protocol protocol = Protocol::MinDelay);
  void delay(const Param &duration, const std::string &channel);
  void align(const std::vector<std::string> &channels);
  void phase_shift(const Param &phase, const std::vector<std::string> &qubits,
                   Basis basis = Basis::Digital);
  void measure(Basis basis);

  Variable declare_variable(const std::string &name, std::size_t size = 1);

  /// Replays the blueprint with `values`; the result is concrete.
  Sequence build(const VariableValues &values) const;

  // -- inspection -----------------------------------------------------------

  bool is_parametrized() const { return parametrized_; }
  bool is_measured() const { return measured_basis_.has_value(); }
  std::optional<Basis> measurement_basis() const { return measured_basis_; }
  const std::map<std::string, std::size_t> &variables() const { return variables_; }
  const std::vector<Call> &blueprint() const { return blueprint_; }

  /// Device channel ids not yet declared.
  std::vector<std::string> available_channels() const;
  /// Declared channels in declaration order. Throws when parametrized.
  const std::vector<ChannelTimeline> &channels() const;
  const ChannelTimeline &channel(const std::string &name) const;
  /// Bases addressed by the declared channels.
  std::set<Basis> addressed_bases() const;
  /// Latest channel end. Throws when parametrized.
  Nanoseconds total_duration() const;
  double phase_reference(std::size_t qubit, Basis basis) const;

private:
  void apply(const Call &c, const VariableValues &values);
  void record(Call c, bool uses_variables);
  void check_recordable(const Call &c) const;
  void require_concrete(const char *what) const;
  void require_open() const;

  void do_declare(const call::DeclareChannel &c);
  void do_target(const call::Target &c);
  void do_add(const call::Add &c, const VariableValues &values);
  void do_delay(const call::Delay &c, const VariableValues &values);
  void do_align(const call::Align &c);
  void do_phase_shift(const call::PhaseShift &c, const VariableValues &values);
  void do_measure(const call::Measure &c);

  ChannelTimeline &timeline(const std::string &name);
  std::vector<std::size_t> resolve_qubits(const std::vector<std::string> &qubits) const;

  Register register_;
  Device device_;
  std::vector<ChannelTimeline> channels_;
  std::map<std::pair<std::size_t, Basis>, double> phase_refs_;
  std::optional<Basis> measured_basis_;

  std::map<std::string, std::size_t> variables_;
  std::vector<Call> blueprint_;
  bool parametrized_ = false;
  // Channel names declared while recording (parametrized mode).
  std::map<std::string, std::string> recorded_channels_;
};

} // namespace rydpulse
