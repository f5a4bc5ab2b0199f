#include "rydpulse/sequence.hpp"

#include <algorithm>
#include <cmath>

namespace rydpulse {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

bool intersects(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i;
    else ++j;
  }
  return false;
}

double circular_distance(double a, double b) {
  const double d = std::abs(normalize_phase(a) - normalize_phase(b));
  return std::min(d, kTwoPi - d);
}

} // namespace

const char *to_string(Protocol p) {
  switch (p) {
  case Protocol::MinDelay: return "min-delay";
  case Protocol::WaitForAll: return "wait-for-all";
  case Protocol::NoDelay: return "no-delay";
  }
  return "?";
}

Protocol protocol_from_string(const std::string &s) {
  if (s == "min-delay") return Protocol::MinDelay;
  if (s == "wait-for-all") return Protocol::WaitForAll;
  if (s == "no-delay") return Protocol::NoDelay;
  throw Error("unknown protocol '" + s + "'");
}

const char *to_string(SlotKind k) {
  switch (k) {
  case SlotKind::Pulse: return "Pulse";
  case SlotKind::Target: return "Target";
  case SlotKind::Delay: return "Delay";
  }
  return "?";
}

Sequence::Sequence(Register reg, Device device)
    : register_(std::move(reg)), device_(std::move(device)) {
  auto violations = validate_register(device_, register_);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

// -- public builder API ------------------------------------------------------

void Sequence::declare_channel(const std::string &name, const std::string &channel_id,
                               std::optional<std::vector<std::string>> initial_target) {
  record(call::DeclareChannel{name, channel_id, std::move(initial_target)}, false);
}

void Sequence::declare_channel(const std::string &name, const std::string &channel_id,
                               const std::string &initial_target) {
  declare_channel(name, channel_id, std::vector<std::string>{initial_target});
}

void Sequence::target(const std::vector<std::string> &qubits, const std::string &channel) {
  record(call::Target{qubits, channel}, false);
}

void Sequence::target(const std::string &qubit, const std::string &channel) {
  target(std::vector<std::string>{qubit}, channel);
}

void Sequence::add(const PulseSpec &pulse, const std::string &channel, Protocol protocol) {
  std::set<std::string> vars;
  pulse.collect_variables(vars);
  record(call::Add{pulse, channel, protocol}, !vars.empty());
}

void Sequence::delay(const Param &duration, const std::string &channel) {
  record(call::Delay{duration, channel}, duration.is_deferred());
}

void Sequence::align(const std::vector<std::string> &channels) {
  record(call::Align{channels}, false);
}

void Sequence::phase_shift(const Param &phase, const std::vector<std::string> &qubits,
                           Basis basis) {
  record(call::PhaseShift{phase, qubits, basis}, phase.is_deferred());
}

void Sequence::measure(Basis basis) { record(call::Measure{basis}, false); }

Variable Sequence::declare_variable(const std::string &name, std::size_t size) {
  require_open();
  if (name.empty()) throw Error("variable name must not be empty");
  if (variables_.count(name)) throw Error("variable '" + name + "' already declared");
  Variable v(name, size);
  variables_.emplace(name, size);
  return v;
}

Sequence Sequence::build(const VariableValues &values) const {
  for (const auto &[name, size] : variables_) {
    auto it = values.find(name);
    if (it == values.end()) throw Error("build: no value for variable '" + name + "'");
    if (it->second.size() != size) {
      throw Error("build: variable '" + name + "' has size " + std::to_string(size) + ", got " +
                  std::to_string(it->second.size()) + " values");
    }
    for (double v : it->second) {
      if (!std::isfinite(v)) throw Error("build: non-finite value for '" + name + "'");
    }
  }
  for (const auto &[name, vals] : values) {
    if (!variables_.count(name)) throw Error("build: unknown variable '" + name + "'");
  }
  Sequence out(register_, device_);
  for (const auto &c : blueprint_) {
    out.apply(c, values);
    out.blueprint_.push_back(c);
  }
  // The built blueprint keeps the expressions; freeze them to plain numbers.
  for (auto &c : out.blueprint_) {
    std::visit(overloaded{
                   [&](call::Add &a) {
                     a.pulse = PulseSpec(a.pulse.resolve(values));
                   },
                   [&](call::Delay &d) { d.duration = double(round_duration(d.duration.resolve(values))); },
                   [&](call::PhaseShift &p) { p.phase = p.phase.resolve(values); },
                   [](auto &) {},
               },
               c);
  }
  return out;
}

// -- inspection ----------------------------------------------------------------

std::vector<std::string> Sequence::available_channels() const {
  std::vector<std::string> out;
  for (const auto &[id, spec] : device_.channels()) {
    bool used = false;
    for (const auto &ch : channels_) used = used || ch.spec.id == id;
    for (const auto &[name, rid] : recorded_channels_) used = used || rid == id;
    if (!used) out.push_back(id);
  }
  return out;
}

const std::vector<ChannelTimeline> &Sequence::channels() const {
  require_concrete("channels");
  return channels_;
}

const ChannelTimeline &Sequence::channel(const std::string &name) const {
  require_concrete("channel");
  for (const auto &ch : channels_) {
    if (ch.name == name) return ch;
  }
  throw Error("no declared channel named '" + name + "'");
}

std::set<Basis> Sequence::addressed_bases() const {
  std::set<Basis> out;
  for (const auto &ch : channels_) out.insert(ch.spec.basis);
  for (const auto &[name, id] : recorded_channels_) out.insert(device_.channel(id).basis);
  return out;
}

Nanoseconds Sequence::total_duration() const {
  require_concrete("total_duration");
  Nanoseconds end = 0;
  for (const auto &ch : channels_) end = std::max(end, ch.end());
  return end;
}

double Sequence::phase_reference(std::size_t qubit, Basis basis) const {
  auto it = phase_refs_.find({qubit, basis});
  return it == phase_refs_.end() ? 0.0 : it->second;
}

// -- internals -------------------------------------------------------------------

void Sequence::require_concrete(const char *what) const {
  if (parametrized_) {
    throw Error(std::string(what) + " is unavailable on a parametrized sequence; call build() first");
  }
}

void Sequence::require_open() const {
  if (measured_basis_) throw Error("sequence was measured; no further changes are possible");
}

void Sequence::record(Call c, bool uses_variables) {
  require_open();
  if (uses_variables) {
    std::set<std::string> names;
    std::visit(overloaded{
                   [&](const call::Add &a) { a.pulse.collect_variables(names); },
                   [&](const call::Delay &d) { d.duration.collect_variables(names); },
                   [&](const call::PhaseShift &p) { p.phase.collect_variables(names); },
                   [](const auto &) {},
               },
               c);
    for (const auto &n : names) {
      if (!variables_.count(n)) throw Error("variable '" + n + "' was not declared");
    }
    parametrized_ = true;
  }
  if (parametrized_) {
    check_recordable(c);
    if (auto *d = std::get_if<call::DeclareChannel>(&c)) {
      recorded_channels_.emplace(d->name, d->channel_id);
    }
    if (auto *m = std::get_if<call::Measure>(&c)) measured_basis_ = m->basis;
  } else {
    apply(c, {});
  }
  blueprint_.push_back(std::move(c));
}

void Sequence::check_recordable(const Call &c) const {
  auto known = [&](const std::string &name) {
    if (recorded_channels_.count(name)) return;
    for (const auto &ch : channels_) {
      if (ch.name == name) return;
    }
    throw Error("no declared channel named '" + name + "'");
  };
  auto qubits_exist = [&](const std::vector<std::string> &qs) { (void)resolve_qubits(qs); };
  std::visit(overloaded{
                 [&](const call::DeclareChannel &d) {
                   for (const auto &ch : channels_) {
                     if (ch.name == d.name) throw Error("channel name '" + d.name + "' in use");
                   }
                   if (recorded_channels_.count(d.name)) {
                     throw Error("channel name '" + d.name + "' in use");
                   }
                   auto avail = available_channels();
                   (void)device_.channel(d.channel_id);
                   if (std::find(avail.begin(), avail.end(), d.channel_id) == avail.end()) {
                     throw Error("channel '" + d.channel_id + "' was already declared");
                   }
                   if (d.initial_target) qubits_exist(*d.initial_target);
                 },
                 [&](const call::Target &t) {
                   known(t.channel);
                   qubits_exist(t.qubits);
                 },
                 [&](const call::Add &a) { known(a.channel); },
                 [&](const call::Delay &d) { known(d.channel); },
                 [&](const call::Align &a) {
                   for (const auto &n : a.channels) known(n);
                 },
                 [&](const call::PhaseShift &p) {
                   qubits_exist(p.qubits);
                   if (!device_.supported_bases().count(p.basis)) {
                     throw Error(std::string("basis '") + to_string(p.basis) +
                                 "' not supported by the device");
                   }
                 },
                 [&](const call::Measure &m) {
                   if (!device_.supported_bases().count(m.basis)) {
                     throw Error(std::string("basis '") + to_string(m.basis) +
                                 "' not supported by the device");
                   }
                 },
             },
             c);
}

void Sequence::apply(const Call &c, const VariableValues &values) {
  std::visit(overloaded{
                 [&](const call::DeclareChannel &d) { do_declare(d); },
                 [&](const call::Target &t) { do_target(t); },
                 [&](const call::Add &a) { do_add(a, values); },
                 [&](const call::Delay &d) { do_delay(d, values); },
                 [&](const call::Align &a) { do_align(a); },
                 [&](const call::PhaseShift &p) { do_phase_shift(p, values); },
                 [&](const call::Measure &m) { do_measure(m); },
             },
             c);
}

ChannelTimeline &Sequence::timeline(const std::string &name) {
  for (auto &ch : channels_) {
    if (ch.name == name) return ch;
  }
  throw Error("no declared channel named '" + name + "'");
}

std::vector<std::size_t> Sequence::resolve_qubits(const std::vector<std::string> &qubits) const {
  if (qubits.empty()) throw Error("at least one qubit is required");
  std::vector<std::size_t> idx;
  idx.reserve(qubits.size());
  for (const auto &q : qubits) idx.push_back(register_.index_of(q));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

void Sequence::do_declare(const call::DeclareChannel &d) {
  require_open();
  for (const auto &ch : channels_) {
    if (ch.name == d.name) throw Error("channel name '" + d.name + "' is already in use");
    if (ch.spec.id == d.channel_id) {
      throw Error("channel '" + d.channel_id + "' can only be declared once");
    }
  }
  ChannelTimeline tl;
  tl.name = d.name;
  tl.spec = device_.channel(d.channel_id);
  if (tl.spec.addressing == Addressing::Global) {
    if (d.initial_target) {
      throw Error("global channel '" + d.channel_id + "' always targets the whole register");
    }
    for (std::size_t i = 0; i < register_.size(); ++i) tl.targets.push_back(i);
    tl.slots.push_back({SlotKind::Target, 0, 0, tl.targets, std::nullopt});
  } else if (d.initial_target) {
    auto targets = resolve_qubits(*d.initial_target);
    if (targets.size() > tl.spec.max_simultaneous_targets) {
      throw Error("channel '" + d.name + "' can target at most " +
                  std::to_string(tl.spec.max_simultaneous_targets) + " qubits");
    }
    tl.targets = targets;
    tl.slots.push_back({SlotKind::Target, 0, 0, targets, std::nullopt});
  }
  channels_.push_back(std::move(tl));
}

void Sequence::do_target(const call::Target &t) {
  require_open();
  auto &ch = timeline(t.channel);
  if (ch.spec.addressing == Addressing::Global) {
    throw Error("cannot retarget global channel '" + t.channel + "'");
  }
  auto targets = resolve_qubits(t.qubits);
  if (targets.size() > ch.spec.max_simultaneous_targets) {
    throw Error("channel '" + t.channel + "' can target at most " +
                std::to_string(ch.spec.max_simultaneous_targets) + " qubits");
  }
  const Nanoseconds start = ch.end();
  const Nanoseconds cost = ch.has_target() ? ch.spec.retarget_time : 0;
  ch.slots.push_back({SlotKind::Target, start, start + cost, targets, std::nullopt});
  ch.targets = std::move(targets);
}

void Sequence::do_add(const call::Add &a, const VariableValues &values) {
  require_open();
  auto &ch = timeline(a.channel);
  if (!ch.has_target()) {
    throw Error("channel '" + a.channel + "' has no target; call target() first");
  }
  Pulse pulse = a.pulse.resolve(values);
  auto violations = device_.validate_pulse(ch.spec.id, pulse);
  if (!violations.empty()) throw ValidationError(std::move(violations));

  const double ref = phase_reference(ch.targets.front(), ch.spec.basis);
  for (auto q : ch.targets) {
    if (circular_distance(phase_reference(q, ch.spec.basis), ref) > 1e-12) {
      throw Error("targets of channel '" + a.channel +
                  "' have different phase references; cannot add a pulse to all of them");
    }
  }

  Nanoseconds t0 = ch.end();
  switch (a.protocol) {
  case Protocol::NoDelay:
    break;
  case Protocol::WaitForAll:
    for (const auto &other : channels_) t0 = std::max(t0, other.end());
    break;
  case Protocol::MinDelay:
    for (const auto &other : channels_) {
      if (&other == &ch) continue;
      for (const auto &s : other.slots) {
        if (s.kind == SlotKind::Pulse && intersects(s.targets, ch.targets)) {
          t0 = std::max(t0, s.end);
        }
      }
    }
    break;
  }
  if (t0 > ch.end()) {
    ch.slots.push_back({SlotKind::Delay, ch.end(), t0, ch.targets, std::nullopt});
  }
  const Nanoseconds dur = pulse.duration();
  ch.slots.push_back({SlotKind::Pulse, t0, t0 + dur, ch.targets, pulse.with_phase_offset(ref)});
}

void Sequence::do_delay(const call::Delay &d, const VariableValues &values) {
  require_open();
  auto &ch = timeline(d.channel);
  const Nanoseconds dur = round_duration(d.duration.resolve(values));
  if (dur < 0) throw Error("delay duration must be non-negative");
  if (dur == 0) return;
  ch.slots.push_back({SlotKind::Delay, ch.end(), ch.end() + dur, ch.targets, std::nullopt});
}

void Sequence::do_align(const call::Align &a) {
  require_open();
  std::vector<std::string> names = a.channels;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (names.size() < 2) throw Error("align needs at least two distinct channels");
  Nanoseconds latest = 0;
  for (const auto &n : names) latest = std::max(latest, timeline(n).end());
  for (const auto &n : names) {
    auto &ch = timeline(n);
    if (ch.end() < latest) {
      ch.slots.push_back({SlotKind::Delay, ch.end(), latest, ch.targets, std::nullopt});
    }
  }
}

void Sequence::do_phase_shift(const call::PhaseShift &p, const VariableValues &values) {
  require_open();
  if (!device_.supported_bases().count(p.basis)) {
    throw Error(std::string("basis '") + to_string(p.basis) + "' not supported by the device");
  }
  const double phi = p.phase.resolve(values);
  if (!std::isfinite(phi)) throw Error("phase shift must be finite");
  for (auto q : resolve_qubits(p.qubits)) {
    auto &ref = phase_refs_[{q, p.basis}];
    ref = normalize_phase(ref + phi);
  }
}

void Sequence::do_measure(const call::Measure &m) {
  require_open();
  if (!device_.supported_bases().count(m.basis)) {
    throw Error(std::string("basis '") + to_string(m.basis) + "' not supported by the device");
  }
  measured_basis_ = m.basis;
}

} // namespace rydpulse
