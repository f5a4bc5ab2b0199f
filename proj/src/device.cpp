#include "rydpulse/device.hpp"

#include <cmath>
#include <sstream>

namespace rydpulse {

const char *to_string(Addressing a) { return a == Addressing::Global ? "Global" : "Local"; }

const char *to_string(Basis b) { return b == Basis::GroundRydberg ? "ground-rydberg" : "digital"; }

Basis basis_from_string(const std::string &s) {
  if (s == "ground-rydberg") return Basis::GroundRydberg;
  if (s == "digital") return Basis::Digital;
  throw Error("unknown basis '" + s + "'");
}

Addressing addressing_from_string(const std::string &s) {
  if (s == "Global") return Addressing::Global;
  if (s == "Local") return Addressing::Local;
  throw Error("unknown addressing '" + s + "'");
}

void ChannelSpec::check() const {
  std::vector<Violation> v;
  if (!(max_amplitude > 0.0)) {
    v.push_back({"max_amplitude", "channel '" + id + "': max_amplitude must be positive"});
  }
  if (!(min_detuning <= 0.0 && 0.0 <= max_detuning)) {
    v.push_back({"detuning_range", "channel '" + id + "': detuning range must contain 0"});
  }
  if (min_duration < 1) {
    v.push_back({"min_duration", "channel '" + id + "': min_duration must be >= 1 ns"});
  }
  if (addressing == Addressing::Local) {
    if (retarget_time < 0) {
      v.push_back({"retarget_time", "channel '" + id + "': retarget_time must be >= 0"});
    }
    if (max_simultaneous_targets < 1) {
      v.push_back({"max_simultaneous_targets",
                   "channel '" + id + "': max_simultaneous_targets must be >= 1"});
    }
  }
  if (!v.empty()) throw ValidationError(std::move(v));
}

Device::Device(std::string name, double c6, double min_atom_distance,
               double max_radius_from_center, std::size_t max_atom_count,
               std::vector<ChannelSpec> channels, std::set<Basis> supported_bases)
    : name_(std::move(name)), c6_(c6), min_atom_distance_(min_atom_distance),
      max_radius_from_center_(max_radius_from_center), max_atom_count_(max_atom_count),
      supported_bases_(std::move(supported_bases)) {
  if (!(c6_ > 0.0) || !std::isfinite(c6_)) throw ValidationError("c6", "c6 must be positive");
  if (!(min_atom_distance_ > 0.0)) {
    throw ValidationError("min_atom_distance", "min_atom_distance must be positive");
  }
  for (auto &ch : channels) {
    ch.check();
    if (!channels_.emplace(ch.id, ch).second) {
      throw ValidationError("channels", "duplicate channel id '" + ch.id + "'");
    }
  }
}

const ChannelSpec &Device::channel(const std::string &id) const {
  auto it = channels_.find(id);
  if (it == channels_.end()) {
    throw Error("device '" + name_ + "' has no channel '" + id + "'");
  }
  return it->second;
}

double Device::rydberg_blockade_radius(double omega) const {
  if (!(omega > 0.0)) throw Error("rydberg_blockade_radius: omega must be positive");
  return std::pow(c6_ / omega, 1.0 / 6.0);
}

double Device::rabi_from_blockade(double radius) const {
  if (!(radius > 0.0)) throw Error("rabi_from_blockade: radius must be positive");
  const double r3 = radius * radius * radius;
  return c6_ / (r3 * r3);
}

std::vector<Violation> Device::validate_pulse(const std::string &channel_id,
                                              const Pulse &pulse) const {
  const auto &ch = channel(channel_id);
  std::vector<Violation> out;
  const double peak = pulse.amplitude().max_value();
  if (peak > ch.max_amplitude) {
    std::ostringstream os;
    os << "channel '" << ch.id << "': amplitude peak " << peak << " rad/us exceeds "
       << ch.max_amplitude << " rad/us";
    out.push_back({"max_amplitude", os.str()});
  }
  const double dmin = pulse.detuning().min_value();
  const double dmax = pulse.detuning().max_value();
  if (dmin < ch.min_detuning || dmax > ch.max_detuning) {
    std::ostringstream os;
    os << "channel '" << ch.id << "': detuning [" << dmin << ", " << dmax
       << "] rad/us outside [" << ch.min_detuning << ", " << ch.max_detuning << "]";
    out.push_back({"detuning_range", os.str()});
  }
  if (pulse.duration() < ch.min_duration) {
    out.push_back({"min_duration", "channel '" + ch.id + "': pulse duration " +
                                       std::to_string(pulse.duration()) + " ns below minimum " +
                                       std::to_string(ch.min_duration) + " ns"});
  }
  return out;
}

nlohmann::json Device::to_json() const {
  auto channels = nlohmann::json::array();
  for (const auto &[id, ch] : channels_) {
    nlohmann::json c = {{"id", ch.id},
                        {"addressing", to_string(ch.addressing)},
                        {"basis", to_string(ch.basis)},
                        {"max_amplitude", ch.max_amplitude},
                        {"detuning_range", {ch.min_detuning, ch.max_detuning}},
                        {"min_duration", ch.min_duration}};
    if (ch.addressing == Addressing::Local) {
      c["retarget_time"] = ch.retarget_time;
      c["max_simultaneous_targets"] = ch.max_simultaneous_targets;
    }
    channels.push_back(std::move(c));
  }
  auto bases = nlohmann::json::array();
  for (auto b : supported_bases_) bases.push_back(to_string(b));
  return {{"name", name_},
          {"c6", c6_},
          {"min_atom_distance", min_atom_distance_},
          {"max_radius_from_center", max_radius_from_center_},
          {"max_atom_count", max_atom_count_},
          {"supported_bases", bases},
          {"channels", channels}};
}

Device Device::from_json(const nlohmann::json &j) {
  std::vector<ChannelSpec> channels;
  for (const auto &c : j.at("channels")) {
    ChannelSpec ch;
    ch.id = c.at("id").get<std::string>();
    ch.addressing = addressing_from_string(c.at("addressing").get<std::string>());
    ch.basis = basis_from_string(c.at("basis").get<std::string>());
    ch.max_amplitude = c.at("max_amplitude").get<double>();
    const auto range = c.at("detuning_range").get<std::vector<double>>();
    if (range.size() != 2) throw Error("detuning_range must be [min, max]");
    ch.min_detuning = range[0];
    ch.max_detuning = range[1];
    ch.min_duration = c.value("min_duration", Nanoseconds{1});
    if (ch.addressing == Addressing::Local) {
      ch.retarget_time = c.value("retarget_time", Nanoseconds{0});
      ch.max_simultaneous_targets = c.value("max_simultaneous_targets", std::size_t{1});
    }
    channels.push_back(std::move(ch));
  }
  std::set<Basis> bases;
  if (j.contains("supported_bases")) {
    for (const auto &b : j.at("supported_bases")) bases.insert(basis_from_string(b));
  } else {
    for (const auto &ch : channels) bases.insert(ch.basis);
  }
  return Device(j.at("name").get<std::string>(), j.at("c6").get<double>(),
                j.at("min_atom_distance").get<double>(),
                j.at("max_radius_from_center").get<double>(),
                j.at("max_atom_count").get<std::size_t>(), std::move(channels),
                std::move(bases));
}

const Device &reference_device() {
  static const Device device = [] {
    const double r8 = 8.0 * 8.0 * 8.0 * 8.0 * 8.0 * 8.0;
    const double c6 = 19.10672378540039 * r8;
    const double max_det = 20.0 * kTwoPi;
    ChannelSpec global{"rydberg_global", Addressing::Global, Basis::GroundRydberg,
                       2.5 * kTwoPi, -max_det, max_det, 16, 0, 0};
    ChannelSpec rydberg_local{"rydberg_local", Addressing::Local, Basis::GroundRydberg,
                              10.0 * kTwoPi, -max_det, max_det, 16, 220, 1};
    ChannelSpec raman_local{"raman_local", Addressing::Local, Basis::Digital,
                            10.0 * kTwoPi, -max_det, max_det, 16, 220, 1};
    return Device("reference", c6, 4.0, 50.0, 100, {global, rydberg_local, raman_local},
                  {Basis::GroundRydberg, Basis::Digital});
  }();
  return device;
}

std::optional<Device> builtin_device(const std::string &name) {
  if (name == reference_device().name()) return reference_device();
  return std::nullopt;
}

} // namespace rydpulse
