#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydpulse/error.hpp"
#include "rydpulse/signal.hpp"

namespace rydpulse {

enum class Addressing { Global, Local };

/// Two-level transition addressed by a channel.
enum class Basis { GroundRydberg, Digital };

const char *to_string(Addressing a);
const char *to_string(Basis b);
Basis basis_from_string(const std::string &s);
Addressing addressing_from_string(const std::string &s);

struct ChannelSpec {
  std::string id;
  Addressing addressing = Addressing::Global;
  Basis basis = Basis::GroundRydberg;
  double max_amplitude = 0.0;  // rad/us
  double min_detuning = 0.0;   // rad/us
  double max_detuning = 0.0;   // rad/us
  Nanoseconds min_duration = 1;
  Nanoseconds retarget_time = 0;         // Local only
  std::size_t max_simultaneous_targets = 0; // Local only; 0 for Global

  /// Throws ValidationError when the spec itself is inconsistent.
  void check() const;

  friend bool operator==(const ChannelSpec &, const ChannelSpec &) = default;
};

class Device {
public:
  Device(std::string name, double c6, double min_atom_distance, double max_radius_from_center,
         std::size_t max_atom_count, std::vector<ChannelSpec> channels,
         std::set<Basis> supported_bases);

  const std::string &name() const { return name_; }
  /// Interaction coefficient C6/hbar in rad um^6 / us.
  double c6() const { return c6_; }
  double min_atom_distance() const { return min_atom_distance_; }
  double max_radius_from_center() const { return max_radius_from_center_; }
  std::size_t max_atom_count() const { return max_atom_count_; }
  const std::map<std::string, ChannelSpec> &channels() const { return channels_; }
  const std::set<Basis> &supported_bases() const { return supported_bases_; }

  /// Throws Error for unknown ids.
  const ChannelSpec &channel(const std::string &id) const;

  /// (C6 / omega)^(1/6), in um.
  double rydberg_blockade_radius(double omega) const;
  /// C6 / radius^6, in rad/us.
  double rabi_from_blockade(double radius) const;

  /// Checks a pulse against one channel's limits. Returns all violations.
  std::vector<Violation> validate_pulse(const std::string &channel_id, const Pulse &pulse) const;

  nlohmann::json to_json() const;
  static Device from_json(const nlohmann::json &j);

  friend bool operator==(const Device &, const Device &) = default;

private:
  std::string name_;
  double c6_;
  double min_atom_distance_;
  double max_radius_from_center_;
  std::size_t max_atom_count_;
  std::map<std::string, ChannelSpec> channels_;
  std::set<Basis> supported_bases_;
};

/// Built-in device with channels rydberg_global, rydberg_local and raman_local.
/// C6 is chosen so that rabi_from_blockade(8 um) == 19.10672378540039 rad/us.
const Device &reference_device();

/// Looks up a built-in device by name ("reference").
std::optional<Device> builtin_device(const std::string &name);

} // namespace rydpulse
