#pragma once

// JSON interchange format for sequences.
//
//   {"schema_version": 1,
//    "device": "reference" | {...inline device...},
//    "register": {"atoms": [{"name", "x_um", "y_um"}, ...]},
//    "variables": [{"name", "size"}, ...],
//    "operations": [{"op": "declare_channel" | "target" | "add" | "delay" |
//                    "align" | "phase_shift" | "measure", ...}, ...]}
//
// Numeric fields of operations and waveforms accept either a number or an
// expression over the declared variables.

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydpulse/sequence.hpp"

namespace rydpulse {

constexpr int kSchemaVersion = 1;

/// Environment variable naming a device JSON file used when a document
/// does not name its device.
constexpr const char *kDeviceFileEnv = "RYDPULSE_DEVICE_FILE";

/// Malformed or unsupported document.
class DocumentError : public Error {
public:
  using Error::Error;
};

struct SequenceDocument {
  SequenceDocument(Device device, Register reg);

  int schema_version = kSchemaVersion;
  /// Built-in device name; empty when the device is given inline.
  std::string device_name;
  Device device;
  Register reg;
  std::vector<std::pair<std::string, std::size_t>> variables;
  std::vector<Call> operations;

  /// Replays the operations on a fresh sequence.
  Sequence to_sequence() const;
  static SequenceDocument from_sequence(const Sequence &seq);

  nlohmann::json to_json() const;
  /// Throws DocumentError for structural problems.
  static SequenceDocument from_json(const nlohmann::json &j);

  friend bool operator==(const SequenceDocument &a, const SequenceDocument &b) {
    return a.to_json() == b.to_json();
  }
};

nlohmann::json call_to_json(const Call &c);
Call call_from_json(const nlohmann::json &j);

/// Device used when a document has no "device" field: the file named by
/// RYDPULSE_DEVICE_FILE if set, the reference device otherwise.
Device default_device();

/// Built-in device or the device in RYDPULSE_DEVICE_FILE with that name.
Device resolve_device(const std::string &name);

Device load_device_file(const std::string &path);
SequenceDocument load_document(const std::string &path);
void save_document(const std::string &path, const SequenceDocument &doc);

} // namespace rydpulse
