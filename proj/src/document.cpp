#include "rydpulse/document.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rydpulse {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

nlohmann::json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw DocumentError("'" + path + "' is not valid JSON: " + e.what());
  }
}

template <class F> auto structural(const char *what, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception &e) {
    throw DocumentError(std::string(what) + ": " + e.what());
  } catch (const DocumentError &) {
    throw;
  } catch (const ValidationError &) {
    throw;
  } catch (const Error &e) {
    throw DocumentError(std::string(what) + ": " + e.what());
  }
}

std::vector<std::string> string_list(const nlohmann::json &j) {
  if (j.is_string()) return {j.get<std::string>()};
  return j.get<std::vector<std::string>>();
}

} // namespace

nlohmann::json call_to_json(const Call &c) {
  return std::visit(
      overloaded{
          [](const call::DeclareChannel &d) {
            nlohmann::json j = {{"op", "declare_channel"}, {"name", d.name},
                                {"channel_id", d.channel_id}};
            if (d.initial_target) j["initial_target"] = *d.initial_target;
            return j;
          },
          [](const call::Target &t) {
            return nlohmann::json{{"op", "target"}, {"channel", t.channel}, {"qubits", t.qubits}};
          },
          [](const call::Add &a) {
            return nlohmann::json{{"op", "add"},
                                  {"channel", a.channel},
                                  {"protocol", to_string(a.protocol)},
                                  {"pulse", a.pulse.to_json()}};
          },
          [](const call::Delay &d) {
            return nlohmann::json{
                {"op", "delay"}, {"channel", d.channel}, {"duration_ns", d.duration.to_json()}};
          },
          [](const call::Align &a) {
            return nlohmann::json{{"op", "align"}, {"channels", a.channels}};
          },
          [](const call::PhaseShift &p) {
            return nlohmann::json{{"op", "phase_shift"},
                                  {"phase_rad", p.phase.to_json()},
                                  {"qubits", p.qubits},
                                  {"basis", to_string(p.basis)}};
          },
          [](const call::Measure &m) {
            return nlohmann::json{{"op", "measure"}, {"basis", to_string(m.basis)}};
          },
      },
      c);
}

Call call_from_json(const nlohmann::json &j) {
  return structural("invalid operation", [&]() -> Call {
    const auto op = j.at("op").get<std::string>();
    if (op == "declare_channel") {
      call::DeclareChannel d{j.at("name").get<std::string>(),
                             j.at("channel_id").get<std::string>(), std::nullopt};
      if (j.contains("initial_target") && !j["initial_target"].is_null()) {
        d.initial_target = string_list(j["initial_target"]);
      }
      return d;
    }
    if (op == "target") {
      return call::Target{string_list(j.at("qubits")), j.at("channel").get<std::string>()};
    }
    if (op == "add") {
      return call::Add{PulseSpec::from_json(j.at("pulse")), j.at("channel").get<std::string>(),
                       protocol_from_string(j.value("protocol", std::string("min-delay")))};
    }
    if (op == "delay") {
      return call::Delay{Param::from_json(j.at("duration_ns")), j.at("channel").get<std::string>()};
    }
    if (op == "align") return call::Align{j.at("channels").get<std::vector<std::string>>()};
    if (op == "phase_shift") {
      return call::PhaseShift{Param::from_json(j.at("phase_rad")), string_list(j.at("qubits")),
                              basis_from_string(j.value("basis", std::string("digital")))};
    }
    if (op == "measure") {
      return call::Measure{basis_from_string(j.value("basis", std::string("ground-rydberg")))};
    }
    throw DocumentError("unknown operation '" + op + "'");
  });
}

// -- devices -------------------------------------------------------------------------

Device load_device_file(const std::string &path) {
  const auto j = read_json_file(path);
  return structural("invalid device file", [&] { return Device::from_json(j); });
}

Device default_device() {
  if (const char *path = std::getenv(kDeviceFileEnv); path && *path) {
    return load_device_file(path);
  }
  return reference_device();
}

Device resolve_device(const std::string &name) {
  if (auto d = builtin_device(name)) return *d;
  if (const char *path = std::getenv(kDeviceFileEnv); path && *path) {
    auto d = load_device_file(path);
    if (d.name() == name) return d;
  }
  throw DocumentError("unknown device '" + name + "'");
}

// -- SequenceDocument -----------------------------------------------------------------

Sequence SequenceDocument::to_sequence() const {
  Sequence seq(reg, device);
  for (const auto &[name, size] : variables) seq.declare_variable(name, size);
  for (const auto &op : operations) {
    std::visit(overloaded{
                   [&](const call::DeclareChannel &d) {
                     seq.declare_channel(d.name, d.channel_id, d.initial_target);
                   },
                   [&](const call::Target &t) { seq.target(t.qubits, t.channel); },
                   [&](const call::Add &a) { seq.add(a.pulse, a.channel, a.protocol); },
                   [&](const call::Delay &d) { seq.delay(d.duration, d.channel); },
                   [&](const call::Align &a) { seq.align(a.channels); },
                   [&](const call::PhaseShift &p) { seq.phase_shift(p.phase, p.qubits, p.basis); },
                   [&](const call::Measure &m) { seq.measure(m.basis); },
               },
               op);
  }
  return seq;
}

SequenceDocument::SequenceDocument(Device device_, Register reg_)
    : device(std::move(device_)), reg(std::move(reg_)) {}

SequenceDocument SequenceDocument::from_sequence(const Sequence &seq) {
  SequenceDocument doc(seq.device(), seq.reg());
  if (auto builtin = builtin_device(seq.device().name());
      builtin && builtin->to_json() == seq.device().to_json()) {
    doc.device_name = seq.device().name();
  }
  doc.variables.assign(seq.variables().begin(), seq.variables().end());
  doc.operations = seq.blueprint();
  return doc;
}

nlohmann::json SequenceDocument::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["device"] = device_name.empty() ? device.to_json() : nlohmann::json(device_name);
  j["register"] = reg.to_json();
  auto vars = nlohmann::json::array();
  for (const auto &[name, size] : variables) vars.push_back({{"name", name}, {"size", size}});
  j["variables"] = std::move(vars);
  auto ops = nlohmann::json::array();
  for (const auto &op : operations) ops.push_back(call_to_json(op));
  j["operations"] = std::move(ops);
  return j;
}

SequenceDocument SequenceDocument::from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw DocumentError("document must be a JSON object");
  const int version = structural("schema_version", [&] { return j.at("schema_version").get<int>(); });
  if (version != kSchemaVersion) {
    throw DocumentError("unsupported schema_version " + std::to_string(version));
  }
  std::string device_name;
  std::optional<Device> device;
  if (!j.contains("device") || j["device"].is_null()) {
    device = default_device();
    if (auto b = builtin_device(device->name()); b && b->to_json() == device->to_json()) {
      device_name = device->name();
    }
  } else if (j["device"].is_string()) {
    device_name = j["device"].get<std::string>();
    device = resolve_device(device_name);
    if (!builtin_device(device_name)) device_name.clear();
  } else {
    device = structural("invalid device", [&] { return Device::from_json(j["device"]); });
  }
  SequenceDocument doc(
      std::move(*device),
      structural("invalid register", [&] { return Register::from_json(j.at("register")); }));
  doc.device_name = device_name;
  if (j.contains("variables")) {
    structural("invalid variables", [&] {
      for (const auto &v : j["variables"]) {
        doc.variables.emplace_back(v.at("name").get<std::string>(),
                                   v.value("size", std::size_t{1}));
      }
      return 0;
    });
  }
  const auto ops = structural("invalid operations", [&] { return j.at("operations"); });
  if (!ops.is_array()) throw DocumentError("operations must be an array");
  for (const auto &op : ops) doc.operations.push_back(call_from_json(op));
  return doc;
}

SequenceDocument load_document(const std::string &path) {
  return SequenceDocument::from_json(read_json_file(path));
}

void save_document(const std::string &path, const SequenceDocument &doc) {
  std::ofstream out(path);
  if (!out) throw DocumentError("cannot write '" + path + "'");
  out << doc.to_json().dump(2) << '\n';
}

} // namespace rydpulse
