#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydpulse/device.hpp"

namespace rydpulse {

struct Atom {
  std::string name;
  double x = 0.0; // um
  double y = 0.0; // um

  friend bool operator==(const Atom &, const Atom &) = default;
};

/// Undirected edge (i, j) with i < j over register indices.
using Edge = std::pair<std::size_t, std::size_t>;

/// Ordered set of named atoms in the plane. Insertion order fixes the
/// qubit order used by the emulator and by measured bitstrings.
class Register {
public:
  explicit Register(std::vector<Atom> atoms);

  /// Names are `prefix` followed by the index.
  static Register from_coordinates(const std::vector<std::pair<double, double>> &coords,
                                   const std::string &prefix = "q");
  /// side x side square lattice, row-major names, centred on the origin.
  static Register square(std::size_t side, double spacing, const std::string &prefix = "q");

  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom> &atoms() const { return atoms_; }
  const Atom &atom(std::size_t i) const { return atoms_.at(i); }
  /// Index of the named atom; throws Error when absent.
  std::size_t index_of(const std::string &name) const;
  bool contains(const std::string &name) const;

  double distance(std::size_t i, std::size_t j) const;
  std::pair<double, double> centroid() const;
  Register translated(double dx, double dy) const;

  nlohmann::json to_json() const;
  static Register from_json(const nlohmann::json &j);

  friend bool operator==(const Register &, const Register &) = default;

private:
  std::vector<Atom> atoms_;
};

/// Geometric checks against a device: minimum pairwise distance, maximum
/// distance from the centroid and atom count.
std::vector<Violation> validate_register(const Device &device, const Register &reg);

/// Edges between atoms at distance <= radius.
std::vector<Edge> blockade_graph(const Register &reg, double radius);

} // namespace rydpulse
