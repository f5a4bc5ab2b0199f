#include "rydpulse/register.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace rydpulse {

Register::Register(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error("a register needs at least one atom");
  std::set<std::string> names;
  for (const auto &a : atoms_) {
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      throw Error("atom '" + a.name + "' has non-finite coordinates");
    }
    if (!names.insert(a.name).second) throw Error("duplicate atom name '" + a.name + "'");
  }
}

Register Register::from_coordinates(const std::vector<std::pair<double, double>> &coords,
                                    const std::string &prefix) {
  std::vector<Atom> atoms;
  atoms.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    atoms.push_back({prefix + std::to_string(i), coords[i].first, coords[i].second});
  }
  return Register(std::move(atoms));
}

Register Register::square(std::size_t side, double spacing, const std::string &prefix) {
  if (side < 1) throw Error("square register needs side >= 1");
  if (!(spacing > 0.0)) throw Error("square register needs spacing > 0");
  const double half = 0.5 * spacing;
  const auto coord = [&](std::size_t k) {
    return double(2 * static_cast<long>(k) - static_cast<long>(side) + 1) * half;
  };
  std::vector<Atom> atoms;
  atoms.reserve(side * side);
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      atoms.push_back({prefix + std::to_string(row * side + col),
                       coord(col), coord(row)});
    }
  }
  return Register(std::move(atoms));
}

std::size_t Register::index_of(const std::string &name) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].name == name) return i;
  }
  throw Error("register has no atom named '" + name + "'");
}

bool Register::contains(const std::string &name) const {
  for (const auto &a : atoms_) {
    if (a.name == name) return true;
  }
  return false;
}

double Register::distance(std::size_t i, std::size_t j) const {
  const auto &a = atoms_.at(i);
  const auto &b = atoms_.at(j);
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::pair<double, double> Register::centroid() const {
  double cx = 0.0;
  double cy = 0.0;
  for (const auto &a : atoms_) {
    cx += a.x;
    cy += a.y;
  }
  return {cx / double(atoms_.size()), cy / double(atoms_.size())};
}

Register Register::translated(double dx, double dy) const {
  auto atoms = atoms_;
  for (auto &a : atoms) {
    a.x += dx;
    a.y += dy;
  }
  return Register(std::move(atoms));
}

nlohmann::json Register::to_json() const {
  auto atoms = nlohmann::json::array();
  for (const auto &a : atoms_) {
    atoms.push_back({{"name", a.name}, {"x_um", a.x}, {"y_um", a.y}});
  }
  return {{"atoms", atoms}};
}

Register Register::from_json(const nlohmann::json &j) {
  std::vector<Atom> atoms;
  for (const auto &a : j.at("atoms")) {
    atoms.push_back(
        {a.at("name").get<std::string>(), a.at("x_um").get<double>(), a.at("y_um").get<double>()});
  }
  return Register(std::move(atoms));
}

std::vector<Violation> validate_register(const Device &device, const Register &reg) {
  std::vector<Violation> out;
  if (reg.size() > device.max_atom_count()) {
    out.push_back({"max_atom_count", "register has " + std::to_string(reg.size()) +
                                         " atoms, device allows " +
                                         std::to_string(device.max_atom_count())});
  }
  for (std::size_t i = 0; i < reg.size(); ++i) {
    for (std::size_t j = i + 1; j < reg.size(); ++j) {
      const double d = reg.distance(i, j);
      if (d < device.min_atom_distance()) {
        std::ostringstream os;
        os << "atoms '" << reg.atom(i).name << "' and '" << reg.atom(j).name << "' are " << d
           << " um apart, minimum is " << device.min_atom_distance() << " um";
        out.push_back({"min_atom_distance", os.str()});
      }
    }
  }
  const auto [cx, cy] = reg.centroid();
  for (const auto &a : reg.atoms()) {
    const double r = std::hypot(a.x - cx, a.y - cy);
    if (r > device.max_radius_from_center()) {
      std::ostringstream os;
      os << "atom '" << a.name << "' is " << r << " um from the register centre, maximum is "
         << device.max_radius_from_center() << " um";
      out.push_back({"max_radius_from_center", os.str()});
    }
  }
  return out;
}

std::vector<Edge> blockade_graph(const Register &reg, double radius) {
  if (!(radius > 0.0)) throw Error("blockade_graph: radius must be positive");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    for (std::size_t j = i + 1; j < reg.size(); ++j) {
      if (reg.distance(i, j) <= radius) edges.emplace_back(i, j);
    }
  }
  return edges;
}

} // namespace rydpulse
