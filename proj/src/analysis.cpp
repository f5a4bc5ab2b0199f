#include "rydpulse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>

namespace rydpulse {

// -- LatticeMap -----------------------------------------------------------------

LatticeMap::LatticeMap(std::vector<std::array<int, 2>> sites, double spacing)
    : sites_(std::move(sites)), spacing_(spacing) {
  if (!(spacing_ > 0.0)) throw Error("lattice spacing must be positive");
  std::set<std::array<int, 2>> seen(sites_.begin(), sites_.end());
  if (seen.size() != sites_.size()) throw Error("two atoms share a lattice site");
}

LatticeMap LatticeMap::from_register(const Register &reg, double spacing, double tolerance) {
  if (!(spacing > 0.0)) throw Error("lattice spacing must be positive");
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  for (const auto &a : reg.atoms()) {
    x0 = std::min(x0, a.x);
    y0 = std::min(y0, a.y);
  }
  std::vector<std::array<int, 2>> sites;
  for (const auto &a : reg.atoms()) {
    const double fx = (a.x - x0) / spacing;
    const double fy = (a.y - y0) / spacing;
    const auto k = static_cast<int>(std::lround(fx));
    const auto l = static_cast<int>(std::lround(fy));
    if (std::hypot((fx - k) * spacing, (fy - l) * spacing) > tolerance) {
      throw Error("atom '" + a.name + "' is not on the lattice");
    }
    sites.push_back({k, l});
  }
  return LatticeMap(std::move(sites), spacing);
}

std::vector<std::pair<std::size_t, std::size_t>> LatticeMap::pairs(int k, int l) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    for (std::size_t j = 0; j < sites_.size(); ++j) {
      if (sites_[j][0] - sites_[i][0] == k && sites_[j][1] - sites_[i][1] == l) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

std::vector<std::array<int, 2>> LatticeMap::displacements() const {
  std::set<std::array<int, 2>> out;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    for (std::size_t j = 0; j < sites_.size(); ++j) {
      if (i != j) out.insert({sites_[j][0] - sites_[i][0], sites_[j][1] - sites_[i][1]});
    }
  }
  return {out.begin(), out.end()};
}

// -- OccupationStats --------------------------------------------------------------

OccupationStats OccupationStats::accumulate(const std::map<std::string, double> &weights) {
  if (weights.empty()) throw Error("no outcomes to analyse");
  const std::size_t n = weights.begin()->first.size();
  OccupationStats s;
  s.mean_.assign(n, 0.0);
  s.joint_.assign(n, std::vector<double>(n, 0.0));
  double total = 0.0;
  for (const auto &[bits, w] : weights) {
    if (bits.size() != n) throw Error("bitstrings of different lengths");
    if (w < 0.0) throw Error("negative weight for '" + bits + "'");
    total += w;
    for (std::size_t i = 0; i < n; ++i) {
      if (bits[i] != '0' && bits[i] != '1') throw Error("invalid bitstring '" + bits + "'");
      if (bits[i] != '1') continue;
      s.mean_[i] += w;
      for (std::size_t j = 0; j < n; ++j) {
        if (bits[j] == '1') s.joint_[i][j] += w;
      }
    }
  }
  if (!(total > 0.0)) throw Error("outcomes carry no weight");
  for (std::size_t i = 0; i < n; ++i) {
    s.mean_[i] /= total;
    for (auto &v : s.joint_[i]) v /= total;
  }
  return s;
}

OccupationStats OccupationStats::from_distribution(const Distribution &dist) {
  return accumulate(dist);
}

OccupationStats OccupationStats::from_counts(const Counts &counts) {
  std::map<std::string, double> w;
  for (const auto &[bits, c] : counts) w[bits] = double(c);
  return accumulate(w);
}

// -- correlations --------------------------------------------------------------------

double g2(const OccupationStats &stats, const LatticeMap &lattice, int k, int l) {
  if (stats.size() != lattice.size()) throw Error("statistics and lattice sizes differ");
  const auto ps = lattice.pairs(k, l);
  if (ps.empty()) {
    throw Error("no atom pair with displacement (" + std::to_string(k) + ", " +
                std::to_string(l) + ")");
  }
  double sum = 0.0;
  for (const auto &[i, j] : ps) sum += stats.joint(i, j) - stats.mean(i) * stats.mean(j);
  return sum / double(ps.size());
}

std::vector<CorrelationEntry> correlation_table(const OccupationStats &stats,
                                                const LatticeMap &lattice) {
  std::vector<CorrelationEntry> out;
  for (const auto &d : lattice.displacements()) {
    out.push_back({d[0], d[1], g2(stats, lattice, d[0], d[1]), lattice.pairs(d[0], d[1]).size()});
  }
  return out;
}

double neel_score(const OccupationStats &stats, const LatticeMap &lattice) {
  double score = 0.0;
  for (const auto &e : correlation_table(stats, lattice)) {
    score += ((std::abs(e.k) + std::abs(e.l)) % 2 == 0 ? 1.0 : -1.0) * e.g2;
  }
  return score;
}

void write_g2_csv(std::ostream &os, const std::vector<CorrelationEntry> &table) {
  os << "k,l,g2\n" << std::setprecision(17);
  for (const auto &e : table) os << e.k << ',' << e.l << ',' << e.g2 << '\n';
}

// -- MIS -------------------------------------------------------------------------------

double bitstring_cost(const std::string &bits, const std::vector<Edge> &edges, double penalty) {
  double c = 0.0;
  for (char b : bits) {
    if (b == '1') c -= 1.0;
    else if (b != '0') throw Error("invalid bitstring '" + bits + "'");
  }
  for (const auto &[i, j] : edges) {
    if (i >= bits.size() || j >= bits.size()) throw Error("edge outside the bitstring");
    if (bits[i] == '1' && bits[j] == '1') c += penalty;
  }
  return c;
}

double mis_cost(const Counts &counts, const std::vector<Edge> &edges, double penalty) {
  if (!(penalty > 1.0)) throw Error("MIS penalty must exceed 1");
  double total = 0.0;
  std::int64_t n = 0;
  for (const auto &[bits, c] : counts) {
    total += double(c) * bitstring_cost(bits, edges, penalty);
    n += c;
  }
  if (n <= 0) throw Error("empty counts");
  return total / double(n);
}

} // namespace rydpulse
