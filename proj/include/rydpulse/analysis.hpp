#pragma once

// Observables computed from measured bits: occupation correlations on a
// square lattice, the Neel score and the MIS cost.

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rydpulse/emulator.hpp"
#include "rydpulse/register.hpp"

namespace rydpulse {

/// Integer lattice coordinates (k along x, l along y) of every atom.
class LatticeMap {
public:
  LatticeMap(std::vector<std::array<int, 2>> sites, double spacing);

  /// Snaps the register onto a square lattice of the given spacing, with
  /// the lowest-left atom at (0, 0). Throws Error when an atom is further
  /// than `tolerance` from a lattice site or two atoms share a site.
  static LatticeMap from_register(const Register &reg, double spacing, double tolerance = 1e-6);

  std::size_t size() const { return sites_.size(); }
  const std::array<int, 2> &site(std::size_t i) const { return sites_.at(i); }
  double spacing() const { return spacing_; }

  /// Ordered pairs (i, j) with site(j) - site(i) == (k, l).
  std::vector<std::pair<std::size_t, std::size_t>> pairs(int k, int l) const;
  /// Displacements with at least one pair, excluding (0, 0), sorted.
  std::vector<std::array<int, 2>> displacements() const;

private:
  std::vector<std::array<int, 2>> sites_;
  double spacing_;
};

/// First and second moments of the measured bits n_i.
class OccupationStats {
public:
  static OccupationStats from_distribution(const Distribution &dist);
  static OccupationStats from_counts(const Counts &counts);

  std::size_t size() const { return mean_.size(); }
  /// <n_i>
  double mean(std::size_t i) const { return mean_.at(i); }
  /// <n_i n_j>
  double joint(std::size_t i, std::size_t j) const { return joint_.at(i).at(j); }

private:
  static OccupationStats accumulate(const std::map<std::string, double> &weights);

  std::vector<double> mean_;
  std::vector<std::vector<double>> joint_;
};

/// Connected correlation averaged over the ordered pairs at displacement
/// (k, l). Throws Error when no pair has that displacement.
double g2(const OccupationStats &stats, const LatticeMap &lattice, int k, int l);

struct CorrelationEntry {
  int k = 0;
  int l = 0;
  double g2 = 0.0;
  std::size_t pairs = 0;
};

/// g2 for every realised displacement other than (0, 0).
std::vector<CorrelationEntry> correlation_table(const OccupationStats &stats,
                                                const LatticeMap &lattice);

/// Sum of (-1)^(|k|+|l|) g2(k, l) over every realised displacement.
double neel_score(const OccupationStats &stats, const LatticeMap &lattice);

/// CSV with header `k,l,g2`.
void write_g2_csv(std::ostream &os, const std::vector<CorrelationEntry> &table);

/// C(z) = -sum_i z_i + penalty * (edges with both ends set).
double bitstring_cost(const std::string &bits, const std::vector<Edge> &edges,
                      double penalty = 2.0);

/// Mean of bitstring_cost over the samples. Throws Error for empty counts or
/// penalty <= 1.
double mis_cost(const Counts &counts, const std::vector<Edge> &edges, double penalty = 2.0);

} // namespace rydpulse
