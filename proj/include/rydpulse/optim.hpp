#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rydpulse/analysis.hpp"
#include "rydpulse/emulator.hpp"
#include "rydpulse/sequence.hpp"

namespace rydpulse {

using Objective = std::function<double(const std::vector<double> &)>;

struct NelderMeadOptions {
  /// Offset of the initial simplex vertices along each axis.
  double initial_step = 0.3;
  /// Total objective evaluations, including x0. Values <= 1 evaluate x0 only.
  int max_evaluations = 200;
  /// Converged when the vertex values spread by at most `fatol` and the
  /// vertices lie within `xatol` of the best one.
  double fatol = 1e-8;
  double xatol = 1e-4;
  /// Optional box; candidates are clamped before evaluation.
  std::optional<std::vector<double>> lower;
  std::optional<std::vector<double>> upper;
};

struct Evaluation {
  std::vector<double> x;
  double value = 0.0;
};

enum class Termination { Budget, Tolerance, Flat };

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<Evaluation> trace;
  int iterations = 0;
  Termination termination = Termination::Budget;
  /// Vertices of the last simplex, best first.
  std::vector<std::vector<double>> simplex;
};

/// Downhill simplex minimisation (reflection 1, expansion 2, contraction
/// 0.5, shrink 0.5). Throws Error when f(x0) is not finite; other
/// non-finite values are treated as +inf.
NelderMeadResult nelder_mead(const Objective &f, std::vector<double> x0,
                             const NelderMeadOptions &options = {});

/// Largest distance between two vertices.
double simplex_diameter(const std::vector<std::vector<double>> &simplex);

struct QaoaOptions {
  std::string t_variable = "t_list";
  std::string s_variable = "s_list";
  /// Start point, t values then s values, in us. Defaults to all ones.
  std::vector<double> x0;
  double initial_step = 0.3;
  int budget = 100;
  std::int64_t samples_per_eval = 1000;
  std::int64_t final_samples = 10000;
  std::uint64_t seed = 0;
  double penalty = 2.0;
  Basis basis = Basis::GroundRydberg;
  SimConfig sim;
};

struct QaoaResult {
  VariableValues best;
  double best_cost = 0.0;
  Counts counts;
  NelderMeadResult search;
};

/// Closed-loop QAOA on a parametrized sequence with duration variables
/// (in us) `t_variable` and `s_variable`. Evaluation i samples with seed
/// `seed + i`; the final histogram uses `seed + budget`.
QaoaResult qaoa_loop(const Sequence &parametrized, const std::vector<Edge> &graph,
                     const QaoaOptions &options = {});

/// Maps a flat parameter vector onto the two duration variables.
VariableValues qaoa_values(const std::vector<double> &x, const std::string &t_variable,
                           const std::string &s_variable);

} // namespace rydpulse
