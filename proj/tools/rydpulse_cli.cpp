// rydpulse: validate, draw, simulate and sample pulse sequence documents.
//
// Exit codes: 0 ok, 1 I/O or parse error, 2 validation error, 3 runtime error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rydpulse/analysis.hpp"
#include "rydpulse/document.hpp"
#include "rydpulse/emulator.hpp"
#include "rydpulse/optim.hpp"
#include "rydpulse/render.hpp"
#include "rydpulse/sampler.hpp"

using namespace rydpulse;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kIo = 1, kInvalid = 2, kRuntime = 3 };

void report_violations(const std::vector<Violation> &vs) {
  auto arr = json::array();
  for (const auto &v : vs) arr.push_back({{"constraint", v.constraint}, {"message", v.message}});
  std::cerr << json{{"violations", arr}}.dump(2) << '\n';
}

VariableValues parse_values(const std::string &text) {
  if (text.empty()) return {};
  try {
    VariableValues out;
    const auto parsed = json::parse(text);
    if (!parsed.is_object()) throw DocumentError("--values must be a JSON object");
    for (const auto &[name, v] : parsed.items()) {
      out[name] = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
    }
    return out;
  } catch (const json::exception &e) {
    throw DocumentError(std::string("--values: ") + e.what());
  }
}

// Loads a document and replays it. Builder failures count as validation
// errors.
Sequence load_sequence(const std::string &path, const std::string &values = "") {
  const auto doc = load_document(path);
  const auto vals = parse_values(values);
  try {
    auto seq = doc.to_sequence();
    if (seq.is_parametrized() && !values.empty()) return seq.build(vals);
    return seq;
  } catch (const ValidationError &) {
    throw;
  } catch (const Error &e) {
    throw ValidationError("sequence", e.what());
  }
}

const Sequence &require_concrete(const Sequence &seq) {
  if (seq.is_parametrized()) {
    throw ValidationError("sequence", "the document is parametrized; pass --values");
  }
  return seq;
}

std::optional<Basis> optional_basis(const std::string &s) {
  if (s.empty()) return std::nullopt;
  return basis_from_string(s);
}

std::ostream &open_out(const std::string &path, std::ofstream &file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw DocumentError("cannot write '" + path + "'");
  return file;
}

json counts_json(const Counts &counts) {
  json j = json::object();
  for (const auto &[k, v] : counts) j[k] = v;
  return j;
}

// Nearest-neighbour distance of the register, used as the default lattice spacing.
double nearest_spacing(const Register &reg) {
  double best = INFINITY;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    for (std::size_t j = i + 1; j < reg.size(); ++j) best = std::min(best, reg.distance(i, j));
  }
  if (!std::isfinite(best)) throw Error("a lattice needs at least two atoms");
  return best;
}

OccupationStats occupation(const SimResults &res, std::optional<Basis> basis, std::int64_t n,
                           std::uint64_t seed) {
  if (n > 0) return OccupationStats::from_counts(res.sample_final_state(n, basis, seed));
  return OccupationStats::from_distribution(res.final_distribution(basis));
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Pulse sequence toolkit for neutral-atom processors"};
  app.require_subcommand(1);

  std::string path;
  std::string values;
  std::string out;
  std::string format = "text";
  double rate = 1.0;
  std::int64_t n_samples = 1000;
  std::uint64_t seed = 0;
  std::string basis;
  int layers = 2;
  int budget = 100;
  std::int64_t per_eval = 1000;
  std::string trace_path;
  std::string variable;
  std::vector<double> grid;
  double spacing = 0.0;

  auto add_path = [&](CLI::App *c) {
    c->add_option("document", path, "Sequence document (JSON)")->required();
    c->add_option("--values", values, "Variable values as a JSON object");
  };

  auto *validate = app.add_subcommand("validate", "Check a document against its device");
  add_path(validate);

  auto *draw = app.add_subcommand("draw", "Render the channel timelines");
  add_path(draw);
  draw->add_option("--format", format, "text or svg")->check(CLI::IsMember({"text", "svg"}));
  draw->add_option("--out", out, "Output file (default stdout)");

  auto *simulate = app.add_subcommand("simulate", "Emulate and write the state history");
  add_path(simulate);
  simulate->add_option("--sampling-rate", rate, "Fraction of ticks sampled");
  simulate->add_option("--out", out, "Output file (default stdout)");

  auto *sample = app.add_subcommand("sample", "Emulate and sample measurement outcomes");
  add_path(sample);
  sample->add_option("-n,--samples", n_samples, "Number of samples");
  sample->add_option("--seed", seed);
  sample->add_option("--basis", basis, "ground-rydberg or digital");
  sample->add_option("--sampling-rate", rate);

  auto *optimize = app.add_subcommand("optimize", "QAOA loop on a parametrized MIS document");
  add_path(optimize);
  optimize->add_option("--layers", layers);
  optimize->add_option("--budget", budget, "Objective evaluations");
  optimize->add_option("--seed", seed);
  optimize->add_option("--samples-per-eval", per_eval);
  optimize->add_option("-n,--samples", n_samples, "Samples in the final histogram")
      ->default_val(10000);
  optimize->add_option("--trace", trace_path, "Trace CSV file (default stdout)");
  optimize->add_option("--out", out, "Result JSON file (default stdout)");

  auto *sweep = app.add_subcommand("sweep", "Neel score over values of a scalar variable");
  add_path(sweep);
  sweep->add_option("--variable", variable)->required();
  sweep->add_option("--grid", grid, "Values to try")->required()->delimiter(',');
  sweep->add_option("--basis", basis);
  sweep->add_option("--sampling-rate", rate);
  sweep->add_option("--spacing", spacing, "Lattice spacing in um (default nearest neighbour)");
  sweep->add_option("-n,--samples", n_samples, "Samples per point (0 = exact)")->default_val(0);
  sweep->add_option("--seed", seed);
  sweep->add_option("--out", out, "CSV file (default stdout)");

  auto *analyze = app.add_subcommand("analyze", "Correlations g2(k, l) and the Neel score");
  add_path(analyze);
  analyze->add_option("--basis", basis);
  analyze->add_option("--sampling-rate", rate);
  analyze->add_option("--spacing", spacing);
  analyze->add_option("-n,--samples", n_samples, "Samples (0 = exact)")->default_val(0);
  analyze->add_option("--seed", seed);
  analyze->add_option("--out", out, "g2 CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kIo;
  }

  try {
    if (validate->parsed()) {
      const auto seq = load_sequence(path, values);
      if (!seq.is_parametrized()) {
        try {
          sample_sequence(seq);
        } catch (const Error &e) {
          throw ValidationError("drives", e.what());
        }
      }
      std::cout << "ok\n";
    } else if (draw->parsed()) {
      const auto &seq = load_sequence(path, values);
      require_concrete(seq);
      std::ofstream f;
      open_out(out, f) << (format == "svg" ? render_svg(seq) : render_text(seq));
    } else if (simulate->parsed()) {
      const auto seq = load_sequence(path, values);
      require_concrete(seq);
      SimConfig cfg;
      cfg.sampling_rate = rate;
      const auto res = run(seq, cfg);
      std::ofstream f;
      open_out(out, f) << res.to_json().dump() << '\n';
    } else if (sample->parsed()) {
      const auto seq = load_sequence(path, values);
      require_concrete(seq);
      SimConfig cfg;
      cfg.sampling_rate = rate;
      const auto counts = run(seq, cfg).sample_final_state(n_samples, optional_basis(basis), seed);
      std::cout << counts_json(counts).dump() << '\n';
    } else if (optimize->parsed()) {
      const auto seq = load_sequence(path);
      if (!seq.is_parametrized()) {
        throw ValidationError("sequence", "optimize needs a parametrized document");
      }
      QaoaOptions opt;
      opt.budget = budget;
      opt.seed = seed;
      opt.samples_per_eval = per_eval;
      opt.final_samples = n_samples;
      for (const auto *v : {&opt.t_variable, &opt.s_variable}) {
        auto it = seq.variables().find(*v);
        if (it != seq.variables().end() && it->second != std::size_t(layers)) {
          throw ValidationError("variables", "variable '" + *v + "' has size " +
                                                 std::to_string(it->second) + ", expected " +
                                                 std::to_string(layers) + " layers");
        }
      }
      const auto graph = blockade_graph(
          seq.reg(), seq.device().rydberg_blockade_radius(1.0));
      const auto res = qaoa_loop(seq, graph, opt);

      std::ofstream tf;
      auto &tos = open_out(trace_path, tf);
      tos << "iteration";
      for (std::size_t i = 0; i < std::size_t(layers); ++i) tos << ",t" << i;
      for (std::size_t i = 0; i < std::size_t(layers); ++i) tos << ",s" << i;
      tos << ",objective\n" << std::setprecision(17);
      for (std::size_t i = 0; i < res.search.trace.size(); ++i) {
        tos << i;
        for (double x : res.search.trace[i].x) tos << ',' << x;
        tos << ',' << res.search.trace[i].value << '\n';
      }
      std::ofstream of;
      open_out(out, of) << json{{"best", res.best},
                                {"best_cost", res.best_cost},
                                {"counts", counts_json(res.counts)}}
                               .dump(2)
                        << '\n';
    } else if (sweep->parsed()) {
      const auto seq = load_sequence(path);
      if (!seq.is_parametrized()) {
        throw ValidationError("sequence", "sweep needs a parametrized document");
      }
      SimConfig cfg;
      cfg.sampling_rate = rate;
      const auto lattice =
          LatticeMap::from_register(seq.reg(), spacing > 0 ? spacing : nearest_spacing(seq.reg()));
      std::ofstream f;
      auto &os = open_out(out, f);
      os << "iteration," << variable << ",neel_score\n" << std::setprecision(17);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto built = seq.build({{variable, {grid[i]}}});
        const auto stats = occupation(run(built, cfg), optional_basis(basis), n_samples, seed + i);
        os << i << ',' << grid[i] << ',' << neel_score(stats, lattice) << '\n';
      }
    } else if (analyze->parsed()) {
      const auto seq = load_sequence(path, values);
      require_concrete(seq);
      SimConfig cfg;
      cfg.sampling_rate = rate;
      const auto lattice =
          LatticeMap::from_register(seq.reg(), spacing > 0 ? spacing : nearest_spacing(seq.reg()));
      const auto stats = occupation(run(seq, cfg), optional_basis(basis), n_samples, seed);
      std::ofstream f;
      write_g2_csv(open_out(out, f), correlation_table(stats, lattice));
      std::cout << std::setprecision(17) << "neel_score " << neel_score(stats, lattice) << '\n';
    }
  } catch (const DocumentError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ValidationError &e) {
    report_violations(e.violations());
    return kInvalid;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
