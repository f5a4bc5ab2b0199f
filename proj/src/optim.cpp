#include "rydpulse/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rydpulse {

namespace {

using Point = std::vector<double>;

class Search {
public:
  Search(const Objective &f, const NelderMeadOptions &opt, std::size_t dim)
      : f_(f), opt_(opt), budget_(std::max(1, opt.max_evaluations)) {
    for (const auto *b : {&opt.lower, &opt.upper}) {
      if (*b && b->value().size() != dim) throw Error("bound dimension does not match x0");
    }
  }

  bool exhausted() const { return int(trace.size()) >= budget_; }

  Point clamp(Point x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (opt_.lower) x[i] = std::max(x[i], (*opt_.lower)[i]);
      if (opt_.upper) x[i] = std::min(x[i], (*opt_.upper)[i]);
    }
    return x;
  }

  double eval(const Point &x) {
    double v = f_(x);
    if (!std::isfinite(v)) {
      if (trace.empty()) throw Error("objective is not finite at the start point");
      v = std::numeric_limits<double>::infinity();
    }
    trace.push_back({x, v});
    return v;
  }

  std::vector<Evaluation> trace;

private:
  const Objective &f_;
  const NelderMeadOptions &opt_;
  int budget_;
};

Point combine(const Point &a, const Point &b, double t) {
  // a + t (b - a)
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

} // namespace

double simplex_diameter(const std::vector<std::vector<double>> &simplex) {
  double d = 0.0;
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    for (std::size_t j = i + 1; j < simplex.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < simplex[i].size(); ++k) {
        s += (simplex[i][k] - simplex[j][k]) * (simplex[i][k] - simplex[j][k]);
      }
      d = std::max(d, std::sqrt(s));
    }
  }
  return d;
}

NelderMeadResult nelder_mead(const Objective &f, std::vector<double> x0,
                             const NelderMeadOptions &opt) {
  if (x0.empty()) throw Error("nelder_mead needs at least one parameter");
  for (double v : x0) {
    if (!std::isfinite(v)) throw Error("start point is not finite");
  }
  const std::size_t d = x0.size();
  Search s(f, opt, d);
  NelderMeadResult res;

  std::vector<Point> xs{s.clamp(x0)};
  std::vector<double> fs{s.eval(xs[0])};
  for (std::size_t i = 0; i < d && !s.exhausted(); ++i) {
    Point v = x0;
    v[i] += opt.initial_step;
    xs.push_back(s.clamp(v));
    fs.push_back(s.eval(xs.back()));
  }

  auto sort_simplex = [&] {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fs[a] < fs[b]; });
    std::vector<Point> nx;
    std::vector<double> nf;
    for (auto k : order) {
      nx.push_back(xs[k]);
      nf.push_back(fs[k]);
    }
    xs = std::move(nx);
    fs = std::move(nf);
  };

  bool flat = false;
  if (xs.size() == d + 1) {
    while (true) {
      sort_simplex();
      double spread = 0.0;
      double size = 0.0;
      for (std::size_t i = 1; i <= d; ++i) {
        spread = std::max(spread, std::abs(fs[i] - fs[0]));
        for (std::size_t k = 0; k < d; ++k) size = std::max(size, std::abs(xs[i][k] - xs[0][k]));
      }
      if (fs.front() == fs.back()) {
        flat = true;
        res.termination = Termination::Flat;
        break;
      }
      if (spread <= opt.fatol && size <= opt.xatol) {
        res.termination = Termination::Tolerance;
        break;
      }
      if (s.exhausted()) break;
      ++res.iterations;

      Point c(d, 0.0);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) c[k] += xs[i][k] / double(d);
      }
      const Point xr = s.clamp(combine(c, xs[d], -1.0));
      const double fr = s.eval(xr);
      if (fr < fs[0]) {
        if (s.exhausted()) {
          xs[d] = xr, fs[d] = fr;
          continue;
        }
        const Point xe = s.clamp(combine(c, xs[d], -2.0));
        const double fe = s.eval(xe);
        if (fe < fr) xs[d] = xe, fs[d] = fe;
        else xs[d] = xr, fs[d] = fr;
        continue;
      }
      if (fr < fs[d - 1]) {
        xs[d] = xr, fs[d] = fr;
        continue;
      }
      if (s.exhausted()) continue;
      bool shrink = false;
      if (fr < fs[d]) {
        const Point xc = s.clamp(combine(c, xr, 0.5));
        const double fc = s.eval(xc);
        if (fc <= fr) xs[d] = xc, fs[d] = fc;
        else shrink = true;
      } else {
        const Point xc = s.clamp(combine(c, xs[d], 0.5));
        const double fc = s.eval(xc);
        if (fc < fs[d]) xs[d] = xc, fs[d] = fc;
        else shrink = true;
      }
      if (shrink) {
        for (std::size_t i = 1; i <= d && !s.exhausted(); ++i) {
          xs[i] = s.clamp(combine(xs[0], xs[i], 0.5));
          fs[i] = s.eval(xs[i]);
        }
      }
    }
  }
  res.simplex = xs;

  if (flat) {
    // Every vertex scored the same: report the simplex centroid.
    Point c(d, 0.0);
    for (const auto &x : xs) {
      for (std::size_t k = 0; k < d; ++k) c[k] += x[k] / double(xs.size());
    }
    c = s.clamp(c);
    if (!s.exhausted()) s.eval(c);
    if (s.trace.back().x == c && s.trace.back().value <= fs[0]) {
      res.trace = std::move(s.trace);
      res.x = c;
      res.value = res.trace.back().value;
      return res;
    }
  }
  res.trace = std::move(s.trace);
  const auto best = std::min_element(res.trace.begin(), res.trace.end(),
                                     [](const auto &a, const auto &b) { return a.value < b.value; });
  res.x = best->x;
  res.value = best->value;
  return res;
}

VariableValues qaoa_values(const std::vector<double> &x, const std::string &t_variable,
                           const std::string &s_variable) {
  if (x.size() % 2 != 0) throw Error("QAOA parameters come in (t, s) pairs");
  const auto half = std::ptrdiff_t(x.size() / 2);
  return {{t_variable, {x.begin(), x.begin() + half}}, {s_variable, {x.begin() + half, x.end()}}};
}

QaoaResult qaoa_loop(const Sequence &seq, const std::vector<Edge> &graph,
                     const QaoaOptions &opt) {
  if (!seq.is_parametrized()) throw Error("qaoa_loop needs a parametrized sequence");
  const auto &vars = seq.variables();
  const auto t_it = vars.find(opt.t_variable);
  const auto s_it = vars.find(opt.s_variable);
  if (t_it == vars.end() || s_it == vars.end()) {
    throw Error("sequence lacks the variables '" + opt.t_variable + "' and '" + opt.s_variable +
                "'");
  }
  if (t_it->second != s_it->second) throw Error("t and s variables differ in size");
  const std::size_t dim = 2 * t_it->second;
  std::vector<double> x0 = opt.x0.empty() ? std::vector<double>(dim, 1.0) : opt.x0;
  if (x0.size() != dim) throw Error("start point has the wrong dimension");

  Nanoseconds min_duration = 1;
  for (const auto &[id, ch] : seq.device().channels()) {
    min_duration = std::max(min_duration, ch.min_duration);
  }

  NelderMeadOptions nm;
  nm.initial_step = opt.initial_step;
  nm.max_evaluations = opt.budget;
  nm.lower = std::vector<double>(dim, double(min_duration) * kTickUs);

  std::uint64_t index = 0;
  auto objective = [&](const std::vector<double> &x) {
    const auto built = seq.build(qaoa_values(x, opt.t_variable, opt.s_variable));
    const auto counts =
        run(built, opt.sim).sample_final_state(opt.samples_per_eval, opt.basis, opt.seed + index++);
    return mis_cost(counts, graph, opt.penalty);
  };

  QaoaResult out;
  out.search = nelder_mead(objective, x0, nm);
  out.best = qaoa_values(out.search.x, opt.t_variable, opt.s_variable);
  out.best_cost = out.search.value;
  const auto final_seq = seq.build(out.best);
  out.counts = run(final_seq, opt.sim)
                   .sample_final_state(opt.final_samples, opt.basis,
                                       opt.seed + std::uint64_t(std::max(0, opt.budget)));
  return out;
}

} // namespace rydpulse
