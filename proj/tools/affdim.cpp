// affdim: command-line front end.

#include <omp.h>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "affdim/config.hpp"
#include "affdim/dimension.hpp"
#include "affdim/error.hpp"
#include "affdim/estimators.hpp"
#include "affdim/ergodic.hpp"
#include "affdim/hochman.hpp"
#include "affdim/pressure.hpp"
#include "affdim/render.hpp"
#include "affdim/report.hpp"
#include "affdim/splitting.hpp"

using namespace affdim;

namespace {

struct Common {
  std::string example;
  std::string config;
  std::vector<std::string> params;
  std::uint64_t seed = 1;
  std::string out;
  bool exact = false;
  int threads = 0;
  std::string weights;
};

void add_common(CLI::App* cmd, Common& c) {
  auto* ex = cmd->add_option("--example", c.example, "built-in example: sec44, phi-c, hl-demo");
  auto* cf = cmd->add_option("--config", c.config, "system file");
  ex->excludes(cf);
  cmd->add_option("--param", c.params, "example parameter k=v")->allow_extra_args(false);
  cmd->add_option("--seed", c.seed, "seed for every random stream");
  cmd->add_option("--out", c.out, "output file (default: standard output)");
  cmd->add_flag("--exact", c.exact, "decide predicates in rational arithmetic");
  cmd->add_option("--threads", c.threads, "OpenMP threads (default: OMP_NUM_THREADS)");
  cmd->add_option("--weights", c.weights, "probability vector p1,p2,... overriding the config");
}

SystemConfig load(const Common& c) {
  if (c.example.empty() == c.config.empty()) throw Error(ErrorCode::InvalidArgument, "give exactly one of --example or --config");
  if (!c.config.empty()) {
    if (!c.params.empty()) throw Error(ErrorCode::InvalidArgument, "--param applies to --example only");
    return load_system_file(c.config);
  }
  ParamMap params;
  for (const auto& kv : c.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--param expects k=v, got '" + kv + "'");
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return builtin_example(c.example, params);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

BernoulliWeights weights_of(const Common& c, const SystemConfig& cfg) {
  if (!c.weights.empty()) {
    std::vector<double> p;
    for (const auto& x : split_list(c.weights, ',')) p.push_back(to_double(parse_rational(x)));
    if (p.size() != cfg.system.size()) throw Error(ErrorCode::InvalidArgument, "--weights needs one entry per map");
    return BernoulliWeights(p);
  }
  return cfg.weights.value_or(BernoulliWeights::uniform(cfg.system.size()));
}

/// "a..b" or a comma list.
std::vector<int> parse_depths(const std::string& s) {
  std::vector<int> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
    if (a < 1 || b < a) throw Error(ErrorCode::InvalidArgument, "bad range '" + s + "'");
    for (int n = a; n <= b; ++n) out.push_back(n);
    return out;
  }
  for (const auto& x : split_list(s, ',')) out.push_back(std::stoi(x));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty depth list");
  return out;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + c.out + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCode::Io, "write to '" + c.out + "' failed");
}

std::string num(double x) { return format_number(x); }

/// Closed-form attractor dimension of the phi-c family, quoted in reports.
std::string phi_c_block(const Common& c) {
  std::string cv = "1/4";
  for (const auto& kv : c.params)
    if (kv.rfind("c=", 0) == 0) cv = kv.substr(2);
  const Rational cr = parse_rational(cv);
  const double x = to_double(cr);
  std::string out = "[closed form]\nc: " + to_string(cr) + "\n";
  if (cr < Rational(1, 3))
    out += "expression: 1 - log 2/log c\nvalue: " + num(1.0 - std::log(2.0) / std::log(x)) + "\n";
  else if (cr > Rational(1, 3))
    out += "expression: 2 + log 2c/log 3\nvalue: " + num(2.0 + std::log(2.0 * x) / std::log(3.0)) + "\n";
  else
    out += "expression: none (|a| = |c|, no dominated splitting)\n";
  return out + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimensions of planar self-affine measures and sets"};
  app.require_subcommand(1);
  Common c;

  auto* analyze_cmd = app.add_subcommand("analyze", "certify the dimension of the measure and the attractor");
  auto* render_cmd = app.add_subcommand("render", "write a P6 image of the attractor");
  auto* pressure_cmd = app.add_subcommand("pressure", "roots of the finite-n pressure");
  auto* lyapunov_cmd = app.add_subcommand("lyapunov", "entropy, Lyapunov exponents and dimension");
  auto* directions_cmd = app.add_subcommand("directions", "sampled strong stable and stable directions");
  auto* hochman_cmd = app.add_subcommand("hochman", "Delta_n rows of a self-similar line IFS");
  auto* boxdim_cmd = app.add_subcommand("boxdim", "box-counting estimate on sampled points");
  auto* ssc_cmd = app.add_subcommand("ssc", "strong separation check on the polygon");
  for (auto* cmd : {analyze_cmd, render_cmd, pressure_cmd, lyapunov_cmd, directions_cmd, hochman_cmd, boxdim_cmd, ssc_cmd})
    add_common(cmd, c);

  int hochman_depth = 6, mc_n = 1000, mc_trials = 1000;
  bool no_attractor = false, json = false, no_empirical = false;
  analyze_cmd->add_option("--hochman-depth", hochman_depth, "largest n for the Delta_n trend");
  analyze_cmd->add_option("--mc-n", mc_n, "Monte Carlo word length");
  analyze_cmd->add_option("--mc-trials", mc_trials, "Monte Carlo trials");
  analyze_cmd->add_flag("--no-attractor", no_attractor, "skip the attractor report");
  analyze_cmd->add_flag("--no-empirical", no_empirical, "no correlation estimate of dim nu_ss");
  analyze_cmd->add_flag("--json", json, "machine-readable report");

  int width = 512, height = 512, depth = 6;
  std::size_t count = 200000;
  std::string mode = "cylinders", viewport;
  render_cmd->add_option("--width", width, "pixels");
  render_cmd->add_option("--height", height, "pixels");
  render_cmd->add_option("--mode", mode, "cylinders or chaos")->check(CLI::IsMember({"cylinders", "chaos"}));
  render_cmd->add_option("--depth", depth, "word length");
  render_cmd->add_option("--count", count, "chaos-mode points");
  render_cmd->add_option("--viewport", viewport, "x_min,y_min,x_max,y_max");

  std::string pressure_n;
  double pressure_tol = 1e-10;
  pressure_cmd->add_option("--n", pressure_n, "depths, e.g. 2,4,8");
  pressure_cmd->add_option("--tol", pressure_tol, "bisection width");

  int ly_n = 1000, ly_trials = 1000;
  bool bits = false, monte_carlo = false;
  lyapunov_cmd->add_option("--n", ly_n, "Monte Carlo word length");
  lyapunov_cmd->add_option("--trials", ly_trials, "Monte Carlo trials");
  lyapunov_cmd->add_flag("--bits", bits, "display in bits");
  lyapunov_cmd->add_flag("--monte-carlo", monte_carlo, "estimate even when exact formulas apply");

  std::size_t dir_count = 1000;
  int dir_depth = 400;
  directions_cmd->add_option("--count", dir_count, "samples");
  directions_cmd->add_option("--depth", dir_depth, "prefix length");

  std::string maps, hoch_n = "1..6", which = "auto";
  bool hoch_float = false;
  hochman_cmd->add_option("--maps", maps, "beta,gamma;beta,gamma;...");
  hochman_cmd->add_option("--n", hoch_n, "a..b or a list");
  hochman_cmd->add_option("--ifs", which, "which line IFS of the system")->check(CLI::IsMember({"auto", "horizontal", "direction"}));
  hochman_cmd->add_flag("--float", hoch_float, "double precision gaps");

  std::size_t points = 1'000'000;
  int k_min = 4, k_max = 9, sample_depth = 40;
  boxdim_cmd->add_option("--points", points, "sampled points");
  boxdim_cmd->add_option("--kmin", k_min, "coarsest scale 2^-k");
  boxdim_cmd->add_option("--kmax", k_max, "finest scale 2^-k");
  boxdim_cmd->add_option("--depth", sample_depth, "sampling word length");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c.threads > 0) omp_set_num_threads(c.threads);

    if (*hochman_cmd && !maps.empty()) {
      if (!c.example.empty() || !c.config.empty())
        throw Error(ErrorCode::InvalidArgument, "--maps excludes --example and --config");
    }

    if (*hochman_cmd) {
      LineIfs ifs;
      std::string label = "maps";
      if (!maps.empty()) {
        ifs = parse_line_ifs(maps);
      } else {
        const auto cfg = load(c);
        std::string kind = which;
        if (kind == "auto") {
          const auto t = check_triangular_split(cfg.system);
          kind = t == TriangularSplit::CDominant ? "direction" : "horizontal";
        }
        ifs = kind == "direction" ? direction_ifs(cfg.system) : horizontal_ifs(cfg.system);
        label = kind;
      }
      const auto depths = parse_depths(hoch_n);
      Table t{{"n", "delta_n", "rate"}, {}};
      for (int n : depths) {
        const auto d = delta_n(ifs, n, !hoch_float);
        double rate = d.infinite ? -INFINITY : (d.zero() ? INFINITY : -std::log(d.value) / n);
        t.add({std::to_string(n), d.to_string(), num(rate)});
      }
      std::string text = t.str();
      if (depths.size() >= 2 && depths.front() == 1) {
        const auto rep = hochman_rate(ifs, depths.back(), !hoch_float);
        text += "# ifs: " + label + "\n# verdict: " + std::string(to_string(rep.verdict)) + "\n";
      }
      emit(c, text);
      return 0;
    }

    const SystemConfig cfg = load(c);
    const IfsSystem& sys = cfg.system;
    const BernoulliWeights w = weights_of(c, cfg);

    if (*analyze_cmd) {
      AnalyzeOptions o;
      o.weights = w;
      o.polygon = cfg.polygon;
      o.forward_cone = cfg.forward_cone;
      o.backward_cone = cfg.backward_cone;
      o.subsystem = cfg.subsystem;
      o.hochman_depth = hochman_depth;
      o.mc_n = mc_n;
      o.mc_trials = mc_trials;
      o.seed = c.seed;
      o.exact = c.exact;
      o.attractor = !no_attractor;
      o.empirical = !no_empirical;
      const AnalysisResult r = analyze(sys, o);
      std::string text = json ? analysis_json(r, w).dump(2) + "\n" : format_analysis(r, w);
      if (!json && c.example == "phi-c") {
        const auto at = text.rfind("exit: ");
        text.insert(at, phi_c_block(c));
      }
      emit(c, text);
      return r.exit_code();
    }

    if (*render_cmd) {
      if (c.out.empty()) throw Error(ErrorCode::InvalidArgument, "render needs --out");
      RenderSpec spec;
      spec.width = width;
      spec.height = height;
      spec.mode = mode == "chaos" ? RenderMode::Chaos : RenderMode::Cylinders;
      spec.depth = depth;
      spec.count = count;
      spec.seed = c.seed;
      if (!viewport.empty()) {
        const auto v = split_list(viewport, ',');
        if (v.size() != 4) throw Error(ErrorCode::InvalidArgument, "--viewport needs four numbers");
        spec.viewport = {std::stod(v[0]), std::stod(v[1]), std::stod(v[2]), std::stod(v[3])};
      } else if (cfg.polygon) {
        double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
        for (const auto& p : cfg.polygon->vertices) {
          x0 = std::min(x0, p.x), y0 = std::min(y0, p.y), x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
        }
        spec.viewport = {x0, y0, x1, y1};
      }
      const Polygon poly = cfg.polygon.value_or(unit_square());
      emit(c, to_p6(render(sys, w, poly, spec)));
      return 0;
    }

    if (*pressure_cmd) {
      const std::vector<int> sched = pressure_n.empty() ? default_schedule(sys.size()) : parse_depths(pressure_n);
      const RootEstimate est = pressure_root(sys.linear_parts(), sched, pressure_tol);
      Table t{{"n", "root"}, {}};
      for (const auto& row : est.history) t.add({std::to_string(row.n), num(row.root)});
      std::string text = t.str();
      if (est.extrapolated) text += "# extrapolated root (heuristic): " + num(*est.extrapolated) + "\n";
      if (sys.lower_triangular() && check_triangular_split(sys) != TriangularSplit::None) {
        const auto r = triangular_roots(sys);
        text += "# closed-form root: " + num(r.pressure_root) + " (s1 " + num(r.s1) + ", s2 " + num(r.s2) + ")\n";
      }
      emit(c, text);
      return 0;
    }

    if (*lyapunov_cmd) {
      const bool exact = sys.lower_triangular() && !monte_carlo;
      const ExponentTriple ex = exact ? lyapunov_triangular(sys, w) : lyapunov_monte_carlo(sys, w, ly_n, ly_trials, c.seed);
      const double unit = bits ? 1.0 / std::log(2.0) : 1.0;
      Table t{{"chi_s", "chi_ss", "h", "dim_lyap", "stderr_s", "stderr_ss", "method"}, {}};
      t.add({num(ex.chi_s * unit), num(ex.chi_ss * unit), num(ex.entropy * unit), num(lyapunov_dimension(ex)),
             num(ex.stderr_s * unit), num(ex.stderr_ss * unit), exact ? "exact" : "monte-carlo"});
      emit(c, t.str());
      return 0;
    }

    if (*directions_cmd) {
      const SplitReport split = certify_splitting(sys, cfg.forward_cone);
      if (split.verdict != SplitVerdict::Certified)
        throw Error(ErrorCode::NotCertified, "dominated splitting not certified: " + split.note);
      const auto ss = sample_nu_ss(sys, w, split, dir_depth, dir_count, c.seed);
      const auto s = sample_e_s(sys, w, split, dir_depth, dir_count, c.seed);
      Table t{{"k", "theta_ss", "theta_s"}, {}};
      for (std::size_t k = 0; k < ss.size(); ++k) t.add({std::to_string(k), num(ss[k].theta()), num(s[k].theta())});
      std::string text = t.str();
      const auto back = find_backward_non_overlapping(sys, split, cfg.backward_cone, c.seed);
      text += "# backward non-overlapping: " + std::string(back.holds ? "holds" : "fails") + "\n";
      if (back.holds) {
        const ExponentTriple ex =
            sys.lower_triangular() ? lyapunov_triangular(sys, w) : lyapunov_monte_carlo(sys, w, 1000, 1000, c.seed);
        text += "# dim nu_ss closed form h/(chi_ss-chi_s): " + num(ex.entropy / (ex.chi_ss - ex.chi_s)) + "\n";
      }
      emit(c, text);
      return 0;
    }

    if (*boxdim_cmd) {
      SampleOptions so;
      so.depth = sample_depth;
      so.count = points;
      so.seed = c.seed;
      const auto pts = sample_measure(sys, w, so);
      const auto est = box_dimension_estimate(pts, k_min, k_max);
      Table t{{"k", "scale", "boxes"}, {}};
      for (std::size_t i = 0; i < est.scales.size(); ++i)
        t.add({std::to_string(k_min + static_cast<int>(i)), num(est.scales[i]), num(est.values[i])});
      emit(c, t.str() + "# slope: " + num(est.slope) + "\n# r2: " + num(est.r2) + "\n");
      return 0;
    }

    if (*ssc_cmd) {
      if (!cfg.polygon) throw Error(ErrorCode::InvalidArgument, "the system has no polygon");
      const SscSummary s = certify_ssc(sys, cfg.polygon, c.exact);
      std::string text = "holds: " + std::string(s.holds ? "true" : "false") + "\n";
      text += "refined: " + std::string(s.refined ? "true" : "false") + "\n";
      text += "exact: " + std::string(s.exact ? "true" : "false") + "\n";
      if (s.holds)
        text += "kappa: " + num(s.kappa) + "\nmargin: " + num(s.margin) + "\n";
      else
        text += "witness: " + s.witness + "\n";
      emit(c, text);
      return s.holds ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
