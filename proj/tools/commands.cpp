#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bloch/bayes.hpp"
#include "bloch/errors.hpp"
#include "bloch/falsifier.hpp"
#include "bloch/metrics.hpp"
#include "bloch/parallel.hpp"
#include "bloch/reference.hpp"

#ifndef BLOCH_INFOGEO_VERSION
#define BLOCH_INFOGEO_VERSION "0.0.0"
#endif

namespace bloch::cli {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("malformed " + what + ": '" + text + "'");
  }
}

int to_int(const std::string& text, const std::string& what) {
  const double v = to_double(text, what);
  if (v != static_cast<int>(v)) throw UsageError("malformed " + what + ": '" + text + "'");
  return static_cast<int>(v);
}

json quadrature_json(const QuadratureSpec& s) {
  return {{"radial_nodes", s.radial_nodes},
          {"polar_nodes", s.polar_nodes},
          {"azimuthal_nodes", s.azimuthal_nodes},
          {"sine_substitution", s.sine_substitution},
          {"boundary_grading", s.boundary_grading},
          {"tolerance", s.tolerance}};
}

// Collects everything a manifest echoes; finished once the command is done.
struct Run {
  std::string command;
  std::vector<std::string> args;
  QuadratureSpec spec;
  std::string config_path;
  json seed = nullptr;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json manifest() const {
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    return {{"command", command},
            {"args", args},
            {"config", config_path.empty() ? json(nullptr) : json(config_path)},
            {"quadrature", quadrature_json(spec)},
            {"seed", seed},
            {"threads", configured_threads()},
            {"version", BLOCH_INFOGEO_VERSION},
            {"wall_time_s", wall.count()}};
  }
};

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_csv(std::ostream& out, const Run& run, const std::string& body) {
  out << "# manifest " << run.manifest().dump() << '\n' << body;
}

// Writes to --out when given, else to `out`.
void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

std::string density_name(const std::string& name, const std::string& likelihood) {
  if (likelihood.empty()) return name;
  if (name.find(":posterior:") != std::string::npos) {
    throw UsageError("--likelihood given for a density that is already a posterior: " + name);
  }
  return name + ":posterior:" + likelihood;
}

int cmd_metric(const Run& run, const std::vector<std::string>& ids, const std::string& r_text,
               const std::string& grid_text, bool imputed, std::ostream& out) {
  std::ostringstream body;
  if (imputed) {
    const auto grid = parse_grid(grid_text.empty() ? "0:1:101" : grid_text);
    body << "t,imputed_f,series\n";
    for (double t : grid) {
      body << format_number(t) << ',' << format_number(imputed_f(t)) << ',' << format_number(imputed_f_series(t))
           << '\n';
    }
    write_csv(out, run, body.str());
    return kExitOk;
  }
  if (ids.empty()) throw UsageError("metric needs --id (or --imputed-f)");
  if (r_text.empty() == grid_text.empty()) throw UsageError("metric needs exactly one of --r and --grid");
  const auto grid = r_text.empty() ? parse_grid(grid_text) : std::vector<double>{to_double(r_text, "--r")};
  std::vector<MetricModel> models;
  for (const auto& id : ids) models.push_back(MetricModel::parse(id));
  body << "metric,r,radial,normal\n";
  for (const auto& m : models) {
    for (double r : grid) {
      const auto c = m.coefficients(r);
      body << m.id() << ',' << format_number(r) << ',' << format_number(c.radial) << ',' << format_number(c.normal)
           << '\n';
    }
  }
  write_csv(out, run, body.str());
  return kExitOk;
}

int cmd_divergence(const Run& run, const std::string& p_name, const std::string& q_name,
                   const std::string& likelihood, std::ostream& out) {
  const auto p = named_density(density_name(p_name, likelihood), run.spec);
  const auto q = named_density(q_name, run.spec);
  const double d = relative_entropy(p, q, run.spec);
  const json doc = {{"p", p.label()},
                    {"q", q.label()},
                    {"value", d},
                    {"spec", quadrature_json(run.spec)},
                    {"manifest", run.manifest()}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_marginal(const Run& run, const std::vector<std::string>& names, const std::string& grid_text,
                 const std::string& critical_text, const std::string& out_path, std::ostream& out) {
  const auto grid = parse_grid(grid_text);
  std::vector<BallDensity> densities;
  for (const auto& n : names) densities.push_back(named_density(n, run.spec));

  std::vector<std::vector<MarginalSample>> curves;
  for (const auto& p : densities) curves.push_back(radial_marginal(p, grid, run.spec));

  std::ostringstream body;
  if (!critical_text.empty()) {
    const auto range = parse_grid(critical_text + ":2");
    for (const auto& p : densities) {
      body << "# critical " << p.label();
      for (double r : marginal_critical_points(p, range.front(), range.back(), 64, run.spec)) {
        body << ' ' << format_number(r);
      }
      body << '\n';
    }
  }
  body << 'r';
  for (const auto& p : densities) body << ',' << p.label();
  body << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    body << format_number(grid[i]);
    for (const auto& c : curves) body << ',' << format_number(c[i].density);
    body << '\n';
  }
  std::ostringstream text;
  write_csv(text, run, body.str());
  emit(out, out_path, text.str());
  return kExitOk;
}

json record_json(const MetricModel& metric, const ViolationRecord& v) {
  return {{"type", "violation"},
          {"metric", metric.id()},
          {"state", {{"r", v.state.r}, {"theta", v.state.theta}, {"phi", v.state.phi}}},
          {"differential", {{"dr", v.differential.dr}, {"dtheta", v.differential.dtheta}, {"dphi", v.differential.dphi}}},
          {"u", v.u},
          {"v", v.v},
          {"pre_distance", v.pre_distance},
          {"post_distance", v.post_distance},
          {"ratio", v.ratio},
          {"seed", v.seed},
          {"trial", v.trial}};
}

ViolationRecord record_from_json(const json& j) {
  ViolationRecord v;
  v.state = {j.at("state").at("r").get<double>(), j.at("state").at("theta").get<double>(),
             j.at("state").at("phi").get<double>()};
  v.differential = {j.at("differential").at("dr").get<double>(), j.at("differential").at("dtheta").get<double>(),
                    j.at("differential").at("dphi").get<double>()};
  v.u = j.at("u").get<double>();
  v.v = j.at("v").get<double>();
  v.pre_distance = j.at("pre_distance").get<double>();
  v.post_distance = j.at("post_distance").get<double>();
  v.ratio = j.at("ratio").get<double>();
  v.seed = j.at("seed").get<std::uint64_t>();
  v.trial = j.at("trial").get<std::uint64_t>();
  return v;
}

int cmd_falsify(Run& run, const SearchConfig& cfg, const std::string& out_path, std::ostream& out) {
  run.seed = cfg.seed;
  const auto result = search(cfg);
  std::ostringstream text;
  text << json{{"type", "manifest"}, {"manifest", run.manifest()}}.dump() << '\n';
  for (const auto& v : result.violations) text << record_json(cfg.metric, v).dump() << '\n';
  text << json{{"type", "summary"},
               {"metric", cfg.metric.id()},
               {"trials", result.trials},
               {"violations", result.violations.size()},
               {"unital_only", cfg.unital_only}}
              .dump()
       << '\n';
  emit(out, out_path, text.str());
  return kExitOk;
}

int cmd_replay(const Run& run, const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream body;
  std::size_t records = 0;
  std::size_t identical = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw UsageError("malformed record line: " + std::string(e.what()));
    }
    if (j.value("type", "") != "violation") continue;
    ViolationRecord rec;
    MetricModel metric = MetricModel::brody_hughston();
    try {
      rec = record_from_json(j);
      metric = MetricModel::parse(j.at("metric").get<std::string>());
    } catch (const json::exception& e) {
      throw UsageError("malformed record: " + std::string(e.what()));
    }
    const auto check = verify_case(metric, rec);
    const bool same = check.pre_distance == rec.pre_distance && check.post_distance == rec.post_distance;
    ++records;
    if (same) ++identical;
    body << json{{"type", "replay"},
                 {"trial", rec.trial},
                 {"pre_distance", check.pre_distance},
                 {"post_distance", check.post_distance},
                 {"identical", same}}
                .dump()
         << '\n';
  }
  out << json{{"type", "manifest"}, {"manifest", run.manifest()}}.dump() << '\n' << body.str();
  out << json{{"type", "summary"}, {"records", records}, {"identical", identical}}.dump() << '\n';
  return identical == records ? kExitOk : kExitAccuracy;
}

int cmd_redundancy(const Run& run, const std::string& metric_id, double volume, bool volume_given,
                   std::ostream& out) {
  json doc;
  if (volume_given) {
    if (!metric_id.empty()) throw UsageError("redundancy takes --metric or --volume, not both");
    doc["metric"] = nullptr;
  } else {
    if (metric_id.empty()) throw UsageError("redundancy needs --metric or --volume");
    const auto m = MetricModel::parse(metric_id);
    volume = fisher_volume(m, run.spec);
    doc["metric"] = m.id();
  }
  doc["dimension"] = 3;
  doc["volume"] = volume;
  doc["value"] = redundancy_constant(3, volume);
  doc["spec"] = quadrature_json(run.spec);
  doc["manifest"] = run.manifest();
  out << doc.dump(2) << '\n';
  return kExitOk;
}

DominanceNormalization parse_normalization(const std::string& s) {
  if (s == "as-defined") return DominanceNormalization::kAsDefined;
  if (s == "quarter") return DominanceNormalization::kQuarterScaled;
  if (s == "origin") return DominanceNormalization::kOriginMatched;
  throw UsageError("unknown normalization '" + s + "' (as-defined, quarter, origin)");
}

int cmd_dominance(const Run& run, const std::string& a_id, const std::string& b_id, const std::string& grid_text,
                  const std::string& normalization, std::ostream& out) {
  const auto a = MetricModel::parse(a_id);
  const auto b = MetricModel::parse(b_id);
  const auto grid = parse_grid(grid_text);
  const auto report = dominance_report(a, b, grid, parse_normalization(normalization));
  std::ostringstream body;
  body << "# scale " << format_number(report.scale) << '\n';
  body << "# a_dominates " << (report.a_dominates ? "true" : "false") << '\n';
  body << "# b_radial_exceeds_a " << (report.b_radial_exceeds_a ? "true" : "false") << '\n';
  for (const auto& reg : report.regions) {
    body << "# region " << format_number(reg.r_lo) << ' ' << format_number(reg.r_hi) << " negative " << reg.negative
         << '/' << reg.samples;
    if (reg.samples > 0) body << " min_eigenvalue " << format_number(reg.min_eigenvalue);
    body << '\n';
  }
  body << "r,radial_difference,normal_difference,min_eigenvalue\n";
  for (const auto& s : report.samples) {
    body << format_number(s.r) << ',' << format_number(s.radial_difference) << ','
         << format_number(s.normal_difference) << ',' << format_number(s.min_eigenvalue) << '\n';
  }
  write_csv(out, run, body.str());
  return kExitOk;
}

int cmd_reproduce(const Run& run, const std::vector<int>& ids_in, std::ostream& out) {
  std::vector<int> ids = ids_in;
  if (ids.empty()) {
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  }
  std::size_t failed = 0;
  std::size_t checks = 0;
  for (int id : ids) {
    if (id < 1 || id > kCriterionCount) throw UsageError("criterion ids run from 1 to " + std::to_string(kCriterionCount));
    const auto res = run_criterion(id, run.spec);
    for (const auto& c : res.checks) {
      ++checks;
      if (!c.pass) ++failed;
      out << (c.pass ? "PASS " : "FAIL ") << id << ' ' << c.name << " value=" << format_number(c.value);
      if (c.tolerance > 0.0) {
        out << " expected=" << format_number(c.expected) << (c.relative ? " rel_tol=" : " tol=") << c.tolerance;
      }
      if (!c.detail.empty()) out << " (" << c.detail << ')';
      out << '\n';
    }
    out << (res.pass() ? "PASS" : "FAIL") << " criterion " << id << ": " << res.title << '\n';
  }
  out << "# summary checks=" << checks << " failed=" << failed << '\n';
  out << "# manifest " << run.manifest().dump() << '\n';
  return kExitOk;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  if (parts.size() != 3) throw UsageError("grid must look like a:b:n, got '" + std::string(text) + "'");
  const double a = to_double(trim(parts[0]), "grid start");
  const double b = to_double(trim(parts[1]), "grid end");
  const int n = to_int(trim(parts[2]), "grid count");
  if (n < 1) throw UsageError("grid count must be >= 1");
  if (!(b >= a)) throw UsageError("grid end must not be below its start");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  if (n > 1) grid.back() = b;
  return grid;
}

QuadratureSpec apply_config(const QuadratureSpec& spec, std::istream& in) {
  QuadratureSpec s = spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + " has no '='");
    const auto key = trim(std::string_view(t).substr(0, eq));
    const auto value = trim(std::string_view(t).substr(eq + 1));
    if (key == "radial_nodes") {
      s.radial_nodes = to_int(value, key);
    } else if (key == "polar_nodes") {
      s.polar_nodes = to_int(value, key);
    } else if (key == "azimuthal_nodes") {
      s.azimuthal_nodes = to_int(value, key);
    } else if (key == "boundary_grading") {
      s.boundary_grading = to_int(value, key);
    } else if (key == "tolerance") {
      s.tolerance = to_double(value, key);
    } else if (key == "sine_substitution") {
      if (value == "true" || value == "1") {
        s.sine_substitution = true;
      } else if (value == "false" || value == "0") {
        s.sine_substitution = false;
      } else {
        throw UsageError("sine_substitution must be true or false");
      }
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return s;
}

QuadratureSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  return apply_config(QuadratureSpec{}, in);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information geometry of the qubit Bloch ball", "bloch_infogeo"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file with quadrature overrides");

  std::vector<std::string> metric_ids;
  std::string metric_r, metric_grid;
  bool metric_imputed = false;
  auto* metric = app.add_subcommand("metric", "radial/normal coefficients as CSV");
  metric->add_option("--id", metric_ids, "metric id (repeatable)");
  metric->add_option("--r", metric_r, "single radius");
  metric->add_option("--grid", metric_grid, "a:b:n radius grid");
  metric->add_flag("--imputed-f", metric_imputed, "imputed f and its series over t (default grid 0:1:101)");

  std::string div_p, div_q, div_likelihood;
  auto* divergence = app.add_subcommand("divergence", "relative entropy D(p||q) as JSON");
  divergence->add_option("--p", div_p, "density name, e.g. MC or B:posterior:cube4")->required();
  divergence->add_option("--q", div_q, "density name")->required();
  divergence->add_option("--likelihood", div_likelihood, "turn --p into its posterior, e.g. oct3");

  std::vector<std::string> marg_names;
  std::string marg_grid = "0.005:0.995:199", marg_out, marg_critical;
  auto* marginal = app.add_subcommand("marginal", "radial marginals as CSV");
  marginal->add_option("--density", marg_names, "density name (repeatable)")->required();
  marginal->add_option("--grid", marg_grid, "a:b:n radius grid");
  marginal->add_option("--critical", marg_critical, "lo:hi range searched for turning points");
  marginal->add_option("--out", marg_out, "output file (default stdout)");

  std::string fal_metric = "BH", fal_out, fal_replay;
  std::uint64_t fal_trials = 100000, fal_seed = 1;
  unsigned fal_workers = 0;
  double fal_scale = 1e-5;
  bool fal_unital = false;
  auto* falsify = app.add_subcommand("falsify", "randomised monotonicity search, JSONL");
  falsify->add_option("--metric", fal_metric, "metric id");
  falsify->add_option("--trials", fal_trials, "number of trials");
  falsify->add_option("--seed", fal_seed, "seed");
  falsify->add_option("--workers", fal_workers, "worker threads (0 = default)");
  falsify->add_option("--scale", fal_scale, "differential half-width");
  falsify->add_flag("--unital", fal_unital, "restrict to unital channels (u = 0)");
  falsify->add_option("--out", fal_out, "output file (default stdout)");
  falsify->add_option("--replay", fal_replay, "verify the records of a JSONL file instead of searching");

  std::string red_metric;
  double red_volume = 0.0;
  auto* redundancy = app.add_subcommand("redundancy", "minimax redundancy constant as JSON");
  redundancy->add_option("--metric", red_metric, "metric id");
  auto* red_volume_opt = redundancy->add_option("--volume", red_volume, "use this volume instead of a metric");

  std::string dom_a = "BH", dom_b, dom_grid = "0.01:0.99:99", dom_norm = "as-defined";
  auto* dominance = app.add_subcommand("dominance", "tensor dominance diagnostics as CSV");
  dominance->add_option("--a", dom_a, "metric id");
  dominance->add_option("--b", dom_b, "metric id")->required();
  dominance->add_option("--grid", dom_grid, "a:b:n radius grid");
  dominance->add_option("--normalization", dom_norm, "as-defined, quarter or origin");

  std::vector<int> rep_ids;
  auto* reproduce = app.add_subcommand("reproduce-paper", "run the reference table and report pass/fail");
  reproduce->add_option("--criteria", rep_ids, "criterion ids (default all)")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  Run run;
  run.args = args;
  try {
    if (!config_path.empty()) {
      run.spec = load_config(config_path);
      run.config_path = config_path;
    }
    if (metric->parsed()) {
      run.command = "metric";
      return cmd_metric(run, metric_ids, metric_r, metric_grid, metric_imputed, out);
    }
    if (divergence->parsed()) {
      run.command = "divergence";
      return cmd_divergence(run, div_p, div_q, div_likelihood, out);
    }
    if (marginal->parsed()) {
      run.command = "marginal";
      return cmd_marginal(run, marg_names, marg_grid, marg_critical, marg_out, out);
    }
    if (falsify->parsed()) {
      run.command = "falsify";
      if (!fal_replay.empty()) return cmd_replay(run, fal_replay, out);
      SearchConfig cfg;
      cfg.metric = MetricModel::parse(fal_metric);
      cfg.trials = fal_trials;
      cfg.seed = fal_seed;
      cfg.workers = fal_workers;
      cfg.differential_scale = fal_scale;
      cfg.unital_only = fal_unital;
      cfg.validate();
      return cmd_falsify(run, cfg, fal_out, out);
    }
    if (redundancy->parsed()) {
      run.command = "redundancy";
      return cmd_redundancy(run, red_metric, red_volume, red_volume_opt->count() > 0, out);
    }
    if (dominance->parsed()) {
      run.command = "dominance";
      return cmd_dominance(run, dom_a, dom_b, dom_grid, dom_norm, out);
    }
    run.command = "reproduce-paper";
    return cmd_reproduce(run, rep_ids, out);
  } catch (const AccuracyError& e) {
    err << "accuracy failure: " << e.what() << " (coarse " << format_number(e.coarse_estimate()) << ", fine "
        << format_number(e.fine_estimate()) << ")\n";
    return kExitAccuracy;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownIdError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace bloch::cli
