#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcph/acceptance.hpp"
#include "mcph/distributions.hpp"
#include "mcph/format.hpp"
#include "mcph/functionals.hpp"
#include "mcph/quadrature.hpp"
#include "mcph/rng.hpp"
#include "mcph/sampling.hpp"
#include "mcph/validation.hpp"

namespace {

using nlohmann::json;

struct ParamOpts {
  double lambda_p = 1e-5;
  double R = 50.0;
  double r0 = 15.0;
  double m1 = 0.0;  // 0 means: derive from m2 so the self-hole retained mean is m2
  double m2 = 20.0;
};

std::string g_config_path;  // accepted per subcommand; handled by inject_config

void add_param_options(CLI::App* cmd, ParamOpts& o) {
  cmd->add_option("--lambda-p", o.lambda_p, "Parent intensity [1/m^3]")
      ->capture_default_str();
  cmd->add_option("--cluster-radius,--R", o.R, "Cluster ball radius R [m]")
      ->capture_default_str();
  cmd->add_option("--hole-radius,--r0", o.r0, "Exclusion hole radius r0 [m]")
      ->capture_default_str();
  cmd->add_option("--m1", o.m1,
                  "Mean candidate points per cluster; 0 derives it from --m2")
      ->capture_default_str();
  cmd->add_option("--m2", o.m2, "Mean retained points per cluster")
      ->capture_default_str();
}

mcph::ProcessParams build_params(const ParamOpts& o) {
  mcph::ProcessParams p;
  p.lambda_p = o.lambda_p;
  p.R = o.R;
  p.r0 = o.r0;
  p.M2 = o.m2;
  p.M1 = o.m1 > 0.0 ? o.m1 : mcph::derive_m1(o.m2, o.r0, o.R);
  p.validate();
  return p;
}

json params_json(const mcph::ProcessParams& p) {
  return json{{"lambda_p", p.lambda_p},
              {"R", p.R},
              {"r0", p.r0},
              {"M1", p.M1},
              {"M2", p.M2}};
}

struct GridSpec {
  double min = 0.0;
  double max = 100.0;
  double step = 1.0;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.min >> c1 >> g.max >> c2 >> g.step) || c1 != ':' || c2 != ':') {
    throw std::invalid_argument("grid must be min:max:step");
  }
  if (!(g.step > 0.0) || g.max < g.min) {
    throw std::invalid_argument("grid requires step > 0 and max >= min");
  }
  return g;
}

std::vector<double> grid_points(const GridSpec& g) {
  const auto n = static_cast<std::size_t>((g.max - g.min) / g.step + 1e-9);
  std::vector<double> pts;
  pts.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) pts.push_back(g.min + g.step * i);
  return pts;
}

json grid_json(const GridSpec& g) {
  return json{{"min", g.min}, {"max", g.max}, {"step", g.step}};
}

void add_quadrature_options(CLI::App* cmd, mcph::QuadratureSpec& spec) {
  cmd->add_option("--abs-tol", spec.abs_tol, "Quadrature absolute tolerance")
      ->capture_default_str();
  cmd->add_option("--rel-tol", spec.rel_tol, "Quadrature relative tolerance")
      ->capture_default_str();
  cmd->add_option("--max-subdiv", spec.max_subdivisions,
                  "Quadrature subdivision budget")
      ->capture_default_str();
}

json quadrature_json(const mcph::QuadratureSpec& s) {
  return json{{"abs_tol", s.abs_tol},
              {"rel_tol", s.rel_tol},
              {"max_subdivisions", s.max_subdivisions}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

// Flat key=value config lines become --key=value tokens injected ahead of the
// explicit command-line flags, so the command line wins on conflicts.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line is not key=value: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw std::invalid_argument("invalid config key in line: " + line);
    }
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

// Rebuilds argv as [prog, subcommand, <config tokens>, <remaining args>].
std::vector<std::string> inject_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2) return args;
  std::string config_path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;
  std::vector<std::string> rebuilt{args[0], args[1]};
  for (std::string& t : config_tokens(config_path)) rebuilt.push_back(std::move(t));
  rebuilt.insert(rebuilt.end(), args.begin() + 2, args.end());
  return rebuilt;
}

void write_meta(const std::string& csv_path, const std::string& explicit_path,
                const json& meta) {
  const std::string path =
      explicit_path.empty() ? csv_path + ".meta.json" : explicit_path;
  write_text_file(path, meta.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

int run_sample(const ParamOpts& po, const std::string& mode_str, double window,
               std::uint64_t seed, const std::string& out_path,
               const std::string& meta_path) {
  const mcph::ProcessParams p = build_params(po);
  const mcph::SamplerMode mode = mcph::parse_sampler_mode(mode_str);
  mcph::Rng rng = mcph::Rng::seeded(seed);
  const mcph::Realization real = mcph::sample_realization(p, window, mode, rng);

  std::ostringstream csv;
  mcph::write_realization_csv(real, csv);
  write_text_file(out_path, csv.str());

  std::size_t thinned = 0, inside = 0;
  for (const mcph::Offspring& o : real.offspring) {
    if (o.thinned) ++thinned;
    if (!o.thinned && mcph::norm(o.point) <= window) ++inside;
  }
  std::cout << "parents=" << real.parents.size() << " offspring=" << real.offspring.size()
            << " thinned=" << thinned << " inside_window=" << inside << "\n";

  json meta;
  meta["command"] = "sample";
  meta["params"] = params_json(p);
  meta["mode"] = mode_str;
  meta["window"] = window;
  meta["seed"] = seed;
  meta["output"] = out_path;
  meta["counts"] = {{"parents", real.parents.size()},
                    {"offspring", real.offspring.size()},
                    {"thinned", thinned},
                    {"inside_window", inside}};
  write_meta(out_path, meta_path, meta);
  return 0;
}

int run_distance(const ParamOpts& po, const std::string& process_str, double x_norm,
                 const GridSpec& grid, bool apply_correction,
                 const std::string& out_path, const std::string& meta_path) {
  const mcph::ProcessParams p = build_params(po);
  const mcph::Process process = mcph::parse_process(process_str);
  if (apply_correction && process != mcph::Process::MCPH) {
    throw std::invalid_argument("--hole-correction applies to the mcph process only");
  }
  const double factor =
      apply_correction ? mcph::hole_correction(p.lambda_p, p.r0) : 1.0;

  std::ostringstream csv;
  csv << "r,pdf,cdf,case_no,branch_no\n";
  for (const double r : grid_points(grid)) {
    const mcph::PdfEval e = process == mcph::Process::MCPH
                                ? mcph::mcph_distance_pdf_ub(r, x_norm, p)
                                : mcph::mcp_distance_pdf(r, x_norm, p);
    const double cdf = process == mcph::Process::MCPH
                           ? mcph::mcph_distance_cdf_ub(r, x_norm, p)
                           : mcph::mcp_distance_cdf(r, x_norm, p);
    csv << mcph::fmt_double(r) << ',' << mcph::fmt_double(e.value * factor) << ','
        << mcph::fmt_double(cdf) << ',' << e.index.case_no << ',' << e.index.branch_no
        << '\n';
  }
  write_text_file(out_path, csv.str());

  json meta;
  meta["command"] = "distance";
  meta["params"] = params_json(p);
  meta["process"] = process_str;
  meta["x_norm"] = x_norm;
  meta["grid"] = grid_json(grid);
  meta["hole_correction"] = apply_correction;
  meta["correction_factor"] = factor;
  meta["output"] = out_path;
  write_meta(out_path, meta_path, meta);
  return 0;
}

int run_contact(const ParamOpts& po, const std::string& process_str,
                const std::string& mc_mode_str, const GridSpec& grid, double window,
                std::size_t mc_trials, int workers, std::uint64_t seed,
                const std::vector<double>& check, bool strict,
                const mcph::QuadratureSpec& spec, const std::string& out_path,
                const std::string& meta_path) {
  const mcph::ProcessParams p = build_params(po);
  const mcph::Process process = mcph::parse_process(process_str);
  const auto grid_values = grid_points(grid);

  std::vector<double> analytic;
  analytic.reserve(grid_values.size());
  for (const double r : grid_values) {
    analytic.push_back(mcph::contact_cdf(r, p, process, spec));
  }

  json meta;
  meta["command"] = "contact";
  meta["params"] = params_json(p);
  meta["process"] = process_str;
  meta["grid"] = grid_json(grid);
  meta["window"] = window;
  meta["seed"] = seed;
  meta["workers"] = workers;
  meta["quadrature"] = quadrature_json(spec);
  meta["mc_trials"] = mc_trials;
  meta["exact"] = process == mcph::Process::MCP;
  meta["truncation_radius"] = grid.max + p.R;  // parent integrand vanishes beyond r + R
  meta["output"] = out_path;

  int exit_code = 0;
  std::ostringstream csv;
  if (mc_trials == 0) {
    csv << "r,F_CD\n";
    for (std::size_t i = 0; i < grid_values.size(); ++i) {
      csv << mcph::fmt_double(grid_values[i]) << ',' << mcph::fmt_double(analytic[i])
          << '\n';
    }
  } else {
    if (grid.max > window - p.R) {
      throw std::invalid_argument(
          "grid max must not exceed window - R (censoring guard)");
    }
    mcph::SamplerMode mode;
    if (mc_mode_str == "auto") {
      mode = process == mcph::Process::MCP ? mcph::SamplerMode::MCP
                                           : mcph::SamplerMode::MCPH_EXACT;
    } else {
      mode = mcph::parse_sampler_mode(mc_mode_str);
    }
    const auto mc =
        mcph::mc_contact_distances(p, window, mode, mc_trials, seed, workers);
    csv << "r,F_CD,empirical,se\n";
    for (std::size_t i = 0; i < grid_values.size(); ++i) {
      csv << mcph::fmt_double(grid_values[i]) << ',' << mcph::fmt_double(analytic[i])
          << ',' << mcph::fmt_double(mc.cdf.evaluate(grid_values[i])) << ','
          << mcph::fmt_double(mc.cdf.standard_error(grid_values[i])) << '\n';
    }
    meta["mc_mode"] = mcph::to_string(mode);
    meta["censored_trials"] = mc.censored;
    meta["reliable_radius"] = mc.reliable_radius;
    if (mc.censored > 0) {
      std::cerr << "warning: " << mc.censored
                << " trials censored beyond reliable radius "
                << mcph::fmt_double(mc.reliable_radius) << "\n";
      if (strict) exit_code = 3;
    }
    if (!check.empty()) {
      const auto report = mcph::compare(
          [&](double r) {
            return analytic[static_cast<std::size_t>(
                std::lround((r - grid.min) / grid.step))];
          },
          mc.cdf, grid_values, check[0]);
      const bool pass = report.violations == 0 && report.sup_distance <= check[1];
      meta["check"] = {{"k_sigma", check[0]},
                       {"sup_threshold", check[1]},
                       {"sup_distance", report.sup_distance},
                       {"violations", report.violations},
                       {"pass", pass}};
      if (!pass) exit_code = 3;
    }
  }
  write_text_file(out_path, csv.str());
  write_meta(out_path, meta_path, meta);
  return exit_code;
}

int run_pgf(const ParamOpts& po, const std::string& process_str, double radius,
            const GridSpec& theta_grid, const mcph::QuadratureSpec& spec,
            const std::string& out_path, const std::string& meta_path) {
  const mcph::ProcessParams p = build_params(po);
  const mcph::Process process = mcph::parse_process(process_str);
  if (theta_grid.min < 0.0 || theta_grid.max > 1.0) {
    throw std::invalid_argument("theta grid must stay inside [0, 1]");
  }
  std::ostringstream csv;
  csv << "theta,G_N\n";
  for (const double theta : grid_points(theta_grid)) {
    csv << mcph::fmt_double(theta) << ','
        << mcph::fmt_double(mcph::pgf_count(theta, radius, p, process, spec)) << '\n';
  }
  write_text_file(out_path, csv.str());

  json meta;
  meta["command"] = "pgf";
  meta["params"] = params_json(p);
  meta["process"] = process_str;
  meta["r"] = radius;
  meta["theta_grid"] = grid_json(theta_grid);
  meta["quadrature"] = quadrature_json(spec);
  meta["exact"] = process == mcph::Process::MCP;
  meta["truncation_radius"] = radius + p.R;
  meta["output"] = out_path;
  write_meta(out_path, meta_path, meta);
  return 0;
}

int run_pgfl(const ParamOpts& po, const std::string& process_str,
             const std::string& profile_name, double theta, double radius, double s,
             double alpha, const mcph::QuadratureSpec& spec,
             const std::string& meta_path) {
  const mcph::ProcessParams p = build_params(po);
  const mcph::Process process = mcph::parse_process(process_str);

  mcph::RadialProfile profile;
  if (profile_name == "indicator") {
    if (theta < 0.0 || theta > 1.0) {
      throw std::invalid_argument("indicator profile requires theta in [0, 1]");
    }
    profile.value = [theta, radius](double u) { return u < radius ? theta : 1.0; };
    profile.deficit = [theta, radius](double u) {
      return u < radius ? 1.0 - theta : 0.0;
    };
    profile.unit_beyond = radius;
    profile.extra_breakpoints = {radius};
  } else if (profile_name == "exp-power") {
    if (!(s >= 0.0)) throw std::invalid_argument("exp-power requires s >= 0");
    if (!(alpha > 3.0)) {
      throw std::invalid_argument(
          "exp-power requires alpha > 3 for an integrable deficit");
    }
    if (s == 0.0) {
      profile.value = [](double) { return 1.0; };
      profile.unit_beyond = 0.0;
    } else {
      profile.value = [s, alpha](double u) {
        return u == 0.0 ? 0.0 : std::exp(-s * std::pow(u, -alpha));
      };
      profile.deficit = [s, alpha](double u) {
        return u == 0.0 ? 1.0 : -std::expm1(-s * std::pow(u, -alpha));
      };
    }
  } else {
    throw std::invalid_argument("unknown profile '" + profile_name +
                                "' (expected indicator|exp-power)");
  }

  const mcph::PgflResult res = mcph::pgfl(profile, p, process, spec);
  std::cout << "value=" << mcph::fmt_double(res.value)
            << "\ntruncation_radius=" << mcph::fmt_double(res.truncation_radius)
            << "\nexact=" << (res.exact ? "true" : "false") << "\n";

  if (!meta_path.empty()) {
    json meta;
    meta["command"] = "pgfl";
    meta["params"] = params_json(p);
    meta["process"] = process_str;
    meta["profile"] = profile_name;
    if (profile_name == "indicator") {
      meta["theta"] = theta;
      meta["r"] = radius;
    } else {
      meta["s"] = s;
      meta["alpha"] = alpha;
    }
    meta["quadrature"] = quadrature_json(spec);
    meta["value"] = res.value;
    meta["truncation_radius"] = res.truncation_radius;
    meta["exact"] = res.exact;
    write_text_file(meta_path, meta.dump(2) + "\n");
  }
  return 0;
}

int run_validate(std::uint64_t seed, std::size_t trials, int workers,
                 const std::string& out_path) {
  mcph::AcceptanceOptions opt;
  opt.seed = seed;
  opt.trials = trials;
  opt.workers = workers;
  opt.progress = &std::cerr;
  if (trials != 10000) {
    std::cerr << "note: acceptance thresholds are calibrated for 10000 trials\n";
  }
  const auto results = mcph::run_acceptance_criteria(opt);

  bool all_pass = true;
  json criteria = json::array();
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << " "
              << r.name << ": " << r.detail << "\n";
    criteria.push_back(
        {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  std::cout << (all_pass ? "acceptance: all criteria passed"
                         : "acceptance: some criteria FAILED")
            << "\n";

  if (!out_path.empty()) {
    // The report is invariant to --workers by construction, so the worker
    // count is deliberately not echoed into it.
    json report;
    report["seed"] = seed;
    report["trials"] = trials;
    report["criteria"] = criteria;
    report["all_pass"] = all_pass;
    write_text_file(out_path, report.dump(2) + "\n");
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "3D Matern cluster process toolkit: samplers for the plain and holey "
      "variants, conditional distance laws, contact distribution, PGFL, and a "
      "Monte Carlo validation harness"};
  app.require_subcommand(1);

  // sample ------------------------------------------------------------------
  ParamOpts sample_params;
  std::string sample_mode = "mcph-exact";
  double sample_window = 100.0;
  std::uint64_t sample_seed = 1;
  std::string sample_out, sample_meta;
  auto* sample = app.add_subcommand("sample", "Draw one realization and write it as CSV");
  add_param_options(sample, sample_params);
  sample->add_option("--mode", sample_mode, "Sampler: mcp|mcph-exact|mcph-selfhole")
      ->capture_default_str();
  sample->add_option("--window,-W", sample_window, "Observation ball radius [m]")
      ->capture_default_str();
  sample->add_option("--seed", sample_seed, "Master seed")->capture_default_str();
  sample->add_option("--out", sample_out, "Output CSV path")->required();
  sample->add_option("--meta", sample_meta, "Metadata JSON path (default <out>.meta.json)");
  sample->add_option("--config", g_config_path, "Flat key=value config file; command-line flags take precedence");

  // distance ----------------------------------------------------------------
  ParamOpts dist_params;
  std::string dist_process = "mcph";
  double dist_x = 20.0;
  std::string dist_grid = "0:150:0.5";
  bool dist_correction = false;
  std::string dist_out, dist_meta;
  auto* distance = app.add_subcommand(
      "distance", "Conditional distance PDF/CDF for a cluster at distance x");
  add_param_options(distance, dist_params);
  distance->add_option("--process", dist_process, "mcp|mcph")->capture_default_str();
  distance->add_option("--x-norm", dist_x, "Cluster center distance from origin [m]")
      ->capture_default_str();
  distance->add_option("--grid", dist_grid, "r grid as min:max:step")
      ->capture_default_str();
  distance->add_flag("--hole-correction", dist_correction,
                     "Scale the density by the first-order other-hole factor");
  distance->add_option("--out", dist_out, "Output CSV path")->required();
  distance->add_option("--meta", dist_meta, "Metadata JSON path");
  distance->add_option("--config", g_config_path, "Flat key=value config file; command-line flags take precedence");

  // contact -----------------------------------------------------------------
  ParamOpts contact_params;
  std::string contact_process = "mcph";
  std::string contact_mc_mode = "auto";
  std::string contact_grid = "0:100:1";
  double contact_window = 200.0;
  std::size_t contact_mc = 0;
  int contact_workers = 1;
  std::uint64_t contact_seed = 1;
  std::vector<double> contact_check;
  bool contact_strict = false;
  mcph::QuadratureSpec contact_spec;
  std::string contact_out, contact_meta;
  auto* contact = app.add_subcommand(
      "contact", "Contact distance CDF, optionally overlaid with a Monte Carlo run");
  add_param_options(contact, contact_params);
  contact->add_option("--process", contact_process, "mcp|mcph")->capture_default_str();
  contact->add_option("--grid", contact_grid, "r grid as min:max:step")
      ->capture_default_str();
  contact->add_option("--window,-W", contact_window, "Observation ball radius [m]")
      ->capture_default_str();
  contact->add_option("--mc", contact_mc, "Monte Carlo trial count (0 disables)")
      ->capture_default_str();
  contact->add_option("--mc-mode", contact_mc_mode,
                      "Sampler for the overlay: auto|mcp|mcph-exact|mcph-selfhole")
      ->capture_default_str();
  contact->add_option("--workers", contact_workers, "Worker threads for the MC run")
      ->capture_default_str();
  contact->add_option("--seed", contact_seed, "Master seed")->capture_default_str();
  contact->add_option("--check", contact_check,
                      "k_sigma and sup threshold; exit 3 when the comparison fails")
      ->expected(2);
  contact->add_flag("--strict", contact_strict,
                    "Escalate censoring warnings to a failing exit code");
  add_quadrature_options(contact, contact_spec);
  contact->add_option("--out", contact_out, "Output CSV path")->required();
  contact->add_option("--meta", contact_meta, "Metadata JSON path");
  contact->add_option("--config", g_config_path, "Flat key=value config file; command-line flags take precedence");

  // pgf ---------------------------------------------------------------------
  ParamOpts pgf_params;
  std::string pgf_process = "mcp";
  double pgf_r = 30.0;
  std::string pgf_grid = "0:1:0.05";
  mcph::QuadratureSpec pgf_spec;
  std::string pgf_out, pgf_meta;
  auto* pgf = app.add_subcommand("pgf", "Count PGF E[theta^N(b(o,r))] over a theta grid");
  add_param_options(pgf, pgf_params);
  pgf->add_option("--process", pgf_process, "mcp|mcph")->capture_default_str();
  pgf->add_option("--r", pgf_r, "Ball radius r [m]")->capture_default_str();
  pgf->add_option("--theta-grid", pgf_grid, "theta grid as min:max:step")
      ->capture_default_str();
  add_quadrature_options(pgf, pgf_spec);
  pgf->add_option("--out", pgf_out, "Output CSV path")->required();
  pgf->add_option("--meta", pgf_meta, "Metadata JSON path");
  pgf->add_option("--config", g_config_path, "Flat key=value config file; command-line flags take precedence");

  // pgfl --------------------------------------------------------------------
  ParamOpts pgfl_params;
  std::string pgfl_process = "mcp";
  std::string pgfl_profile = "indicator";
  double pgfl_theta = 0.5, pgfl_r = 30.0, pgfl_s = 1.0, pgfl_alpha = 4.0;
  mcph::QuadratureSpec pgfl_spec;
  std::string pgfl_meta;
  auto* pgfl_cmd = app.add_subcommand(
      "pgfl", "Probability generating functional for an isotropic profile");
  add_param_options(pgfl_cmd, pgfl_params);
  pgfl_cmd->add_option("--process", pgfl_process, "mcp|mcph")->capture_default_str();
  pgfl_cmd->add_option("--profile", pgfl_profile, "indicator|exp-power")
      ->capture_default_str();
  pgfl_cmd->add_option("--theta", pgfl_theta, "indicator: value inside the ball")
      ->capture_default_str();
  pgfl_cmd->add_option("--r", pgfl_r, "indicator: ball radius [m]")
      ->capture_default_str();
  pgfl_cmd->add_option("--s", pgfl_s, "exp-power: scale of exp(-s u^-alpha)")
      ->capture_default_str();
  pgfl_cmd->add_option("--alpha", pgfl_alpha, "exp-power: exponent (> 3)")
      ->capture_default_str();
  add_quadrature_options(pgfl_cmd, pgfl_spec);
  pgfl_cmd->add_option("--meta", pgfl_meta, "Metadata JSON path");
  pgfl_cmd->add_option("--config", g_config_path, "Flat key=value config file; command-line flags take precedence");

  // validate ----------------------------------------------------------------
  std::uint64_t val_seed = 424242;
  std::size_t val_trials = 10000;
  int val_workers = 1;
  std::string val_out;
  auto* validate = app.add_subcommand(
      "validate",
      "Run the full acceptance suite; the report is invariant to --workers");
  validate->add_option("--seed", val_seed, "Master seed")->capture_default_str();
  validate->add_option("--trials", val_trials, "Monte Carlo trials per criterion")
      ->capture_default_str();
  validate->add_option("--workers", val_workers, "Worker threads")
      ->capture_default_str();
  validate->add_option("--out", val_out, "Report JSON path");
  validate->add_option("--config", g_config_path, "Flat key=value config file; command-line flags take precedence");

  // Config values must lose against explicit flags: every option takes its
  // last occurrence, and config tokens are injected ahead of the user's args.
  for (CLI::App* sub : {sample, distance, contact, pgf, pgfl_cmd, validate}) {
    for (CLI::Option* opt : sub->get_options()) {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }

  std::vector<std::string> args;
  try {
    args = inject_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<const char*> cargv;
  cargv.reserve(args.size());
  for (const std::string& s : args) cargv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sample->parsed()) {
      return run_sample(sample_params, sample_mode, sample_window, sample_seed,
                        sample_out, sample_meta);
    }
    if (distance->parsed()) {
      return run_distance(dist_params, dist_process, dist_x, parse_grid(dist_grid),
                          dist_correction, dist_out, dist_meta);
    }
    if (contact->parsed()) {
      return run_contact(contact_params, contact_process, contact_mc_mode,
                         parse_grid(contact_grid), contact_window, contact_mc,
                         contact_workers, contact_seed, contact_check, contact_strict,
                         contact_spec, contact_out, contact_meta);
    }
    if (pgf->parsed()) {
      return run_pgf(pgf_params, pgf_process, pgf_r, parse_grid(pgf_grid), pgf_spec,
                     pgf_out, pgf_meta);
    }
    if (pgfl_cmd->parsed()) {
      return run_pgfl(pgfl_params, pgfl_process, pgfl_profile, pgfl_theta, pgfl_r,
                      pgfl_s, pgfl_alpha, pgfl_spec, pgfl_meta);
    }
    if (validate->parsed()) {
      return run_validate(val_seed, val_trials, val_workers, val_out);
    }
  } catch (const mcph::ConvergenceError& e) {
    std::cerr << "numeric failure: " << e.what()
              << " (best estimate " << mcph::fmt_double(e.best_estimate()) << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
