// wlsurv: fit, compare, and diagnose weighted Lindley lifetime models on
// censored data, and run the replicated simulation studies.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wlsurv/censoring.hpp"
#include "wlsurv/estimation.hpp"
#include "wlsurv/json_util.hpp"
#include "wlsurv/monte_carlo.hpp"
#include "wlsurv/nonparametric.hpp"
#include "wlsurv/weighted_lindley.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitCalibrationError = 3;

using nlohmann::json;

// Recorded verbatim into every output artifact; reruns with the same
// manifest produce byte-identical files.
struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  std::string scheme;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string out_dir;

  json to_json() const {
    json j;
    j["command"] = command;
    j["inputs"] = inputs;
    if (!scheme.empty()) j["scheme"] = scheme;
    if (has_seed) j["seed"] = seed;
    j["out_dir"] = out_dir;
    j["version"] = kVersion;
    return j;
  }
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path.string());
}

std::string manifest_comment(const Manifest& m) {
  return "# manifest: " + m.to_json().dump() + "\n";
}

std::string json_report(const Manifest& m, const char* key, json body) {
  json j;
  j["manifest"] = m.to_json();
  j[key] = std::move(body);
  return j.dump(2) + "\n";
}

struct SchemeFlags {
  std::string scheme = "random";
  double t_c = 0.0;
  int r = 0;
};

std::string scheme_description(const SchemeFlags& f) {
  if (f.scheme == "type1") return "type1 tc=" + std::to_string(f.t_c);
  if (f.scheme == "type2") return "type2 r=" + std::to_string(f.r);
  return f.scheme;
}

// Re-tags a parsed dataset with the scheme named on the command line; the
// CensoredSample constructor validates the statuses against it.
wlsurv::CensoredSample with_scheme(const wlsurv::CensoredSample& parsed,
                                   const SchemeFlags& f) {
  std::vector<wlsurv::Observation> obs = parsed.observations();
  if (f.scheme == "random")
    return wlsurv::CensoredSample(std::move(obs), wlsurv::Scheme::random());
  if (f.scheme == "complete")
    return wlsurv::CensoredSample(std::move(obs), wlsurv::Scheme::complete());
  if (f.scheme == "type1") {
    if (!(f.t_c > 0.0))
      throw std::runtime_error("--scheme type1 requires --tc <positive time>");
    return wlsurv::CensoredSample(std::move(obs), wlsurv::Scheme::type1(f.t_c));
  }
  if (f.scheme == "type2") {
    if (f.r < 1) throw std::runtime_error("--scheme type2 requires --r <failure count>");
    return wlsurv::CensoredSample(std::move(obs), wlsurv::Scheme::type2(f.r));
  }
  throw std::runtime_error("unknown scheme: " + f.scheme);
}

wlsurv::ModelFamily parse_family(const std::string& name) {
  if (name == "wl") return wlsurv::ModelFamily::WeightedLindley;
  if (name == "weibull") return wlsurv::ModelFamily::Weibull;
  if (name == "gamma") return wlsurv::ModelFamily::Gamma;
  throw std::runtime_error("unknown model family: " + name);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string survival_grid_csv(const Manifest& m,
                              const std::vector<std::pair<std::string, std::function<double(double)>>>& columns,
                              double t_max) {
  constexpr int kPoints = 200;
  std::string out = manifest_comment(m);
  out += "t";
  for (const auto& [name, fn] : columns) out += "," + name;
  out += "\n";
  for (int i = 0; i < kPoints; ++i) {
    const double t = t_max * static_cast<double>(i) / (kPoints - 1);
    out += format_number(t);
    for (const auto& [name, fn] : columns) out += "," + format_number(fn(t));
    out += "\n";
  }
  return out;
}

int cmd_fit(const std::string& data_path, const SchemeFlags& flags,
            const std::string& model, const std::string& out_dir) {
  Manifest m{"fit", {data_path}, scheme_description(flags), 0, false, out_dir};
  const wlsurv::CensoredSample sample =
      with_scheme(wlsurv::parse_dataset_file(data_path), flags);
  const wlsurv::FitResult result =
      wlsurv::fit(sample, parse_family(model));

  std::filesystem::create_directories(out_dir);
  write_file(std::filesystem::path(out_dir) / "fit.json",
             json_report(m, "fit", wlsurv::fit_to_json(result)));

  double t_max = 0.0;
  for (const auto& obs : sample.observations()) t_max = std::max(t_max, obs.time);
  if (result.converged) {
    const auto family = result.family;
    const auto params = result.estimates;
    write_file(std::filesystem::path(out_dir) / "survival_curve.csv",
               survival_grid_csv(
                   m,
                   {{"survival", [family, params](double t) {
                       return wlsurv::family_survival(family, params, t);
                     }}},
                   1.1 * t_max));
  }

  const auto names = wlsurv::family_param_names(result.family);
  std::cout << wlsurv::family_name(result.family) << " fit ("
            << wlsurv::scheme_name(sample.scheme().type) << " scheme, n=" << sample.size()
            << ", d=" << sample.failure_count() << ")\n";
  for (int i = 0; i < 2; ++i)
    std::cout << "  " << names[i] << " = " << format_number(result.estimates[i])
              << " (se " << format_number(result.std_errors[i]) << ")\n";
  std::cout << "  loglik = " << format_number(result.loglik_max)
            << "  aic = " << format_number(result.aic)
            << "  converged = " << (result.converged ? "yes" : "no") << "\n";
  return result.converged ? kExitOk : kExitNoConvergence;
}

int cmd_compare(const std::string& data_path, const SchemeFlags& flags,
                const std::string& out_dir) {
  Manifest m{"compare", {data_path}, scheme_description(flags), 0, false, out_dir};
  const wlsurv::CensoredSample sample =
      with_scheme(wlsurv::parse_dataset_file(data_path), flags);
  const std::vector<wlsurv::AicRow> rows = wlsurv::aic_table(sample);

  json table = json::array();
  for (const auto& row : rows) {
    json entry;
    entry["family"] = wlsurv::family_name(row.family);
    entry["converged"] = row.converged;
    entry["aic"] = row.converged ? json(wlsurv::round_sig(row.aic)) : json();
    if (row.converged) entry["fit"] = wlsurv::fit_to_json(row.result);
    table.push_back(entry);
  }
  std::filesystem::create_directories(out_dir);
  write_file(std::filesystem::path(out_dir) / "aic_table.json",
             json_report(m, "aic_table", table));

  // overlay: Kaplan-Meier plus each converged family's fitted survival
  double t_max = 0.0;
  for (const auto& obs : sample.observations()) t_max = std::max(t_max, obs.time);
  const wlsurv::StepFunction km = wlsurv::kaplan_meier(sample);
  std::vector<std::pair<std::string, std::function<double(double)>>> columns;
  columns.emplace_back("kaplan_meier", [km](double t) { return km(t); });
  for (const auto& row : rows) {
    if (!row.converged) continue;
    const auto family = row.family;
    const auto params = row.result.estimates;
    columns.emplace_back(wlsurv::family_name(family), [family, params](double t) {
      return wlsurv::family_survival(family, params, t);
    });
  }
  write_file(std::filesystem::path(out_dir) / "survival_overlay.csv",
             survival_grid_csv(m, columns, 1.1 * t_max));

  std::cout << "family              aic          converged\n";
  bool any = false;
  for (const auto& row : rows) {
    any = any || row.converged;
    std::printf("%-18s  %-11s  %s\n", wlsurv::family_name(row.family),
                row.converged ? format_number(row.aic).c_str() : "-",
                row.converged ? "yes" : "no");
  }
  return any ? kExitOk : kExitNoConvergence;
}

int cmd_ttt(const std::string& data_path, const std::string& out_dir) {
  Manifest m{"ttt", {data_path}, "", 0, false, out_dir};
  const wlsurv::CensoredSample sample = wlsurv::parse_dataset_file(data_path);
  const wlsurv::StepFunction curve = wlsurv::ttt_curve(sample.all_times());
  std::filesystem::create_directories(out_dir);
  write_file(std::filesystem::path(out_dir) / "ttt_curve.csv",
             manifest_comment(m) + wlsurv::step_to_csv(curve, "fraction", "ttt"));
  std::cout << "shape_hint: " << wlsurv::to_string(wlsurv::shape_hint(curve)) << "\n";
  return kExitOk;
}

int cmd_km(const std::string& data_path, const std::string& out_dir) {
  Manifest m{"km", {data_path}, "", 0, false, out_dir};
  const wlsurv::CensoredSample sample = wlsurv::parse_dataset_file(data_path);
  const wlsurv::StepFunction km = wlsurv::kaplan_meier(sample);
  std::filesystem::create_directories(out_dir);
  write_file(std::filesystem::path(out_dir) / "km_curve.csv",
             manifest_comment(m) + wlsurv::step_to_csv(km, "time", "survival"));
  return kExitOk;
}

// flat key=value config mirroring the simulate flags
void apply_sim_config_file(const std::string& path, CLI::App* sim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option* opt = sim->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
    if (opt->count() == 0) opt->add_result(value);  // explicit flags win
  }
}

int cmd_simulate(const wlsurv::StudyConfig& config, const std::string& scheme_desc,
                 const std::string& out_dir) {
  Manifest m{"simulate", {}, scheme_desc, config.seed, true, out_dir};
  const wlsurv::SimulationReport report = wlsurv::run_study(config);
  std::filesystem::create_directories(out_dir);
  write_file(std::filesystem::path(out_dir) / "simulation.json",
             json_report(m, "report", wlsurv::report_to_json(report)));
  write_file(std::filesystem::path(out_dir) / "simulation.csv",
             manifest_comment(m) + wlsurv::report_to_csv(report));
  std::cout << wlsurv::report_to_csv(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted Lindley survival modelling under censoring"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string data_path, out_dir = ".", model = "wl";
  SchemeFlags flags;

  auto add_scheme_options = [&](CLI::App* cmd) {
    cmd->add_option("--scheme", flags.scheme, "censoring scheme")
        ->check(CLI::IsMember({"random", "type1", "type2", "complete"}));
    cmd->add_option("--tc", flags.t_c, "type I censoring time");
    cmd->add_option("--r", flags.r, "type II failure count");
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit");
  fit_cmd->add_option("data", data_path, "CSV dataset (time,status)")->required();
  add_scheme_options(fit_cmd);
  fit_cmd->add_option("--model", model, "model family")
      ->check(CLI::IsMember({"wl", "weibull", "gamma"}));
  fit_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* compare_cmd = app.add_subcommand("compare", "AIC comparison of the three families");
  compare_cmd->add_option("data", data_path, "CSV dataset (time,status)")->required();
  add_scheme_options(compare_cmd);
  compare_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* ttt_cmd = app.add_subcommand("ttt", "TTT curve and hazard-shape hint");
  ttt_cmd->add_option("data", data_path, "CSV dataset (time,status)")->required();
  ttt_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* km_cmd = app.add_subcommand("km", "Kaplan-Meier survival curve");
  km_cmd->add_option("data", data_path, "CSV dataset (time,status)")->required();
  km_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "replicated estimation study");
  double sim_lambda = 0.0, sim_phi = 0.0, sim_p_target = 0.0, sim_level = 0.95;
  int sim_n = 0, sim_r = 0, sim_replicates = 0;
  std::uint64_t sim_seed = 0;
  std::string sim_scheme = "type2", config_path;
  sim_cmd->add_option("--lambda", sim_lambda, "true lambda");
  sim_cmd->add_option("--phi", sim_phi, "true phi");
  sim_cmd->add_option("--n", sim_n, "sample size per replicate");
  sim_cmd->add_option("--scheme", sim_scheme, "censoring scheme")
      ->check(CLI::IsMember({"complete", "type1", "type2", "random"}));
  sim_cmd->add_option("--p-target", sim_p_target, "target censoring proportion");
  sim_cmd->add_option("--r", sim_r, "type II failure count");
  sim_cmd->add_option("--replicates", sim_replicates, "number of replicates");
  sim_cmd->add_option("--seed", sim_seed, "random seed");
  sim_cmd->add_option("--level", sim_level, "coverage confidence level");
  sim_cmd->add_option("--config", config_path, "key=value config file");
  sim_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) return cmd_fit(data_path, flags, model, out_dir);
    if (compare_cmd->parsed()) return cmd_compare(data_path, flags, out_dir);
    if (ttt_cmd->parsed()) return cmd_ttt(data_path, out_dir);
    if (km_cmd->parsed()) return cmd_km(data_path, out_dir);
    if (sim_cmd->parsed()) {
      if (!config_path.empty()) {
        apply_sim_config_file(config_path, sim_cmd);
        // options added by the file still need conversion into the bound variables
        for (CLI::Option* opt : sim_cmd->get_options())
          if (opt->count() > 0) opt->run_callback();
      }
      if (sim_lambda <= 0.0 || sim_phi <= 0.0)
        throw std::runtime_error("simulate requires positive --lambda and --phi");
      if (sim_n < 2 || sim_replicates < 1)
        throw std::runtime_error("simulate requires --n >= 2 and --replicates >= 1");

      wlsurv::StudyConfig config;
      config.true_params = wlsurv::WLParams(sim_lambda, sim_phi);
      config.n = sim_n;
      config.replicates = sim_replicates;
      config.seed = sim_seed;
      config.level = sim_level;
      config.p_target = sim_p_target;
      config.r = sim_r;
      if (sim_scheme == "complete") config.scheme = wlsurv::SchemeType::Complete;
      else if (sim_scheme == "type1") config.scheme = wlsurv::SchemeType::TypeI;
      else if (sim_scheme == "type2") config.scheme = wlsurv::SchemeType::TypeII;
      else config.scheme = wlsurv::SchemeType::Random;

      if (const char* env = std::getenv("WLSURV_THREADS")) {
        config.threads = std::atoi(env);
        if (config.threads < 0) config.threads = 0;
      }
      std::string desc = sim_scheme;
      if (config.scheme == wlsurv::SchemeType::TypeII)
        desc += " r=" + std::to_string(config.r > 0 ? config.r : 0) +
                (config.r > 0 ? "" : (" p_target=" + format_number(config.p_target)));
      else if (config.scheme != wlsurv::SchemeType::Complete)
        desc += " p_target=" + format_number(config.p_target);
      return cmd_simulate(config, desc, out_dir);
    }
  } catch (const wlsurv::calibration_error& e) {
    std::cerr << "calibration error: " << e.what() << "\n";
    return kExitCalibrationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
