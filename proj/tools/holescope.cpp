// Command-line driver: deterministic growth analytics, lemma verification,
// and hole-probability estimation for Gaussian entire functions with
// log-concave coefficients.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "holescope/cli.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
  // either "1,2,5" or "geom:from:to:count"
  std::vector<double> grid;
  if (text.rfind("geom:", 0) == 0) {
    std::istringstream is(text.substr(5));
    std::string part;
    std::vector<double> v;
    while (std::getline(is, part, ':')) v.push_back(std::stod(part));
    if (v.size() != 3)
      throw holescope::ValidationError("--r-grid geom needs geom:from:to:count");
    const auto count = static_cast<std::int64_t>(v[2]);
    if (count < 2) throw holescope::ValidationError("--r-grid geom count >= 2");
    for (std::int64_t i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(count - 1);
      grid.push_back(v[0] * std::pow(v[1] / v[0], f));
    }
    return grid;
  }
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) grid.push_back(std::stod(part));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "holescope: growth functionals, lemma checks and hole-probability "
      "estimators for Gaussian entire functions"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string model_name;
  std::string grid_text;
  std::string method_name;
  std::string table_path;
  std::string out_dir;
  std::optional<double> alpha, c_param, r_single, delta;
  std::optional<std::int64_t> samples, points;
  std::optional<std::uint64_t> seed;

  app.add_option("--config", config_path, "JSON experiment manifest");
  app.add_option("--model", model_name,
                 "gef | mittag_leffler | gaussian_decay | exp_exp | table");
  app.add_option("--alpha", alpha, "Mittag-Leffler parameter");
  app.add_option("--c", c_param, "gaussian_decay parameter");
  app.add_option("--table", table_path, "two-column table file (n log_a_n)");
  app.add_option("--r", r_single, "single radius");
  app.add_option("--r-grid", grid_text, "comma list or geom:from:to:count");
  app.add_option("--method", method_name, "direct | importance | certificate");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--seed", seed, "RNG seed (required for stochastic commands)");
  app.add_option("--delta", delta, "delta for the verification suite");
  app.add_option("--points", points, "grid resolution for verification");
  app.add_option("--out", out_dir, "output directory (default .)");

  std::vector<std::string> subcommands;
  for (const char* name : {"analyze", "verify", "estimate", "compare"}) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();  // global flags may follow the subcommand
    sub->callback([&subcommands, name] { subcommands.emplace_back(name); });
  }

  CLI11_PARSE(app, argc, argv);

  holescope::cli::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "holescope: cannot open config " << config_path << "\n";
        return 2;
      }
      nlohmann::json j;
      in >> j;
      cfg = holescope::cli::config_from_json(j);
    }
    // flags win over the manifest
    if (!subcommands.empty()) cfg.commands = subcommands;
    if (!model_name.empty())
      cfg.model.family = holescope::cli::parse_family(model_name);
    if (alpha) cfg.model.alpha = *alpha;
    if (c_param) cfg.model.c = *c_param;
    if (!table_path.empty()) cfg.model.table_path = table_path;
    if (r_single) cfg.r_grid = {*r_single};
    if (!grid_text.empty()) cfg.r_grid = parse_grid(grid_text);
    if (!method_name.empty())
      cfg.estimator.method = holescope::cli::parse_method(method_name);
    if (samples) cfg.estimator.n_samples = *samples;
    if (seed) cfg.estimator.seed = *seed;
    if (delta) cfg.delta = *delta;
    if (points) cfg.points = *points;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
  } catch (const std::exception& e) {
    std::cerr << "holescope: invalid input: " << e.what() << "\n";
    return 2;
  }

  return holescope::cli::run(cfg);
}
