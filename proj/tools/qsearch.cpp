#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/experiment.hpp"

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitValidity = 3;
constexpr int kExitNumerical = 4;

unsigned workers_from_env() {
  const char* env = std::getenv("QSEARCH_WORKERS");
  if (!env || !*env) return 1;
  try {
    const long v = std::stol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  std::cerr << "warning: ignoring QSEARCH_WORKERS=" << env << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analog quantum search on disordered graphs"};
  app.set_version_flag("--version", qsearch::kVersion);
  std::string mode, config, out;
  unsigned workers = 0;
  bool force = false;
  app.add_option("mode", mode, "unitary | redfield | secular | correlation | sweep | validate | spectrum | recipe")
      ->required();
  app.add_option("--config", config, "JSON configuration")->required();
  app.add_option("--out", out, "output directory (default: output.path from the config)");
  app.add_option("--workers", workers, "worker threads for sweeps (default: QSEARCH_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--force", force, "run even when a validity bound fails");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitSchema;
  }

  try {
    qsearch::mode_from_string(mode);
    nlohmann::json doc;
    {
      std::ifstream in(config);
      if (!in) throw qsearch::ConfigError("cannot read config file " + config);
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw qsearch::ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    if (!doc.is_object()) throw qsearch::ConfigError("config must be a JSON object");
    if (!doc.contains("mode")) doc["mode"] = mode;
    else if (!doc["mode"].is_string() || doc["mode"].get<std::string>() != mode)
      throw qsearch::ConfigError("config mode does not match the command line mode '" + mode + "'");
    const qsearch::ExperimentConfig cfg = qsearch::parse_config(doc);

    qsearch::RunOptions opts;
    opts.out_dir = out.empty() ? std::filesystem::path(cfg.output.path) : std::filesystem::path(out);
    opts.workers = workers ? workers : workers_from_env();
    opts.force = force;
    const qsearch::RunReport rep = qsearch::run(cfg, opts);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : rep.files) std::cout << f.string() << '\n';
    return 0;
  } catch (const qsearch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const qsearch::ValidityError& e) {
    std::cerr << "validity error: " << e.what() << '\n';
    return kExitValidity;
  } catch (const qsearch::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const qsearch::InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitSchema;
  } catch (const qsearch::ContractViolation& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
