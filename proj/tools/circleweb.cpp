// circleweb --config <path> [--output-dir <dir>] [--seed <n>]

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "circleweb/cli/config.hpp"
#include "circleweb/cli/run.hpp"

namespace cw = circleweb;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circle 3-webs with rational polar curves: verification and figures"};
  std::string config_path, output_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--output-dir", output_dir, "directory for report.json and figures");
  app.add_option("--seed", seed, "overrides the seed of the config file");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cw::cli::kExitInvalid;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return cw::cli::kExitInvalid;
  }
  std::stringstream text;
  text << in.rdbuf();

  try {
    cw::cli::RunConfig cfg = cw::cli::parse_config(text.str());
    if (seed) {
      cfg.seed = *seed;
      cfg.sampling.seed = *seed;
    }
    if (!output_dir.empty()) cfg.output_dir = output_dir;

    const cw::cli::RunOutcome out = cw::cli::run(cfg);
    cw::cli::write_outputs(out, cfg.output_dir, cfg.report_name);
    const nlohmann::json info{{"timestamp", utc_now()}, {"config", config_path},
                              {"exit_code", out.exit_code}};
    cw::cli::write_outputs({0, info, {}}, cfg.output_dir, "run-info.json");

    for (const auto& c : out.report["checks"]) {
      std::cout << (c["passed"].get<bool>() ? "PASS  " : "FAIL  ") << c["name"].get<std::string>();
      if (c.contains("value"))
        std::cout << "  value=" << c["value"].get<double>() << " threshold=" << c["threshold"].get<double>();
      if (c.contains("error")) std::cout << "  " << c["error"].get<std::string>();
      std::cout << "\n";
    }
    std::cout << "report: " << cfg.output_dir << "/" << cfg.report_name << "\n";
    return out.exit_code;
  } catch (const cw::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return cw::cli::kExitInvalid;
  } catch (const cw::BadParams& e) {
    std::cerr << "invalid curve parameters: " << e.what() << "\n";
    return cw::cli::kExitInvalid;
  } catch (const cw::BadCurve& e) {
    std::cerr << "invalid curve: " << e.what() << "\n";
    return cw::cli::kExitInvalid;
  } catch (const cw::NotAvailable& e) {
    std::cerr << "not available for this curve: " << e.what() << "\n";
    return cw::cli::kExitInvalid;
  } catch (const cw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cw::cli::kExitFailed;
  }
}
