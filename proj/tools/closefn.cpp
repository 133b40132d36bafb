#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "closefn/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"closefn: closeness of functions by grid oracle and certificates"};
  closefn::RunConfig rc;
  std::string command, config, out = "out", grid;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "certify | oracle | sublevel-check | calculus-check | erm | online | localize")
      ->required();
  app.add_option("--config", config, "JSON config file");
  app.add_option("--seed", seed, "master seed (default 42)");
  app.add_option("--out", out, "output directory");
  app.add_option("--grid", grid, "grid counts N[,N[,N]]");
  app.add_flag("--quiet", rc.quiet, "suppress the summary line");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : closefn::kExitOperational;
  }
  rc.command = command;
  rc.input_path = config;
  rc.seed = seed;
  rc.out_dir = out;
  if (!grid.empty()) {
    std::vector<std::size_t> counts;
    std::stringstream ss(grid);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        counts.push_back(static_cast<std::size_t>(v));
      } catch (const std::exception&) {
        std::cerr << "ERROR:ConfigError:bad --grid value '" << grid << "'\n";
        return closefn::kExitOperational;
      }
    }
    if (counts.empty() || counts.size() > 3) {
      std::cerr << "ERROR:ConfigError:--grid takes one to three counts\n";
      return closefn::kExitOperational;
    }
    rc.grid_override = counts;
  }
  return closefn::run(rc);
}
