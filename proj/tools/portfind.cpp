#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "portfind/cli_commands.hpp"
#include "portfind/fixed.hpp"
#include "portfind/oracle.hpp"

namespace {

std::optional<std::filesystem::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-currency ledger simulator and portfolio-matching account finder"};
  app.require_subcommand(1);

  std::string config, out, log, rates, snapshot, portfolio, ground_truth, out_dir;
  std::string threshold_text, time_text;
  uint64_t top = 0;
  uint64_t limit = portfind::kDefaultOracleLimit;

  CLI::App* sim = app.add_subcommand("simulate", "Generate a transaction log from a config");
  sim->add_option("--config", config, "simulation config JSON")->required();
  sim->add_option("--out", out, "output transaction log (JSON lines)")->required();
  sim->add_option("--ground-truth", ground_truth, "also write the user/account ground truth");

  CLI::App* snap = app.add_subcommand("snapshot", "Replay a log into sorted balance databases");
  snap->add_option("--log", log, "transaction log file")->required();
  snap->add_option("--time", time_text, "apply records with turn < time")->required();
  snap->add_option("--rates", rates, "exchange-rate JSON (defaults to 1 per currency)");
  snap->add_option("--out", out, "output snapshot JSON")->required();

  CLI::App* find = app.add_subcommand("find", "Search a snapshot for accounts matching a portfolio");
  find->add_option("--snapshot", snapshot, "snapshot JSON")->required();
  find->add_option("--portfolio", portfolio, "portfolio JSON")->required();
  find->add_option("--threshold", threshold_text, "score threshold S_t")->required();
  find->add_option("--top", top, "keep at most this many answers");
  find->add_option("--out", out, "write the result here instead of stdout");

  CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive best tuple (reference search)");
  oracle->add_option("--snapshot", snapshot, "snapshot JSON")->required();
  oracle->add_option("--portfolio", portfolio, "portfolio JSON")->required();
  oracle->add_option("--limit", limit, "refuse inputs with more tuples than this");
  oracle->add_option("--out", out, "write the result here instead of stdout");

  CLI::App* experiment = app.add_subcommand("experiment", "Run the portfolio-query sweep harness");
  experiment->add_option("--config", config, "experiment config JSON")->required();
  experiment->add_option("--out-dir", out_dir, "directory for CSV/JSON results")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return portfind::cli::cmd_simulate(config, out, opt_path(ground_truth));
    }
    if (snap->parsed()) {
      return portfind::cli::cmd_snapshot(log, std::stoll(time_text), opt_path(rates), out);
    }
    if (find->parsed()) {
      std::optional<uint64_t> top_opt;
      if (find->count("--top") > 0) top_opt = top;
      return portfind::cli::cmd_find(snapshot, portfolio,
                                     portfind::Fixed::parse(threshold_text), top_opt,
                                     opt_path(out));
    }
    if (oracle->parsed()) {
      return portfind::cli::cmd_oracle(snapshot, portfolio, limit, opt_path(out));
    }
    if (experiment->parsed()) {
      return portfind::cli::cmd_experiment(config, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
