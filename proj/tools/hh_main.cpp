#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hh/runner.hpp"

namespace {

void add_common(CLI::App* cmd, hh::RunConfig& cfg, std::vector<std::string>& sets_raw,
                std::string& box_text) {
  cmd->add_option("--set", sets_raw, "override a parameter or payload slot, k=v (repeatable)");
  cmd->add_option("--lambda", cfg.lambda, "cosmological constant");
  cmd->add_option("--tau", cfg.tau, "free constant tau");
  cmd->add_option("--points", cfg.points, "sample point count");
  cmd->add_option("--box", box_text, "sample box, lo:hi,lo:hi,lo:hi,lo:hi");
  cmd->add_option("--tol", cfg.tol, "tolerance override for all checks");
  cmd->add_option("--out", cfg.out, "report path (JSON)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hh - construction and numerical certification of anti-self-dual Einstein "
      "metrics with nonzero cosmological constant, plus an elliptic Toda solver"};
  app.require_subcommand(1);

  hh::RunConfig cfg;
  std::string box_text;
  std::vector<std::string> sets_raw;

  auto* verify = app.add_subcommand("verify", "check a catalog family or a family file");
  verify->add_option("--family", cfg.family, "catalog family id");
  verify->add_option("--file", cfg.file, "family file (JSON with expression payloads)");
  add_common(verify, cfg, sets_raw, box_text);

  auto* pipeline = app.add_subcommand(
      "pipeline", "run the Sigma -> U -> metric chain with all intermediate residuals");
  pipeline->add_option("--family", cfg.family, "Sigma-formalism family id")->required();
  add_common(pipeline, cfg, sets_raw, box_text);

  auto* slice = app.add_subcommand("slice", "build and certify a real slice");
  slice->add_option("--family", cfg.family, "family id")->required();
  slice->add_option("--variant", cfg.variant,
                    "neutral_1 | neutral_2 | euclidean | lorentzian")
      ->required();
  add_common(slice, cfg, sets_raw, box_text);

  auto* solve = app.add_subcommand("solve-bfp", "solve the elliptic Toda equation on a grid");
  solve->add_option("--grid", cfg.grid, "n,t0,t1,x0,x1,y0,y1")->required();
  solve->add_option("--bc", cfg.bc, "Dirichlet data, expression in t,x,y");
  solve->add_option("--lambda", cfg.lambda, "cosmological constant for the metric report");
  solve->add_option("--tol", cfg.grid_tol, "Newton residual tolerance");
  solve->add_option("--max-iters", cfg.max_iters, "Newton iteration cap");
  solve->add_option("--out", cfg.out, "report path (JSON)");
  solve->add_option("--grid-out", cfg.grid_out, "grid CSV path");

  auto* cat = app.add_subcommand("catalog", "list solution families");
  cat->add_option("--out", cfg.out, "write the listing as JSON");

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  for (const std::string& kv : sets_raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--set expects k=v, got \"" << kv << "\"\n";
      return 2;
    }
    cfg.sets.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!box_text.empty()) {
    try {
      cfg.box = hh::parse_box_flag(box_text);
    } catch (const hh::Error& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }
  (void)verify;
  (void)pipeline;
  (void)slice;
  (void)solve;
  (void)cat;
  return hh::run_command(cfg, std::cout, std::cerr);
}
