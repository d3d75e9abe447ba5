#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hh/bfp.hpp"
#include "hh/report.hpp"

namespace hh {

// Parsed command line for the batch front-end.
struct RunConfig {
  std::string command;  // verify | pipeline | slice | solve-bfp | catalog
  std::string family;
  std::string file;  // user family file (verify only)
  std::vector<std::pair<std::string, std::string>> sets;
  std::optional<double> lambda;
  std::optional<double> tau;
  int points = 50;
  std::optional<Box> box;
  double tol = 0.0;  // 0: per-family defaults
  std::string variant;
  std::string grid;     // n,t0,t1,x0,x1,y0,y1
  std::string bc = "0"; // boundary expression in t, x, y
  double grid_tol = 1e-10;
  int max_iters = 25;
  std::string out;       // report path; empty prints the report
  std::string grid_out;  // CSV path for solve-bfp

  void validate() const;  // throws ConfigError
};

// Worker cap: HH_THREADS when set (clamped to hardware), else hardware.
int worker_count();

// "lo:hi,lo:hi,lo:hi,lo:hi"
Box parse_box_flag(const std::string& text);

// Dispatches the command; returns the process exit code
// (0 pass, 1 check failure or runtime error, 2 config error).
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace hh
