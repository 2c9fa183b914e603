#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coda_ica::cli {

struct TransformConfig {
  std::string input;
  char delim = ',';
  std::string out = ".";
  std::vector<std::string> emit;  // clr, ilr
  std::string inverse;  // "", "clr" or "ilr"
  std::vector<std::string> parts;  // part names for the inverse ilr output
  double kappa = 1.0;
  std::string basis;
};

struct SimulateConfig {
  std::int64_t n = 1000;
  std::int64_t parts = 4;
  std::vector<std::string> sources;
  std::uint64_t seed = 0;
  double kappa = 1.0;
  double max_condition = 4.0;
  std::string out = ".";
};

struct IcaConfig {
  std::string input;
  char delim = ',';
  double kappa = 1.0;
  std::string method = "fobi";
  std::int64_t k = 0;  // 0: not given
  std::vector<std::string> g;
  double tol = 1e-6;
  int max_iter = 1000;
  int restarts = 5;
  std::uint64_t seed = 0;
  std::string init = "random";
  std::int64_t jade_cap = 30;
  std::string out = ".";
  std::vector<std::string> emit;
  std::string truth;
  std::string basis;
  std::int64_t grid = 512;
};

struct DensityConfig {
  std::string input;
  char delim = ',';
  std::string component = "IC.1";
  std::int64_t grid = 512;
  double dominance = 0.1;
  std::string out = ".";
};

struct ReconstructConfig {
  std::string input;  // directory of a previous ica run
  std::vector<std::string> signal;
  double kappa = 1.0;
  std::string out = ".";
};

int cmd_transform(const TransformConfig& cfg);
int cmd_simulate(const SimulateConfig& cfg);
int cmd_ica(const IcaConfig& cfg);
int cmd_density(const DensityConfig& cfg);
int cmd_reconstruct(const ReconstructConfig& cfg);

/// Accepts a single character or one of "tab", "\\t", "comma", "semicolon".
char parse_delimiter(const std::string& text);

}  // namespace coda_ica::cli
