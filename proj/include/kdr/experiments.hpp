#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdr/analysis.hpp"
#include "kdr/baselines.hpp"
#include "kdr/kernels.hpp"

namespace kdr {

// Problems with input data or the filesystem (exit code 3 at the CLI);
// contract violations stay std::invalid_argument (exit code 2).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Everything a tradeoff run needs; a config fully determines every output
// byte.
struct ExperimentConfig {
  std::string kernel_spec;
  std::vector<std::string> methods;
  std::vector<std::size_t> dims;
  std::size_t trials = 20;
  std::uint64_t master_seed = 0;
  double delta = 1.0;  // bounds for the newlap method
  double rho = 0.1;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

// Dataset: standard normal points, one per row.
Matrix generate_points(std::size_t n, std::size_t d, std::uint64_t seed);
void save_points_csv(const Matrix& points, const std::string& path);
Matrix load_points_csv(const std::string& path);

struct SummaryRow {
  std::string method;
  std::size_t D;
  double mean;
  double ci95_lo;
  double ci95_hi;
};

struct TradeoffResult {
  std::vector<TradeoffRecord> records;  // (method, D, trial) order
  std::vector<SummaryRow> summary;      // (method, D) order
};

// Per-trial map seed; independent of which other methods run.
std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& method, std::size_t D,
                         std::size_t trial);

TradeoffResult run_tradeoff(const ExperimentConfig& cfg, const Matrix& points);

std::string records_csv(const std::vector<TradeoffRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::vector<TradeoffRecord> parse_records_csv(const std::string& text);
std::vector<SummaryRow> parse_summary_csv(const std::string& text);

struct KmeansCheckRow {
  std::size_t partition;
  double exact_cost;
  double embedded_cost;
  double ratio;  // 1 by convention when both costs are 0
};

std::vector<KmeansCheckRow> run_kmeans_check(const ExperimentConfig& cfg, const Matrix& points,
                                             std::size_t k, std::size_t partitions);
std::string kmeans_check_csv(const std::vector<KmeansCheckRow>& rows);

struct SkstatReport {
  double sup;
  double dim_floor_eps_10;  // sup / 0.1^2
  double dim_floor_eps_20;  // sup / 0.2^2
};

SkstatReport run_skstat(const std::string& kernel_spec, double delta, double rho);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace kdr
