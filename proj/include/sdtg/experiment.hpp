#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdtg/algorithms.hpp"
#include "sdtg/params.hpp"
#include "sdtg/verification.hpp"

namespace sdtg {

/// Bad command line or config file. `what()` is meant for the user.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm : std::uint8_t { Ddm, Tgddm1, Tgddm2, Ctg };

/// Coarse-to-fine size rule: h = H^{3/2}, h = H^{5/4}, h = H/2, or an explicit list.
enum class FineRule : std::uint8_t { Pow15, Pow125, Half, Explicit };

[[nodiscard]] std::string_view to_string(Algorithm a);
[[nodiscard]] std::string_view to_string(FineRule r);
/// CSV/config spelling of an element pair: "p2p1p2" or "minip1".
[[nodiscard]] std::string_view element_key(ElementPair pair);

/// "1/27", "0.5" or "3" as a double. Throws ConfigError on malformed input or zero denominators.
[[nodiscard]] double parse_fraction(std::string_view text);

/// h for coarse size H under `rule` (not Explicit).
[[nodiscard]] double fine_size(double H, FineRule rule);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Tgddm2;
  ElementPair elements = ElementPair::TaylorHood;
  RobinParams robin;
  std::vector<double> coarse_sizes;
  FineRule fine_rule = FineRule::Pow15;
  std::vector<double> fine_sizes;  ///< resolved, one per coarse size
  double tol = 1e-6;
  int max_iter = 1000;
  PhysicalParams params;
  std::string output;              ///< CSV path; empty writes to stdout
  bool parallel_rows = false;      ///< run mesh pairs on separate threads
  bool concurrent = false;         ///< Stokes and Darcy solves on separate threads
  std::string mesh_dump;           ///< directory for mesh dumps, empty = off
  std::string matrix_dump;         ///< directory for fine-grid matrix dumps, empty = off

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Parses flags (argv without the program name). `--config FILE` reads flat
/// "key = value" lines using the flag names as keys; flags given on the
/// command line override the file. Unknown keys, an empty argument list and an
/// explicit fine list combined with a fine rule are rejected with ConfigError.
[[nodiscard]] ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Flag summary printed on usage errors.
[[nodiscard]] std::string usage();

struct RowOutcome {
  bool ok = true;
  bool converged = true;           ///< DDM stage converged (true for ctg)
  double divergence_residual = 0.0;
  std::string message;
};

struct RunRecord {
  ExperimentConfig config;
  ConvergenceTable table;
  std::vector<RowOutcome> outcomes;

  [[nodiscard]] bool success() const;
};

/// Runs the configured algorithm for every (H, h) pair against the
/// manufactured solution. Per-row failures are recorded, the sweep continues.
[[nodiscard]] RunRecord run_experiment(const ExperimentConfig& cfg);

/// Fitted slopes per error column. Empty with fewer than three rows; a column
/// holding a value that is not positive and finite is left out.
[[nodiscard]] std::map<std::string, double> table_rates(const ConvergenceTable& table);

void write_csv(const RunRecord& rec, std::ostream& out);
/// Throws std::runtime_error naming the path on I/O failure.
void write_csv(const RunRecord& rec, const std::filesystem::path& path);

/// Parsed CSV produced by write_csv.
struct CsvRecord {
  std::string algorithm;
  std::string elements;
  double delta_S = 0.0;
  double delta_D = 0.0;
  ConvergenceTable table;
  std::map<std::string, double> rates;
};

[[nodiscard]] CsvRecord read_csv(std::istream& in);
[[nodiscard]] CsvRecord read_csv(const std::filesystem::path& path);

/// Process exit code for a finished run: 0 on full success, 2 on any row failure.
[[nodiscard]] int exit_code(const RunRecord& rec);

}  // namespace sdtg
