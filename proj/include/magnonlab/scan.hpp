#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnonlab/spin_ed.hpp"

namespace magnonlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IdentityCase {
  int dimension = 1;
  int box_side = 2;
  Spin spin;
};

struct PartitionBoundCase {
  int dimension = 1;
  int side = 2;
  Boundary boundary = Boundary::Neumann;
  Spin spin;
  std::optional<double> constant;
};

struct LocalizationCase {
  int dimension = 1;
  int side = 4;
  int box_side = 2;
  Spin spin;
  double beta_tilde = 1.0;
  double field = 0.0;
};

struct EquivalenceCase {
  int dimension = 1;
  int side = 2;
  SpinVariant variant = SpinVariant::Neumann;
  Spin spin;
  double field = 0.0;
};

struct BoundsMatrix {
  std::vector<IdentityCase> identity;
  std::vector<IdentityCase> gap_bound;
  std::vector<PartitionBoundCase> partition_bound;
  std::vector<LocalizationCase> localization;
  std::vector<EquivalenceCase> equivalence;

  std::size_t size() const {
    return identity.size() + gap_bound.size() + partition_bound.size() + localization.size() + equivalence.size();
  }
};

/// Resolved experiment configuration. Precedence: built-in defaults, then the
/// config file, then command-line flags.
struct ExperimentConfig {
  double coupling = 1.0;
  double magnon_stiffness = 2.0;

  int dimension = 1;
  std::vector<int> sides = {4};
  std::vector<Spin> spins;
  std::vector<double> beta_tildes = {1.0};

  double max_dimension = kDefaultDimensionBudget;
  double quadrature_tolerance = 1e-8;
  unsigned workers = 0;

  std::string csv_path;
  std::string json_path;
  bool timing = false;

  BoundsMatrix bounds;

  /// Throws ConfigError.
  void validate() const;
};

/// Scan d=1, L=4, S = 1/2..4, β̃ = 1, and the default bounds matrix.
ExperimentConfig default_config();
BoundsMatrix default_bounds_matrix();

/// Overlays the keys present in `j` onto `base`. Unknown keys are errors.
ExperimentConfig merge_config(ExperimentConfig base, const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = default_config());

nlohmann::json config_to_json(const ExperimentConfig& config);
/// FNV-1a of the compact JSON echo (output paths and worker count excluded).
std::string config_hash(const ExperimentConfig& config);

std::vector<Spin> parse_spin_list(const std::string& text);

struct ConvergenceRow {
  std::size_t index = 0;
  int dimension = 0;
  int side = 0;
  std::string lattice;
  Spin spin;
  double beta_tilde = 0.0;
  std::string status;  ///< "ok", "skipped" or "error"
  std::string note;
  double hilbert_dimension = 0.0;
  double f_exact_per_spin = 0.0;
  double magnon_nonzero = 0.0;
  double magnon_finite = 0.0;
  double bz_integral = 0.0;
  double bz_error = 0.0;
  double gap_finite = 0.0;   ///< f/S - magnon_finite
  double gap_nonzero = 0.0;  ///< f/S - magnon_nonzero
  double gap_bz = 0.0;       ///< f/S - bz_integral
  std::optional<double> wall_seconds;

  bool ok() const { return status == "ok"; }
};

/// One row per (side, β̃, S) in that nesting order. β = β̃/S. Points that fail
/// are reported in their row and never affect the others.
std::vector<ConvergenceRow> run_convergence_scan(const ExperimentConfig& config);

inline constexpr const char* kCsvSchema = "# magnonlab-convergence v1";

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, const ExperimentConfig& config);
std::vector<ConvergenceRow> read_convergence_csv(std::istream& is);
nlohmann::json convergence_json(const std::vector<ConvergenceRow>& rows, const ExperimentConfig& config);

enum class GapColumn { Finite, NonZero, Integral };
GapColumn parse_gap_column(const std::string& name);
std::string to_string(GapColumn c);

struct FitResult {
  double exponent = 0.0;   ///< p in gap ≈ a S^{-p}
  double amplitude = 0.0;  ///< a
  double residual = 0.0;   ///< rms of log-residuals
  std::size_t used = 0;
  std::vector<std::string> excluded;
  std::string label = "observational least-squares fit of log gap against log S; not a proven rate";
};

/// Requires rows from a single (lattice, β̃) group; rows with nonpositive gap
/// are excluded with a note. Fewer than 3 usable rows is an error.
FitResult fit_error_scaling(const std::vector<ConvergenceRow>& rows, GapColumn column = GapColumn::Finite);

/// Rows grouped by (lattice, β̃), in first-appearance order.
std::vector<std::vector<ConvergenceRow>> group_rows(const std::vector<ConvergenceRow>& rows);

struct SuiteResult {
  nlohmann::json report;
  std::size_t checks_run = 0;
  std::size_t failures = 0;
  std::vector<std::string> summary;  ///< one human-readable line per check
  std::vector<std::string> warnings;
  int exit_code = 0;                 ///< 0 all pass, 1 any failure
};

SuiteResult run_bounds_suite(const ExperimentConfig& config);

}  // namespace magnonlab
