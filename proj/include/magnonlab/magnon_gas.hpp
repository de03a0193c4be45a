#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "magnonlab/lattice.hpp"

namespace magnonlab {

/// ε(k) = Σ_i (1 - cos k_i).
double dispersion(std::span<const double> k);

/// Free magnon gas at scaled inverse temperature β̃ = βS with coupling J.
struct MagnonModel {
  int dimension = 3;
  double coupling = 1.0;
  double beta_tilde = 1.0;

  void validate() const;
  double stiffness() const { return beta_tilde * coupling; }
};

struct QuadratureSpec {
  double relative_tolerance = 1e-8;
  /// Finest midpoint grid has 8·2^max_level nodes per axis.
  int max_level = 7;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int nodes_per_axis = 0;
  int levels = 0;
  std::string scheme;
};

/// Refinement budget exhausted before reaching the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}
  double best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// (1/β̃) ∫_{[-π,π]^d} dk/(2π)^d log(1 - e^{-β̃Jε(k)}), per site and per unit
/// spin. Midpoint-shifted periodic trapezoid rule (no node at k = 0) with
/// Richardson extrapolation in h^d, h^{d+2}, ...; the log singularity at the
/// origin only produces those powers.
QuadratureResult magnon_free_energy_integral(const MagnonModel& model, const QuadratureSpec& spec = {});

/// Same integral from the expansion log(1-q) = -Σ q^n/n, integrated term by
/// term: ∫ dk/(2π)^d e^{-nbε(k)} = (e^{-nb} I₀(nb))^d. The tail of the series
/// is summed with the large-argument expansion of I₀ and Hurwitz zeta values.
QuadratureResult magnon_free_energy_bessel_series(const MagnonModel& model, double relative_tolerance = 1e-12);

/// (1/(β̃·volume)) Σ_k log(1 - e^{-β̃·e_k}) for scaled mode energies e_k
/// (energy per unit spin).
double magnon_free_energy_modes(double beta_tilde, std::span<const double> scaled_energies, double volume);

/// Mode sum over a momentum grid with e_k = J·ε(k) + shift. volume defaults to
/// the number of modes of the grid. Throws std::domain_error if a zero-energy
/// mode is included.
double magnon_free_energy_finite(const MagnonModel& model, const MomentumGrid& grid, bool exclude_zero_mode,
                                 std::optional<double> volume = std::nullopt, double energy_shift = 0.0);

/// Ideal Bose gas on a finite set of modes with a cap on the total particle
/// number. With zero_mode_only_cap the cap binds only the zero-energy modes.
struct ConstrainedBoseSpec {
  std::vector<double> energies;
  std::optional<int> max_particles;
  bool zero_mode_only_cap = false;

  void validate() const;
};

/// log Σ_{n_k >= 0, Σ n_k <= N_max} exp(-β Σ n_k e_k), exact, by a dynamic
/// programme over modes carried in log-domain. Throws std::domain_error if
/// the sum diverges (uncapped zero mode).
double constrained_bose_log_partition(const ConstrainedBoseSpec& spec, double beta);

/// log W_N for N = 0..max_number, where W_N sums exp(-β Σ n_k e_k) over
/// occupation vectors with exactly N particles.
std::vector<double> bose_level_log_weights(std::span<const double> energies, double beta, int max_number);

/// Relaxation of the total-number constraint to the zero modes only:
/// log[ C(N_max + z, z) Π_{e_k > 0} 1/(1 - e^{-βe_k}) ], z = number of zero
/// modes. Upper bound for constrained_bose_log_partition.
double relaxed_bose_log_bound(const ConstrainedBoseSpec& spec, double beta);

/// Large-occupation tail of a box of ℓ^d sites in a field h (upper-bound
/// construction), exact values against the closed-form estimate.
struct BoseTailReport {
  double beta_tilde = 0.0;
  double spin = 0.0;
  double field = 0.0;
  int cutoff = 0;
  int box_side = 0;
  int dimension = 0;
  int modes = 0;

  double log_exact_tail = 0.0;     ///< direct sum over N > N̄
  double log_dp_complement = 0.0;  ///< log(full product - constrained sum)
  double log_intermediate = 0.0;   ///< e^{-aN̄/2} Π (1-e^{-a})^{-1}
  double log_paper_bound = 0.0;    ///< -a N̄ / 4, a = β̃h/S
  double truncation_bound = 0.0;   ///< relative bound on the neglected N > N_big part

  bool field_below_spin = false;   ///< h < S
  double occupation_margin = 0.0;  ///< S^{-1}hN̄ - 4ℓ^d log(S/h)
  bool bound_applicable = false;
  bool bound_holds = false;        ///< exact tail <= paper bound (checked when applicable)
};

BoseTailReport bose_remainder_tail(double beta_tilde, double spin, double field, int cutoff, int box_side,
                                   int dimension);

}  // namespace magnonlab
