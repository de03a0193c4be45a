#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magnonlab/lattice.hpp"
#include "magnonlab/magnon_gas.hpp"
#include "magnonlab/spin_ed.hpp"

namespace magnonlab {

/// lhs >= rhs, with slack = lhs - rhs and pass = slack >= -tolerance.
struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

Inequality check_at_least(std::string name, double lhs, double rhs, double tolerance = 0.0);

// ---------------------------------------------------------------------------
// Neumann box in Fourier form:
//   H^N = -dSJ(ℓ^d - ℓ^{d-1}) + J Σ_k ε(k) Ŝ_k·Ŝ_k,  Ŝ_k = Σ_x φ_k(x) S_x.

struct IdentityReport {
  int dimension = 0;
  int box_side = 0;
  Spin spin;
  double coupling = 1.0;
  std::size_t hilbert_dimension = 0;
  double constant = 0.0;
  double max_deviation = 0.0;
  /// max |Σ_k Ŝ_k·Ŝ_k - S(S+1)ℓ^d|
  double plancherel_deviation = 0.0;
  double tolerance = 1e-10;
  bool pass = false;
};

IdentityReport neumann_fourier_identity_check(int dimension, int box_side, Spin spin, double coupling = 1.0,
                                              double tolerance = 1e-10);

// ---------------------------------------------------------------------------
// Total-spin sector bounds on a Neumann box. With c₀ = ℓ² min_{k≠0} ε(k) and
// c = Jc₀/2:
//   intermediate: E_min(S_T) >= -dSJℓ^d + Jc₀ℓ^{-2}[S(S+1)ℓ^d - ℓ^{-d}S_T(S_T+1)]
//   final:        E_min(S_T) >= c ℓ^{d-2} S (S - S_T/ℓ^d)
//                 whenever S - S_T/ℓ^d > d J c^{-1} ℓ².

struct GapBoundSector {
  int twice_total = 0;
  double min_energy = 0.0;
  Inequality intermediate;
  double occupation_gap = 0.0;  ///< S - S_T/ℓ^d
  bool applicable = false;
  Inequality final_bound;       ///< evaluated always, counted only when applicable
};

struct GapBoundReport {
  int dimension = 0;
  int box_side = 0;
  Spin spin;
  double coupling = 1.0;
  double c0 = 0.0;
  double c0_closed_form = 0.0;  ///< ℓ²(1 - cos(π/ℓ))
  double c = 0.0;
  double condition_threshold = 0.0;  ///< d J c^{-1} ℓ²
  std::vector<GapBoundSector> sectors;
  std::size_t applicable_count = 0;
  bool intermediate_pass = false;
  bool final_pass = false;
  bool pass = false;
};

GapBoundReport gap_bound_verify(int dimension, int box_side, Spin spin, double coupling = 1.0, double tolerance = 1e-9,
                           unsigned workers = 0);

// ---------------------------------------------------------------------------
// Interaction bound |K| <= C N̂², checked sector by sector (N̂² = N² on block N).

struct PartitionBoundSector {
  int number = 0;
  double k_min = 0.0;
  double k_max = 0.0;
  Inequality minus;  ///< min eig(C N² - K) >= 0
  Inequality plus;   ///< min eig(C N² + K) >= 0
};

struct PartitionBoundWitness {
  int number = -1;
  std::string sign;             ///< "C*N^2-K" or "C*N^2+K"
  double min_eigenvalue = 0.0;
  double rayleigh_k = 0.0;      ///< ⟨v, K v⟩
  double number_squared = 0.0;  ///< ⟨v, N̂² v⟩ = N²
  double residual = 0.0;        ///< |K v - λ v|
};

struct PartitionBoundReport {
  LatticeSpec lattice;
  Spin spin;
  double coupling = 1.0;
  double c_used = 0.0;
  double c_proof = 0.0;
  std::vector<PartitionBoundSector> sectors;
  /// max |K| entry on the 0- and 1-particle sectors.
  double low_sector_max = 0.0;
  double empirical_c = 0.0;         ///< bisection, 1e-3 relative
  double empirical_c_direct = 0.0;  ///< max_N ρ(K_N)/N²
  std::optional<PartitionBoundWitness> witness;
  bool pass = false;
};

/// Constant from the operator-inequality argument: 1 - √(1-x) <= x and
/// Cauchy–Schwarz give |K| <= (3/2)|J| w_max N̂², w_max the largest total
/// bond weight at a site.
double partition_bound_proof_constant(const Lattice& lattice, double coupling);

PartitionBoundReport partition_bound_verify(const LatticeSpec& lattice, Spin spin, std::optional<double> c_candidate = std::nullopt,
                           double coupling = 1.0, unsigned workers = 0);

// ---------------------------------------------------------------------------
// Lower-bound bookkeeping: S*/S = 1 - 2ℓ² log(2S+1)/(cβ̃S) and
// R = (2S+1)^{ℓ^d} exp(-cβ̃ℓ^{d-2}S(1 - S*/S)).

struct SStarReport {
  double spin = 0.0;
  int box_side = 0;
  int dimension = 0;
  double beta_tilde = 0.0;
  double c = 0.0;
  double coupling = 1.0;
  double s_star = 0.0;
  double s_star_ratio = 0.0;
  double log_rest_bound = 0.0;
  double log_target = 0.0;    ///< -ℓ^d log(2S+1)
  Inequality consequence;     ///< log_target >= log_rest_bound
  Inequality side_condition;  ///< S - S* > dJc^{-1}ℓ²
  bool condition_holds = false;
  bool s_star_nonnegative = false;
};

SStarReport sstar_schedule(double spin, int box_side, double beta_tilde, double c, int dimension = 3,
                           double coupling = 1.0);

// ---------------------------------------------------------------------------
// Upper-bound schedule N̄ = C S^{2/3}(log S)^{-2/3}, ℓ = C S^{1/6}(log S)^{-2/3},
// h = C S^{5/6}(log S)^{2/3}.

struct UpperSchedule {
  double spin = 0.0;
  double constant = 1.0;
  int dimension = 3;
  double cutoff = 0.0;
  double box_side = 0.0;
  double field = 0.0;
  Inequality field_below_spin;   ///< S > h
  Inequality cutoff_below_spin;  ///< S > N̄
  Inequality box_at_least_two;   ///< ℓ >= 2
  Inequality tail_condition;     ///< S^{-1} h N̄ > 4 ℓ^d log(S/h)
  bool all_guards = false;
};

UpperSchedule upper_bound_schedule(double spin, double constant = 1.0, int dimension = 3);

/// Smallest S on a grid uniform in log S (step `log_step`, from S = 2 up to
/// e^{log_max}) where every guard holds; nullopt when none does.
std::optional<double> smallest_valid_spin(double constant = 1.0, int dimension = 3, double log_max = 69.1,
                                          double log_step = 1e-3);

// ---------------------------------------------------------------------------
// Localization inequalities for a periodic lattice of side L cut into boxes
// of side ℓ, at β = β̃/S:
//   log Z(Λ)   <= (|Λ|/ℓ^d) log Z^N(Λ₁)
//   log Z_h(Λ) >= (|Λ|/ℓ^d) log Z^D_h(Λ₁)

struct LocalizationReport {
  int dimension = 0;
  int side = 0;
  int box_side = 0;
  Spin spin;
  double coupling = 1.0;
  double beta_tilde = 0.0;
  double beta = 0.0;
  double field = 0.0;
  double boxes = 0.0;
  double log_z = 0.0;
  double log_z_neumann = 0.0;
  double log_z_field = 0.0;
  double log_z_dirichlet = 0.0;
  Inequality neumann;    ///< lhs = boxes·log Z^N, rhs = log Z
  Inequality dirichlet;  ///< lhs = log Z_h, rhs = boxes·log Z^D_h
  bool pass = false;
};

LocalizationReport localization_check(int dimension, int side, int box_side, Spin spin, double beta_tilde,
                                      double field = 0.0, double coupling = 1.0, double tolerance = 1e-10,
                                      unsigned workers = 0);

// ---------------------------------------------------------------------------

/// Free-magnon comparators on a periodic lattice, per site per unit spin, with
/// mode energies J_m ε(k).
struct MagnonComparison {
  double nonzero = 0.0;   ///< Σ_{k≠0} only
  double capped = 0.0;    ///< plus the zero mode with occupation <= 2S|Λ|
  double integral = 0.0;  ///< Brillouin-zone integral
  double integral_error = 0.0;
};

MagnonComparison magnon_comparison(const LatticeSpec& periodic, Spin spin, double beta_tilde, double magnon_coupling,
                                   const QuadratureSpec& quadrature = {});

struct SandwichRow {
  Spin spin;
  std::string lattice;
  double beta_tilde = 0.0;
  bool computed = false;
  std::string note;
  double f_exact_per_spin = 0.0;
  MagnonComparison magnon;
  double neumann_bound = 0.0;    ///< -(β̃ℓ^d)^{-1} log Z^N(Λ₁)
  double dirichlet_bound = 0.0;  ///< -(β̃|Λ|)^{-1} (|Λ|/ℓ^d) log Z^D_0(Λ₁)
  Inequality lower;              ///< f/S >= Neumann bound
  Inequality upper;              ///< Dirichlet bound >= f/S
};

struct SandwichSpec {
  std::vector<Spin> spins;
  double beta_tilde = 1.0;
  int dimension = 1;
  int side = 4;
  int box_side = 2;
  double coupling = 1.0;
  double magnon_stiffness = 2.0;
  double dimension_budget = kDefaultDimensionBudget;
};

std::vector<SandwichRow> sandwich_report(const SandwichSpec& spec, unsigned workers = 0);

}  // namespace magnonlab
