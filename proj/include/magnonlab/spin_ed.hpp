#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

#include "magnonlab/block_operator.hpp"
#include "magnonlab/lattice.hpp"
#include "magnonlab/occupation_basis.hpp"

namespace magnonlab {

/// Spin magnitude stored as the integer 2S.
struct Spin {
  int twice = 1;

  static Spin from_value(double s);
  /// Accepts "3/2", "1.5" or "2".
  static Spin parse(const std::string& text);

  double value() const { return 0.5 * twice; }
  std::string str() const;

  friend bool operator==(Spin, Spin) = default;
};

enum class SpinVariant { Periodic, Neumann, DirichletField };

std::string to_string(SpinVariant v);

/// H = J Σ_bonds m_b (S² - S_x·S_y) + h Σ_x n_x [+ J S Σ_x w_x n_x],
/// n_x = S³_x + S, with w_x the number of pinned corridor neighbours of x
/// (DirichletField only).
struct SpinModelSpec {
  LatticeSpec lattice;
  Spin spin;
  double coupling = 1.0;
  double field = 0.0;
  SpinVariant variant = SpinVariant::Periodic;
  std::vector<int> boundary_weights;
  double dimension_budget = kDefaultDimensionBudget;

  static SpinModelSpec periodic(LatticeSpec lattice, Spin spin, double coupling = 1.0, double field = 0.0);
  static SpinModelSpec neumann(LatticeSpec lattice, Spin spin, double coupling = 1.0, double field = 0.0);
  /// Dirichlet box of period ℓ; boundary weights taken from the lattice.
  static SpinModelSpec dirichlet(LatticeSpec box, Spin spin, double coupling = 1.0, double field = 0.0);

  /// Coupling may have either sign (used for fault injection); it must be finite.
  void validate() const;
  bool rotation_invariant() const { return variant != SpinVariant::DirichletField && field == 0.0; }
};

/// (2S+1)^|Λ|, as a double.
double spin_hilbert_dimension(const SpinModelSpec& spec);

struct SpinHamiltonian {
  SpinModelSpec spec;
  Lattice lattice;
  BlockOperator op;

  std::size_t num_sites() const { return lattice.num_sites(); }
  /// 2M for block N, M = N - S|Λ|.
  int twice_magnetization(int number) const;
};

/// Throws BudgetExceeded before allocating anything if (2S+1)^|Λ| is above
/// the model's budget.
SpinHamiltonian build_spin_hamiltonian(const SpinModelSpec& spec, unsigned workers = 0);

struct BlockTrace {
  int number = 0;
  int twice_magnetization = 0;
  std::size_t dimension = 0;
  double log_trace = 0.0;
};

struct ThermalResult {
  double beta = 0.0;
  double log_z = 0.0;
  /// -(β|Λ|)^{-1} log Z
  double free_energy_per_site = 0.0;
  double ground_energy = 0.0;
  std::vector<BlockTrace> blocks;
};

ThermalResult thermal_trace(const SpinHamiltonian& h, double beta, unsigned workers = 0);
ThermalResult thermal_trace(const SpinHamiltonian& h, const BlockSpectrum& spectrum, double beta);

/// Σ_{x,y} G(x,y) S_x·S_y on the occupation space (G symmetric, |Λ|×|Λ|).
BlockOperator spin_pair_form(std::shared_ptr<const SectorSpace> space, Spin spin, const Eigen::MatrixXd& g);

/// Total spin Casimir S_T² as a block operator.
BlockOperator total_spin_squared(const SpinHamiltonian& h);

/// max |[H, S_T²]| entry over all blocks.
double casimir_commutator_norm(const SpinHamiltonian& h);

struct MultipletSector {
  int twice_total = 0;
  int twice_magnetization = 0;
  std::vector<double> energies;  ///< ascending
};

struct MultipletTable {
  /// Sorted by (twice_total descending, twice_magnetization ascending).
  std::vector<MultipletSector> sectors;
  /// max |λ - s(s+1)| over all S_T² eigenvalues before rounding.
  double max_label_deviation = 0.0;

  const MultipletSector* find(int twice_total, int twice_magnetization) const;
  /// Distinct 2S_T values, descending.
  std::vector<int> total_spins() const;
  std::size_t dimension() const;
};

double log_partial_trace(const MultipletSector& sector, double beta);

/// Simultaneous diagonalization of H and S_T² inside each S³ block. Requires
/// a rotation-invariant model (Periodic/Neumann, h = 0).
MultipletTable total_spin_resolve(const SpinHamiltonian& h, unsigned workers = 0);

/// Largest relative spread of Tr_{S_T,M} e^{-βH} over M at fixed S_T.
double multiplet_trace_spread(const MultipletTable& table, double beta);

/// Minimum energy over all sectors with total spin S_T (= twice_total / 2).
double sector_min_energy(const MultipletTable& table, int twice_total);

}  // namespace magnonlab
