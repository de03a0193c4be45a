#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magnonlab/block_operator.hpp"
#include "magnonlab/spin_ed.hpp"

namespace magnonlab {

/// Bosonic Hamiltonian on the truncated Fock space n_x <= 2S, split as
/// H = H₀ + K with H₀ = JS Σ_bonds (a†_x - a†_y)(a_x - a_y) + h N̂ [+ JS Σ w_x n_x]
/// projected onto the truncated space.
struct BosonOperatorSplit {
  SpinModelSpec spec;
  Lattice lattice;
  BlockOperator hamiltonian;
  BlockOperator quadratic;
  BlockOperator interaction;
};

/// Literal Holstein–Primakoff form, one term per ordered neighbour pair:
///   JS Σ_(x,y) { -a†_x √(1 - n̂_x/2S) √(1 - n̂_y/2S) a_y + n̂_x - n̂_x n̂_y / 2S }
/// plus the field and boundary terms of the variant. max_number caps the
/// total particle number (nullopt: full space).
BosonOperatorSplit build_hp_hamiltonian(const SpinModelSpec& spec, std::optional<int> max_number = std::nullopt,
                                        unsigned workers = 0);

struct EquivalenceReport {
  std::size_t dimension = 0;
  double max_entry_deviation = 0.0;
  double max_spectrum_deviation = 0.0;  ///< relative, sorted spectra
  int worst_number = -1;
  std::string worst_row;  ///< occupation strings of the worst entry
  std::string worst_col;
  bool pass = false;
};

/// Compares H_spin and H_boson under |n_x⟩ ↔ |S³_x = n_x - S⟩; block N of the
/// boson operator is matched with the S³ sector M = N - S|Λ|.
EquivalenceReport verify_spin_boson_equivalence(const SpinHamiltonian& spin, const BosonOperatorSplit& boson,
                                                double entry_tolerance = 1e-10, double spectrum_tolerance = 1e-9);

struct ModeEnergy {
  std::vector<double> momentum;
  std::vector<int> label;
  double energy = 0.0;
};

/// One-particle energies of H₀: 2SJ ε(k) (+ h for the Dirichlet model), on
/// the plane-wave, Neumann-cosine or Dirichlet-sine grid of the variant.
std::vector<ModeEnergy> quadratic_mode_energies(const SpinModelSpec& spec);

/// The |Λ|×|Λ| one-particle block of H₀ in the site basis.
Eigen::MatrixXd one_particle_block(const BosonOperatorSplit& split);

struct ModeCertificate {
  double spectrum_deviation = 0.0;          ///< sorted eigenvalues vs sorted mode energies
  double diagonalization_deviation = 0.0;   ///< max |Φ† H₁ Φ - diag(E)|
  double unitarity_deviation = 0.0;         ///< max |Φ†Φ - 1|
  bool pass = false;
};

ModeCertificate certify_mode_energies(const SpinModelSpec& spec, double tolerance = 1e-10);

std::string occupation_label(std::span<const std::uint8_t> occupation);

}  // namespace magnonlab
