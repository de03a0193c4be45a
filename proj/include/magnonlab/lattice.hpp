#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace magnonlab {

enum class Boundary { Periodic, Neumann, Dirichlet };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& name);

/// Cubic (or rectangular) portion of Z^d.
///
/// `sides` is the side length L (Periodic), the box side ℓ (Neumann), or the
/// box period ℓ (Dirichlet). A Dirichlet box of period ℓ holds the ℓ-1 interior
/// sites x = 1..ℓ-1 per axis, the sites at x = 0 and x = ℓ belonging to the
/// pinned corridor.
struct LatticeSpec {
  int dimension = 3;
  std::vector<int> sides;
  Boundary boundary = Boundary::Periodic;

  static LatticeSpec cube(int dimension, int side, Boundary boundary);

  /// Throws std::invalid_argument on dimension outside 1..3, wrong number of
  /// sides, or any side < 2.
  void validate() const;
  std::string describe() const;
};

/// Unordered nearest-neighbour pair. On a periodic axis of length 2 both
/// torus directions join the same pair, giving multiplicity 2.
struct Bond {
  std::size_t first = 0;
  std::size_t second = 0;
  int multiplicity = 1;

  friend bool operator==(const Bond&, const Bond&) = default;
};

class Lattice {
 public:
  explicit Lattice(LatticeSpec spec);

  const LatticeSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension; }
  Boundary boundary() const { return spec_.boundary; }
  std::size_t num_sites() const { return num_sites_; }

  /// Sites per axis (ℓ-1 for Dirichlet boxes).
  std::span<const int> extents() const { return extents_; }

  /// Lexicographic: axis 0 is the slowest index.
  std::vector<int> coordinates(std::size_t site) const;
  std::size_t index(std::span<const int> coords) const;

  const std::vector<Bond>& bonds() const { return bonds_; }
  /// Sum of bond multiplicities.
  int bond_weight() const;

  /// Number of pinned corridor neighbours of each site (Dirichlet only;
  /// zeros otherwise).
  const std::vector<int>& boundary_weights() const { return boundary_weights_; }

 private:
  LatticeSpec spec_;
  std::vector<int> extents_;
  std::size_t num_sites_ = 0;
  std::vector<Bond> bonds_;
  std::vector<int> boundary_weights_;
};

Lattice build_lattice(const LatticeSpec& spec);

enum class EigenfunctionFamily { PlaneWave, NeumannCosine, DirichletSine };

/// Momenta dual to a lattice together with the orthonormal eigenfunctions of
/// the corresponding lattice Laplacian.
class MomentumGrid {
 public:
  explicit MomentumGrid(const LatticeSpec& spec);

  EigenfunctionFamily family() const { return family_; }
  int dimension() const { return dimension_; }
  std::size_t size() const { return count_; }

  std::span<const double> momentum(std::size_t i) const;
  /// Integer label m (Periodic) or n (Neumann/Dirichlet) per axis.
  std::span<const int> label(std::size_t i) const;
  bool is_zero_mode(std::size_t i) const;

  /// φ_k at a site given in 0-based lattice coordinates.
  std::complex<double> eigenfunction(std::size_t i, std::span<const int> coords) const;
  /// Per-axis prefactor of φ_k for label n on axis `axis`.
  double normalization(int axis, int n) const;

 private:
  EigenfunctionFamily family_;
  int dimension_;
  std::vector<int> periods_;
  std::size_t count_ = 0;
  std::vector<int> labels_;
  std::vector<double> momenta_;
};

MomentumGrid momentum_grid(const LatticeSpec& spec);

/// Decomposition of a parent lattice into localization boxes.
struct BoxPartition {
  LatticeSpec parent;
  int box_side = 0;
  Boundary mode = Boundary::Neumann;
  /// Parent site indices; each box lists its sites in the box's own
  /// lexicographic order.
  std::vector<std::vector<std::size_t>> boxes;
  std::vector<std::size_t> corridor;
  /// Dirichlet mode: per box, per site, bond weight into the corridor.
  std::vector<std::vector<int>> corridor_weights;

  /// Spec of a single box as a standalone lattice.
  LatticeSpec box_spec() const;
};

/// mode must be Neumann or Dirichlet. Requires ℓ >= 2 dividing every side.
BoxPartition partition_boxes(const Lattice& lattice, int ell, Boundary mode);

}  // namespace magnonlab
