#include "magnonlab/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace magnonlab {

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Periodic: return "periodic";
    case Boundary::Neumann: return "neumann";
    case Boundary::Dirichlet: return "dirichlet";
  }
  return "?";
}

Boundary parse_boundary(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "periodic") return Boundary::Periodic;
  if (lower == "neumann") return Boundary::Neumann;
  if (lower == "dirichlet") return Boundary::Dirichlet;
  throw std::invalid_argument("unknown boundary condition '" + name + "'");
}

LatticeSpec LatticeSpec::cube(int dimension, int side, Boundary boundary) {
  LatticeSpec spec;
  spec.dimension = dimension;
  spec.sides.assign(static_cast<std::size_t>(std::max(dimension, 0)), side);
  spec.boundary = boundary;
  return spec;
}

void LatticeSpec::validate() const {
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("lattice dimension must be 1, 2 or 3, got " + std::to_string(dimension));
  if (sides.size() != static_cast<std::size_t>(dimension))
    throw std::invalid_argument("lattice needs one side length per axis");
  for (int s : sides)
    if (s < 2) throw std::invalid_argument("lattice side length must be >= 2, got " + std::to_string(s));
}

std::string LatticeSpec::describe() const {
  std::ostringstream os;
  os << to_string(boundary) << ":";
  for (std::size_t i = 0; i < sides.size(); ++i) os << (i ? "x" : "") << sides[i];
  return os.str();
}

Lattice::Lattice(LatticeSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const int d = spec_.dimension;
  extents_.resize(static_cast<std::size_t>(d));
  num_sites_ = 1;
  for (int a = 0; a < d; ++a) {
    const int side = spec_.sides[static_cast<std::size_t>(a)];
    extents_[static_cast<std::size_t>(a)] = spec_.boundary == Boundary::Dirichlet ? side - 1 : side;
    num_sites_ *= static_cast<std::size_t>(extents_[static_cast<std::size_t>(a)]);
  }

  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  for (std::size_t site = 0; site < num_sites_; ++site) {
    auto x = coordinates(site);
    for (int a = 0; a < d; ++a) {
      const int ext = extents_[static_cast<std::size_t>(a)];
      auto y = x;
      const int step = x[static_cast<std::size_t>(a)] + 1;
      if (spec_.boundary == Boundary::Periodic) {
        y[static_cast<std::size_t>(a)] = step % ext;
      } else {
        if (step >= ext) continue;
        y[static_cast<std::size_t>(a)] = step;
      }
      const std::size_t other = index(y);
      counts[{std::min(site, other), std::max(site, other)}] += 1;
    }
  }
  bonds_.reserve(counts.size());
  for (const auto& [pair, m] : counts) bonds_.push_back(Bond{pair.first, pair.second, m});

  boundary_weights_.assign(num_sites_, 0);
  if (spec_.boundary == Boundary::Dirichlet) {
    for (std::size_t site = 0; site < num_sites_; ++site) {
      const auto x = coordinates(site);
      int w = 0;
      for (int a = 0; a < d; ++a) {
        const int ext = extents_[static_cast<std::size_t>(a)];
        if (x[static_cast<std::size_t>(a)] == 0) ++w;
        if (x[static_cast<std::size_t>(a)] == ext - 1) ++w;
      }
      boundary_weights_[site] = w;
    }
  }
}

std::vector<int> Lattice::coordinates(std::size_t site) const {
  std::vector<int> x(extents_.size());
  for (std::size_t a = extents_.size(); a-- > 0;) {
    const auto ext = static_cast<std::size_t>(extents_[a]);
    x[a] = static_cast<int>(site % ext);
    site /= ext;
  }
  return x;
}

std::size_t Lattice::index(std::span<const int> coords) const {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < extents_.size(); ++a) {
    if (coords[a] < 0 || coords[a] >= extents_[a]) throw std::out_of_range("lattice coordinate out of range");
    idx = idx * static_cast<std::size_t>(extents_[a]) + static_cast<std::size_t>(coords[a]);
  }
  return idx;
}

int Lattice::bond_weight() const {
  int total = 0;
  for (const auto& b : bonds_) total += b.multiplicity;
  return total;
}

Lattice build_lattice(const LatticeSpec& spec) { return Lattice(spec); }

// ---------------------------------------------------------------------------

MomentumGrid::MomentumGrid(const LatticeSpec& spec) : dimension_(spec.dimension), periods_(spec.sides) {
  spec.validate();
  switch (spec.boundary) {
    case Boundary::Periodic: family_ = EigenfunctionFamily::PlaneWave; break;
    case Boundary::Neumann: family_ = EigenfunctionFamily::NeumannCosine; break;
    case Boundary::Dirichlet: family_ = EigenfunctionFamily::DirichletSine; break;
  }
  const int first = family_ == EigenfunctionFamily::DirichletSine ? 1 : 0;

  std::vector<int> counts(periods_.size());
  count_ = 1;
  for (std::size_t a = 0; a < periods_.size(); ++a) {
    counts[a] = periods_[a] - first;
    count_ *= static_cast<std::size_t>(counts[a]);
  }
  labels_.resize(count_ * periods_.size());
  momenta_.resize(count_ * periods_.size());
  for (std::size_t i = 0; i < count_; ++i) {
    std::size_t rest = i;
    for (std::size_t a = periods_.size(); a-- > 0;) {
      const int n = static_cast<int>(rest % static_cast<std::size_t>(counts[a])) + first;
      rest /= static_cast<std::size_t>(counts[a]);
      labels_[i * periods_.size() + a] = n;
      const double scale = family_ == EigenfunctionFamily::PlaneWave ? 2.0 * std::numbers::pi : std::numbers::pi;
      momenta_[i * periods_.size() + a] = scale * n / periods_[a];
    }
  }
}

std::span<const double> MomentumGrid::momentum(std::size_t i) const {
  return {momenta_.data() + i * periods_.size(), periods_.size()};
}

std::span<const int> MomentumGrid::label(std::size_t i) const {
  return {labels_.data() + i * periods_.size(), periods_.size()};
}

bool MomentumGrid::is_zero_mode(std::size_t i) const {
  const auto n = label(i);
  return std::all_of(n.begin(), n.end(), [](int v) { return v == 0; });
}

double MomentumGrid::normalization(int axis, int n) const {
  const double p = periods_[static_cast<std::size_t>(axis)];
  switch (family_) {
    case EigenfunctionFamily::PlaneWave: return 1.0 / std::sqrt(p);
    case EigenfunctionFamily::NeumannCosine: return n == 0 ? 1.0 / std::sqrt(p) : std::sqrt(2.0 / p);
    // Σ_{x=1}^{ℓ-1} sin²(πnx/ℓ) = ℓ/2.
    case EigenfunctionFamily::DirichletSine: return std::sqrt(2.0 / p);
  }
  return 0.0;
}

std::complex<double> MomentumGrid::eigenfunction(std::size_t i, std::span<const int> coords) const {
  const auto k = momentum(i);
  const auto n = label(i);
  std::complex<double> value = 1.0;
  for (std::size_t a = 0; a < periods_.size(); ++a) {
    const double norm = normalization(static_cast<int>(a), n[a]);
    const double x = coords[a];
    switch (family_) {
      case EigenfunctionFamily::PlaneWave: value *= norm * std::polar(1.0, k[a] * x); break;
      case EigenfunctionFamily::NeumannCosine:
        value *= n[a] == 0 ? norm : norm * std::cos(k[a] * (x + 0.5));
        break;
      case EigenfunctionFamily::DirichletSine: value *= norm * std::sin(k[a] * (x + 1.0)); break;
    }
  }
  return value;
}

MomentumGrid momentum_grid(const LatticeSpec& spec) { return MomentumGrid(spec); }

// ---------------------------------------------------------------------------

LatticeSpec BoxPartition::box_spec() const {
  LatticeSpec spec = LatticeSpec::cube(parent.dimension, box_side, mode);
  return spec;
}

BoxPartition partition_boxes(const Lattice& lattice, int ell, Boundary mode) {
  if (mode == Boundary::Periodic) throw std::invalid_argument("partition mode must be Neumann or Dirichlet");
  if (ell < 2) throw std::invalid_argument("box side must be >= 2");
  if (lattice.boundary() == Boundary::Dirichlet)
    throw std::invalid_argument("cannot partition a Dirichlet box");
  const int d = lattice.dimension();
  for (int a = 0; a < d; ++a)
    if (lattice.extents()[static_cast<std::size_t>(a)] % ell != 0)
      throw std::invalid_argument("box side " + std::to_string(ell) + " does not divide lattice side " +
                                  std::to_string(lattice.extents()[static_cast<std::size_t>(a)]));

  BoxPartition part;
  part.parent = lattice.spec();
  part.box_side = ell;
  part.mode = mode;

  std::vector<int> cells_per_axis(static_cast<std::size_t>(d));
  std::size_t num_boxes = 1;
  for (int a = 0; a < d; ++a) {
    cells_per_axis[static_cast<std::size_t>(a)] = lattice.extents()[static_cast<std::size_t>(a)] / ell;
    num_boxes *= static_cast<std::size_t>(cells_per_axis[static_cast<std::size_t>(a)]);
  }
  part.boxes.resize(num_boxes);

  auto is_corridor = [&](const std::vector<int>& x) {
    return mode == Boundary::Dirichlet &&
           std::any_of(x.begin(), x.end(), [ell](int c) { return c % ell == 0; });
  };

  // Sites visited in parent lexicographic order; within one box that is the
  // box's own lexicographic order as well.
  for (std::size_t site = 0; site < lattice.num_sites(); ++site) {
    const auto x = lattice.coordinates(site);
    if (is_corridor(x)) {
      part.corridor.push_back(site);
      continue;
    }
    std::size_t cell = 0;
    for (int a = 0; a < d; ++a)
      cell = cell * static_cast<std::size_t>(cells_per_axis[static_cast<std::size_t>(a)]) +
             static_cast<std::size_t>(x[static_cast<std::size_t>(a)] / ell);
    part.boxes[cell].push_back(site);
  }

  if (mode == Boundary::Dirichlet) {
    std::vector<char> in_corridor(lattice.num_sites(), 0);
    for (auto s : part.corridor) in_corridor[s] = 1;
    std::vector<int> weight(lattice.num_sites(), 0);
    for (const auto& b : lattice.bonds()) {
      if (in_corridor[b.first] && !in_corridor[b.second]) weight[b.second] += b.multiplicity;
      if (in_corridor[b.second] && !in_corridor[b.first]) weight[b.first] += b.multiplicity;
    }
    for (const auto& box : part.boxes) {
      std::vector<int> w;
      w.reserve(box.size());
      for (auto s : box) w.push_back(weight[s]);
      part.corridor_weights.push_back(std::move(w));
    }
  }
  return part;
}

}  // namespace magnonlab
