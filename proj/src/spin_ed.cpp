#include "magnonlab/spin_ed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "magnonlab/numeric.hpp"

namespace magnonlab {

namespace {

// ⟨n+1|S⁺|n⟩² = (n+1)(2S-n), integer.
double raise_element(int n, int twice) { return std::sqrt(static_cast<double>((n + 1) * (twice - n))); }
// ⟨n-1|S⁻|n⟩² = n(2S-n+1).
double lower_element(int n, int twice) { return std::sqrt(static_cast<double>(n * (twice - n + 1))); }

std::size_t locate(const OccupationBasis& basis, std::span<const std::uint8_t> occ) {
  const auto j = basis.find(occ);
  if (!j) throw std::logic_error("operator left its conserved-number sector");
  return *j;
}

}  // namespace

Spin Spin::from_value(double s) {
  const double t = 2.0 * s;
  if (!(t >= 1.0) || std::abs(t - std::round(t)) > 1e-12 || t > 255.0)
    throw std::invalid_argument("spin must be a positive multiple of 1/2 (at most 255/2)");
  return Spin{static_cast<int>(std::lround(t))};
}

Spin Spin::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return from_value(std::stod(text));
    const int num = std::stoi(text.substr(0, slash));
    const int den = std::stoi(text.substr(slash + 1));
    if (den == 2) return from_value(0.5 * num);
    if (den == 1) return from_value(num);
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw std::invalid_argument("cannot parse spin '" + text + "'");
}

std::string Spin::str() const { return twice % 2 == 0 ? std::to_string(twice / 2) : std::to_string(twice) + "/2"; }

std::string to_string(SpinVariant v) {
  switch (v) {
    case SpinVariant::Periodic: return "periodic";
    case SpinVariant::Neumann: return "neumann";
    case SpinVariant::DirichletField: return "dirichlet";
  }
  return "?";
}

SpinModelSpec SpinModelSpec::periodic(LatticeSpec lattice, Spin spin, double coupling, double field) {
  lattice.boundary = Boundary::Periodic;
  return SpinModelSpec{std::move(lattice), spin, coupling, field, SpinVariant::Periodic, {}, kDefaultDimensionBudget};
}

SpinModelSpec SpinModelSpec::neumann(LatticeSpec lattice, Spin spin, double coupling, double field) {
  lattice.boundary = Boundary::Neumann;
  return SpinModelSpec{std::move(lattice), spin, coupling, field, SpinVariant::Neumann, {}, kDefaultDimensionBudget};
}

SpinModelSpec SpinModelSpec::dirichlet(LatticeSpec box, Spin spin, double coupling, double field) {
  box.boundary = Boundary::Dirichlet;
  Lattice lattice(box);
  return SpinModelSpec{std::move(box), spin, coupling, field, SpinVariant::DirichletField, lattice.boundary_weights(),
                       kDefaultDimensionBudget};
}

void SpinModelSpec::validate() const {
  lattice.validate();
  if (spin.twice < 1 || spin.twice > 255) throw std::invalid_argument("2S must lie in [1, 255]");
  if (!std::isfinite(coupling)) throw std::invalid_argument("coupling must be finite");
  if (!std::isfinite(field) || field < 0.0) throw std::invalid_argument("field h must be finite and >= 0");
  const auto expected = variant == SpinVariant::Periodic  ? Boundary::Periodic
                        : variant == SpinVariant::Neumann ? Boundary::Neumann
                                                          : lattice.boundary;
  if (lattice.boundary != expected) throw std::invalid_argument("lattice boundary does not match the model variant");
  if (variant == SpinVariant::DirichletField) {
    if (lattice.boundary == Boundary::Periodic)
      throw std::invalid_argument("Dirichlet model needs an open box");
    std::size_t sites = 1;
    for (int s : lattice.sides) sites *= static_cast<std::size_t>(lattice.boundary == Boundary::Dirichlet ? s - 1 : s);
    if (boundary_weights.size() != sites) throw std::invalid_argument("one boundary weight per site required");
    for (int w : boundary_weights)
      if (w < 0) throw std::invalid_argument("boundary weights must be nonnegative");
  } else if (!boundary_weights.empty()) {
    throw std::invalid_argument("boundary weights only apply to the Dirichlet model");
  }
}

double spin_hilbert_dimension(const SpinModelSpec& spec) {
  double sites = 1.0;
  for (int s : spec.lattice.sides) sites *= spec.lattice.boundary == Boundary::Dirichlet ? s - 1 : s;
  return std::pow(spec.spin.twice + 1.0, sites);
}

int SpinHamiltonian::twice_magnetization(int number) const {
  return 2 * number - spec.spin.twice * static_cast<int>(num_sites());
}

SpinHamiltonian build_spin_hamiltonian(const SpinModelSpec& spec, unsigned workers) {
  spec.validate();
  const double dim = spin_hilbert_dimension(spec);
  if (dim > spec.dimension_budget) throw BudgetExceeded(dim, spec.dimension_budget);

  Lattice lattice(spec.lattice);
  const int twice = spec.spin.twice;
  const double s = spec.spin.value();
  const double j = spec.coupling;
  auto space = std::make_shared<const SectorSpace>(lattice.num_sites(), twice, spec.dimension_budget);
  std::vector<Eigen::MatrixXd> blocks(space->num_sectors());

  parallel_for(
      blocks.size(),
      [&](std::size_t number) {
        const auto& basis = space->sector(static_cast<int>(number));
        auto& b = blocks[number];
        b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
        std::vector<std::uint8_t> occ(lattice.num_sites());
        for (std::size_t i = 0; i < basis.size(); ++i) {
          const auto state = basis.state(i);
          const auto col = static_cast<Eigen::Index>(i);
          double diag = 0.0;
          for (const auto& bond : lattice.bonds()) {
            const int nx = state[bond.first];
            const int ny = state[bond.second];
            const double mx = nx - s;
            const double my = ny - s;
            diag += bond.multiplicity * j * (s * s - mx * my);
            // -(mJ/2)(S⁺_x S⁻_y + S⁻_x S⁺_y)
            const double half = -0.5 * bond.multiplicity * j;
            if (nx < twice && ny > 0) {
              std::copy(state.begin(), state.end(), occ.begin());
              ++occ[bond.first];
              --occ[bond.second];
              b(static_cast<Eigen::Index>(locate(basis, occ)), col) +=
                  half * raise_element(nx, twice) * lower_element(ny, twice);
            }
            if (ny < twice && nx > 0) {
              std::copy(state.begin(), state.end(), occ.begin());
              --occ[bond.first];
              ++occ[bond.second];
              b(static_cast<Eigen::Index>(locate(basis, occ)), col) +=
                  half * raise_element(ny, twice) * lower_element(nx, twice);
            }
          }
          diag += spec.field * static_cast<double>(number);
          for (std::size_t x = 0; x < spec.boundary_weights.size(); ++x)
            diag += j * s * spec.boundary_weights[x] * state[x];
          b(col, col) += diag;
        }
      },
      workers);

  return SpinHamiltonian{spec, std::move(lattice), BlockOperator(space, std::move(blocks))};
}

ThermalResult thermal_trace(const SpinHamiltonian& h, double beta, unsigned workers) {
  return thermal_trace(h, h.op.spectrum(workers), beta);
}

ThermalResult thermal_trace(const SpinHamiltonian& h, const BlockSpectrum& spectrum, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
  ThermalResult r;
  r.beta = beta;
  r.ground_energy = spectrum.min();
  LogSumExp total;
  for (std::size_t n = 0; n < spectrum.eigenvalues.size(); ++n) {
    const auto& e = spectrum.eigenvalues[n];
    LogSumExp block;
    for (Eigen::Index i = 0; i < e.size(); ++i) block.add(-beta * e[i]);
    total.merge(block);
    r.blocks.push_back(BlockTrace{spectrum.numbers[n], h.twice_magnetization(spectrum.numbers[n]),
                                  static_cast<std::size_t>(e.size()), block.value()});
  }
  r.log_z = total.value();
  r.free_energy_per_site =
      beta > 0.0 ? -r.log_z / (beta * static_cast<double>(h.num_sites())) : -std::numeric_limits<double>::infinity();
  return r;
}

BlockOperator spin_pair_form(std::shared_ptr<const SectorSpace> space, Spin spin, const Eigen::MatrixXd& g) {
  const auto sites = static_cast<Eigen::Index>(space->sites());
  if (g.rows() != sites || g.cols() != sites) throw std::invalid_argument("pair form needs a |Λ|×|Λ| matrix");
  const int twice = spin.twice;
  const double s = spin.value();
  std::vector<Eigen::MatrixXd> blocks(space->num_sectors());
  for (std::size_t number = 0; number < blocks.size(); ++number) {
    const auto& basis = space->sector(static_cast<int>(number));
    auto& b = blocks[number];
    b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    std::vector<std::uint8_t> occ(space->sites());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto state = basis.state(i);
      const auto col = static_cast<Eigen::Index>(i);
      for (Eigen::Index x = 0; x < sites; ++x) {
        const int nx = state[static_cast<std::size_t>(x)];
        b(col, col) += g(x, x) * s * (s + 1.0);
        for (Eigen::Index y = 0; y < sites; ++y) {
          if (y == x || g(x, y) == 0.0) continue;
          const int ny = state[static_cast<std::size_t>(y)];
          b(col, col) += g(x, y) * (nx - s) * (ny - s);
          if (nx < twice && ny > 0) {
            std::copy(state.begin(), state.end(), occ.begin());
            ++occ[static_cast<std::size_t>(x)];
            --occ[static_cast<std::size_t>(y)];
            // Over ordered pairs ½(S⁺_x S⁻_y + S⁻_x S⁺_y) collects to S⁺_x S⁻_y.
            b(static_cast<Eigen::Index>(locate(basis, occ)), col) +=
                g(x, y) * raise_element(nx, twice) * lower_element(ny, twice);
          }
        }
      }
    }
  }
  return BlockOperator(std::move(space), std::move(blocks));
}

namespace {

// S⁺_T from block `number` to block `number + 1`.
Eigen::MatrixXd total_raise(const SectorSpace& space, int number, int twice) {
  const auto& from = space.sector(number);
  const auto& to = space.sector(number + 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
  std::vector<std::uint8_t> occ(space.sites());
  for (std::size_t i = 0; i < from.size(); ++i) {
    const auto state = from.state(i);
    for (std::size_t x = 0; x < space.sites(); ++x) {
      if (state[x] >= twice) continue;
      std::copy(state.begin(), state.end(), occ.begin());
      ++occ[x];
      p(static_cast<Eigen::Index>(locate(to, occ)), static_cast<Eigen::Index>(i)) += raise_element(state[x], twice);
    }
  }
  return p;
}

Eigen::MatrixXd casimir_block(const SpinHamiltonian& h, int number) {
  const auto& space = h.op.space();
  const auto dim = static_cast<Eigen::Index>(space.sector(number).size());
  const double m = 0.5 * h.twice_magnetization(number);
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(dim, dim) * (m * (m + 1.0));
  if (number < space.max_number()) {
    const auto p = total_raise(space, number, h.spec.spin.twice);
    c += p.transpose() * p;
  }
  return c;
}

}  // namespace

BlockOperator total_spin_squared(const SpinHamiltonian& h) {
  const auto& space = h.op.space();
  std::vector<Eigen::MatrixXd> blocks(space.num_sectors());
  for (std::size_t n = 0; n < blocks.size(); ++n) blocks[n] = casimir_block(h, static_cast<int>(n));
  return BlockOperator(h.op.shared_space(), std::move(blocks));
}

double casimir_commutator_norm(const SpinHamiltonian& h) {
  const auto c = total_spin_squared(h);
  double worst = 0.0;
  for (std::size_t n = 0; n < c.num_blocks(); ++n) {
    const auto& hb = h.op.block(static_cast<int>(n));
    const auto& cb = c.block(static_cast<int>(n));
    if (hb.size() > 0) worst = std::max(worst, (hb * cb - cb * hb).cwiseAbs().maxCoeff());
  }
  return worst;
}

const MultipletSector* MultipletTable::find(int twice_total, int twice_magnetization) const {
  for (const auto& s : sectors)
    if (s.twice_total == twice_total && s.twice_magnetization == twice_magnetization) return &s;
  return nullptr;
}

std::vector<int> MultipletTable::total_spins() const {
  std::vector<int> out;
  for (const auto& s : sectors)
    if (out.empty() || out.back() != s.twice_total) out.push_back(s.twice_total);
  return out;
}

std::size_t MultipletTable::dimension() const {
  std::size_t n = 0;
  for (const auto& s : sectors) n += s.energies.size();
  return n;
}

double log_partial_trace(const MultipletSector& sector, double beta) {
  LogSumExp acc;
  for (double e : sector.energies) acc.add(-beta * e);
  return acc.value();
}

MultipletTable total_spin_resolve(const SpinHamiltonian& h, unsigned workers) {
  if (!h.spec.rotation_invariant())
    throw std::invalid_argument("total spin resolution needs a rotation-invariant model (periodic/Neumann, h = 0)");
  const auto& space = h.op.space();
  const int parity = (h.spec.spin.twice * static_cast<int>(h.num_sites())) % 2;

  std::vector<std::vector<MultipletSector>> per_block(space.num_sectors());
  std::vector<double> deviation(space.num_sectors(), 0.0);
  parallel_for(
      space.num_sectors(),
      [&](std::size_t n) {
        const int number = static_cast<int>(n);
        const int twice_m = h.twice_magnetization(number);
        const auto c = casimir_block(h, number);
        if (c.rows() == 0) return;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
        if (solver.info() != Eigen::Success) throw std::runtime_error("Casimir eigensolver failed");

        std::map<int, std::vector<Eigen::Index>, std::greater<>> groups;
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
          const double lambda = solver.eigenvalues()[i];
          const double st = 0.5 * (std::sqrt(1.0 + 4.0 * std::max(lambda, 0.0)) - 1.0);
          const int twice_st = static_cast<int>(std::lround(2.0 * st));
          const double sr = 0.5 * twice_st;
          const double dev = std::abs(lambda - sr * (sr + 1.0));
          if (dev > 1e-6) throw std::runtime_error("ambiguous total-spin label: S_T² eigenvalue " + format_double(lambda));
          if ((twice_st - parity) % 2 != 0 || twice_st < std::abs(twice_m))
            throw std::runtime_error("total-spin label inconsistent with S³ sector");
          deviation[n] = std::max(deviation[n], dev);
          groups[twice_st].push_back(i);
        }
        const auto& hb = h.op.block(number);
        for (const auto& [twice_st, idx] : groups) {
          Eigen::MatrixXd v(c.rows(), static_cast<Eigen::Index>(idx.size()));
          for (std::size_t k = 0; k < idx.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(idx[k]);
          Eigen::MatrixXd projected = v.transpose() * hb * v;
          projected = 0.5 * (projected + projected.transpose()).eval();
          const auto e = symmetric_eigenvalues(projected);
          per_block[n].push_back(MultipletSector{twice_st, twice_m, std::vector<double>(e.data(), e.data() + e.size())});
        }
      },
      workers);

  MultipletTable table;
  for (std::size_t n = 0; n < per_block.size(); ++n) {
    table.max_label_deviation = std::max(table.max_label_deviation, deviation[n]);
    for (auto& s : per_block[n]) table.sectors.push_back(std::move(s));
  }
  std::stable_sort(table.sectors.begin(), table.sectors.end(), [](const auto& a, const auto& b) {
    if (a.twice_total != b.twice_total) return a.twice_total > b.twice_total;
    return a.twice_magnetization < b.twice_magnetization;
  });
  return table;
}

double multiplet_trace_spread(const MultipletTable& table, double beta) {
  double worst = 0.0;
  for (int st : table.total_spins()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : table.sectors) {
      if (s.twice_total != st) continue;
      const double t = log_partial_trace(s, beta);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    worst = std::max(worst, std::expm1(hi - lo));
  }
  return worst;
}

double sector_min_energy(const MultipletTable& table, int twice_total) {
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (const auto& s : table.sectors) {
    if (s.twice_total != twice_total || s.energies.empty()) continue;
    found = true;
    best = std::min(best, s.energies.front());
  }
  if (!found) throw std::invalid_argument("total spin " + std::to_string(twice_total) + "/2 does not occur");
  return best;
}

}  // namespace magnonlab
