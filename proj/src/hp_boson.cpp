#include "magnonlab/hp_boson.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "magnonlab/magnon_gas.hpp"
#include "magnonlab/numeric.hpp"

namespace magnonlab {

namespace {

double root_of(double radicand) {
  if (radicand < 0.0) throw std::logic_error("negative square-root radicand in the boson builder");
  return std::sqrt(radicand);
}

struct PairTerms {
  std::size_t x;
  std::size_t y;
  int multiplicity;
};

// Each unordered bond gives the ordered pairs (x,y) and (y,x).
std::vector<PairTerms> ordered_pairs(const Lattice& lattice) {
  std::vector<PairTerms> out;
  for (const auto& b : lattice.bonds()) {
    out.push_back({b.first, b.second, b.multiplicity});
    out.push_back({b.second, b.first, b.multiplicity});
  }
  return out;
}

}  // namespace

std::string occupation_label(std::span<const std::uint8_t> occupation) {
  std::string s = "|";
  for (std::size_t i = 0; i < occupation.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(occupation[i]);
  }
  return s + ">";
}

BosonOperatorSplit build_hp_hamiltonian(const SpinModelSpec& spec, std::optional<int> max_number, unsigned workers) {
  spec.validate();
  Lattice lattice(spec.lattice);
  const int cap = spec.spin.twice;
  const double two_s = cap;
  const double js = spec.coupling * spec.spin.value();
  const int full = cap * static_cast<int>(lattice.num_sites());
  auto space = std::make_shared<const SectorSpace>(lattice.num_sites(), cap, max_number.value_or(full),
                                                   spec.dimension_budget);
  const auto pairs = ordered_pairs(lattice);

  std::vector<Eigen::MatrixXd> full_blocks(space->num_sectors());
  std::vector<Eigen::MatrixXd> quad_blocks(space->num_sectors());
  parallel_for(
      space->num_sectors(),
      [&](std::size_t number) {
        const auto& basis = space->sector(static_cast<int>(number));
        const auto dim = static_cast<Eigen::Index>(basis.size());
        auto& hb = full_blocks[number];
        auto& qb = quad_blocks[number];
        hb = Eigen::MatrixXd::Zero(dim, dim);
        qb = Eigen::MatrixXd::Zero(dim, dim);
        std::vector<std::uint8_t> occ(lattice.num_sites());
        for (std::size_t i = 0; i < basis.size(); ++i) {
          const auto state = basis.state(i);
          const auto col = static_cast<Eigen::Index>(i);
          for (const auto& p : pairs) {
            const double nx = state[p.x];
            const double ny = state[p.y];
            const double w = js * p.multiplicity;
            hb(col, col) += w * (nx - nx * ny / two_s);
            qb(col, col) += w * nx;
            if (ny == 0) continue;
            // a_y first, then the square roots at the intermediate occupations,
            // then a†_x.
            const double ny_mid = ny - 1.0;
            const double amp_y = std::sqrt(ny);
            const double roots = root_of(1.0 - nx / two_s) * root_of(1.0 - ny_mid / two_s);
            const double amp_x = std::sqrt(nx + 1.0);
            if (state[p.x] >= cap) {
              if (roots != 0.0) throw std::logic_error("hopping out of the truncated space");
              continue;
            }
            std::copy(state.begin(), state.end(), occ.begin());
            ++occ[p.x];
            --occ[p.y];
            const auto target = basis.find(occ);
            if (!target) throw std::logic_error("operator left its conserved-number sector");
            const auto row = static_cast<Eigen::Index>(*target);
            hb(row, col) += -w * amp_x * roots * amp_y;
            qb(row, col) += -w * amp_x * amp_y;
          }
          double extra = spec.field * static_cast<double>(number);
          for (std::size_t x = 0; x < spec.boundary_weights.size(); ++x)
            extra += js * spec.boundary_weights[x] * state[x];
          hb(col, col) += extra;
          qb(col, col) += extra;
        }
      },
      workers);

  BlockOperator h(space, std::move(full_blocks));
  BlockOperator h0(space, std::move(quad_blocks));
  BlockOperator k = h - h0;
  return BosonOperatorSplit{spec, std::move(lattice), std::move(h), std::move(h0), std::move(k)};
}

EquivalenceReport verify_spin_boson_equivalence(const SpinHamiltonian& spin, const BosonOperatorSplit& boson,
                                                double entry_tolerance, double spectrum_tolerance) {
  if (spin.num_sites() != boson.lattice.num_sites() || spin.spec.spin != boson.spec.spin)
    throw std::invalid_argument("spin and boson operators describe different systems");
  EquivalenceReport r;
  const auto& ss = spin.op.space();
  const auto& bs = boson.hamiltonian.space();
  if (bs.num_sectors() != ss.num_sectors())
    throw std::invalid_argument("boson operator lives on a number-capped space");
  const int twice = spin.spec.spin.twice;

  std::vector<std::uint8_t> spin_occ(ss.sites());
  for (int number = 0; number < static_cast<int>(bs.num_sectors()); ++number) {
    // N = M + S|Λ|
    const int twice_m = 2 * number - twice * static_cast<int>(ss.sites());
    const int spin_number = (twice_m + twice * static_cast<int>(ss.sites())) / 2;
    const auto& bbasis = bs.sector(number);
    const auto& sbasis = ss.sector(spin_number);
    if (bbasis.size() != sbasis.size()) throw std::logic_error("sector dimensions differ");
    const auto& hb = boson.hamiltonian.block(number);
    const auto& sb = spin.op.block(spin_number);

    // Boson index -> spin index through the S³ values of every site.
    std::vector<Eigen::Index> map(bbasis.size());
    for (std::size_t i = 0; i < bbasis.size(); ++i) {
      const auto occ = bbasis.state(i);
      for (std::size_t x = 0; x < occ.size(); ++x) {
        const int twice_sz = 2 * occ[x] - twice;
        spin_occ[x] = static_cast<std::uint8_t>((twice_sz + twice) / 2);
      }
      const auto j = sbasis.find(spin_occ);
      if (!j) throw std::logic_error("basis map is not onto");
      map[i] = static_cast<Eigen::Index>(*j);
    }
    for (std::size_t a = 0; a < bbasis.size(); ++a)
      for (std::size_t b = 0; b < bbasis.size(); ++b) {
        const double dev = std::abs(hb(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - sb(map[a], map[b]));
        if (r.worst_number < 0 || dev > r.max_entry_deviation) {
          r.max_entry_deviation = dev;
          r.worst_number = number;
          r.worst_row = occupation_label(bbasis.state(a));
          r.worst_col = occupation_label(bbasis.state(b));
        }
      }
  }
  const auto es = spin.op.spectrum().sorted();
  const auto eb = boson.hamiltonian.spectrum().sorted();
  double scale = 1.0;
  for (double e : es) scale = std::max(scale, std::abs(e));
  for (std::size_t i = 0; i < es.size(); ++i)
    r.max_spectrum_deviation = std::max(r.max_spectrum_deviation, std::abs(es[i] - eb[i]) / scale);
  r.dimension = es.size();
  r.pass = r.max_entry_deviation <= entry_tolerance && r.max_spectrum_deviation <= spectrum_tolerance;
  return r;
}

std::vector<ModeEnergy> quadratic_mode_energies(const SpinModelSpec& spec) {
  spec.validate();
  if (spec.variant == SpinVariant::DirichletField && spec.lattice.boundary != Boundary::Dirichlet)
    throw std::invalid_argument("mode energies need a Dirichlet box for the Dirichlet model");
  const MomentumGrid grid(spec.lattice);
  const double shift = spec.field;
  std::vector<ModeEnergy> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = grid.momentum(i);
    const auto n = grid.label(i);
    out.push_back(ModeEnergy{{k.begin(), k.end()},
                             {n.begin(), n.end()},
                             2.0 * spec.spin.value() * spec.coupling * dispersion(k) + shift});
  }
  return out;
}

Eigen::MatrixXd one_particle_block(const BosonOperatorSplit& split) {
  const auto& space = split.quadratic.space();
  if (space.max_number() < 1) throw std::invalid_argument("space has no one-particle sector");
  const auto& basis = space.sector(1);
  const auto sites = static_cast<Eigen::Index>(space.sites());
  // Sector-1 states |e_x⟩ in lexicographic order run from x = |Λ|-1 down to 0.
  std::vector<Eigen::Index> site_of(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto st = basis.state(i);
    site_of[i] = static_cast<Eigen::Index>(std::find(st.begin(), st.end(), 1) - st.begin());
  }
  Eigen::MatrixXd h1(sites, sites);
  const auto& b = split.quadratic.block(1);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      h1(site_of[i], site_of[j]) = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return h1;
}

ModeCertificate certify_mode_energies(const SpinModelSpec& spec, double tolerance) {
  const auto modes = quadratic_mode_energies(spec);
  const auto split = build_hp_hamiltonian(spec, 1);
  const Eigen::MatrixXd h1 = one_particle_block(split);
  const auto& lattice = split.lattice;
  const MomentumGrid grid(spec.lattice);

  ModeCertificate c;
  std::vector<double> expected;
  for (const auto& m : modes) expected.push_back(m.energy);
  std::sort(expected.begin(), expected.end());
  const auto eig = symmetric_eigenvalues(h1);
  for (Eigen::Index i = 0; i < eig.size(); ++i)
    c.spectrum_deviation = std::max(c.spectrum_deviation, std::abs(eig[i] - expected[static_cast<std::size_t>(i)]));

  const auto n = static_cast<Eigen::Index>(lattice.num_sites());
  Eigen::MatrixXcd phi(n, static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto coords = lattice.coordinates(static_cast<std::size_t>(x));
    for (std::size_t k = 0; k < grid.size(); ++k) phi(x, static_cast<Eigen::Index>(k)) = grid.eigenfunction(k, coords);
  }
  const Eigen::MatrixXcd d = phi.adjoint() * h1.cast<std::complex<double>>() * phi;
  const Eigen::MatrixXcd u = phi.adjoint() * phi;
  for (Eigen::Index a = 0; a < d.rows(); ++a)
    for (Eigen::Index b = 0; b < d.cols(); ++b) {
      const double target = a == b ? modes[static_cast<std::size_t>(a)].energy : 0.0;
      c.diagonalization_deviation = std::max(c.diagonalization_deviation, std::abs(d(a, b) - target));
      c.unitarity_deviation = std::max(c.unitarity_deviation, std::abs(u(a, b) - (a == b ? 1.0 : 0.0)));
    }
  c.pass = c.spectrum_deviation <= tolerance && c.diagonalization_deviation <= tolerance &&
           c.unitarity_deviation <= tolerance;
  return c;
}

}  // namespace magnonlab
