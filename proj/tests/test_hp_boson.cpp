#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "magnonlab/hp_boson.hpp"
#include "oracles.hpp"

using namespace magnonlab;

namespace {

SpinModelSpec make(const std::string& variant, int d, int side, int twice, double j = 1.0, double h = 0.0) {
  if (variant == "periodic") return SpinModelSpec::periodic(LatticeSpec::cube(d, side, Boundary::Periodic), Spin{twice}, j, h);
  if (variant == "neumann") return SpinModelSpec::neumann(LatticeSpec::cube(d, side, Boundary::Neumann), Spin{twice}, j, h);
  return SpinModelSpec::dirichlet(LatticeSpec::cube(d, side, Boundary::Dirichlet), Spin{twice}, j, h);
}

std::vector<double> sorted_energies(const std::vector<ModeEnergy>& modes) {
  std::vector<double> e;
  for (const auto& m : modes) e.push_back(m.energy);
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_CASE("dense boson oracle equals dense spin oracle") {
  for (int twice : {1, 2, 3}) {
    const auto lat = build_lattice(LatticeSpec::cube(1, 3, Boundary::Dirichlet));
    const auto a = oracle::spin_hamiltonian(lat, twice, 0.8, 0.3, lat.boundary_weights());
    const auto b = oracle::hp_hamiltonian(lat, twice, 0.8, 0.3, lat.boundary_weights());
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("boson builder equals the dense ordered-pair oracle") {
  for (const char* v : {"periodic", "neumann", "dirichlet"})
    for (int twice : {1, 2, 3}) {
      const auto spec = make(v, 1, std::string(v) == "dirichlet" ? 4 : 3, twice, 1.1, 0.2);
      const auto split = build_hp_hamiltonian(spec);
      const auto ref = oracle::hp_hamiltonian(split.lattice, twice, 1.1, 0.2, split.lattice.boundary_weights());
      CHECK((oracle::dense(split.hamiltonian) - ref).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((oracle::dense(split.quadratic + split.interaction) - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("hop element on two sites, S = 1") {
  // ⟨0,2| H |1,1⟩ = -JS · √1 · 1 · √(1 - 1/2) · √2 = -J.
  const auto split = build_hp_hamiltonian(make("neumann", 1, 2, 2, 1.0));
  const auto& basis = split.hamiltonian.space().sector(2);
  const std::vector<std::uint8_t> from = {1, 1}, to = {0, 2};
  const auto i = basis.find(to), k = basis.find(from);
  REQUIRE(i.has_value());
  REQUIRE(k.has_value());
  CHECK(split.hamiltonian.block(2)(static_cast<int>(*i), static_cast<int>(*k)) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("vacuum is annihilated and K vanishes below two particles") {
  for (const char* v : {"periodic", "neumann"}) {
    const auto split = build_hp_hamiltonian(make(v, 2, 2, 3));
    CHECK(split.hamiltonian.block(0)(0, 0) == 0.0);
    CHECK(split.interaction.block(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(split.interaction.block(1).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((split.hamiltonian.block(1) - split.quadratic.block(1)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("spin/boson equivalence examples") {
  for (int twice : {1, 3}) {
    const auto spec = make("neumann", 1, 2, twice);
    const auto r = verify_spin_boson_equivalence(build_spin_hamiltonian(spec), build_hp_hamiltonian(spec));
    CHECK(r.pass);
    CHECK(r.max_entry_deviation < 1e-12);
    CHECK(r.max_spectrum_deviation < 1e-12);
    CHECK(r.dimension == static_cast<std::size_t>((twice + 1) * (twice + 1)));
  }
  for (const char* v : {"periodic", "neumann", "dirichlet"})
    for (int twice : {1, 2, 4}) {
      const auto spec = make(v, 2, 3, twice, 1.0, 0.25);
      if (spin_hilbert_dimension(spec) > 1e4) continue;
      CHECK(verify_spin_boson_equivalence(build_spin_hamiltonian(spec), build_hp_hamiltonian(spec)).pass);
    }
}

TEST_CASE("block N of the boson operator is the S3 sector M = N - S|L|") {
  const auto spec = make("periodic", 1, 3, 2);
  const auto spin = build_spin_hamiltonian(spec);
  const auto boson = build_hp_hamiltonian(spec);
  REQUIRE(spin.op.num_blocks() == boson.hamiltonian.num_blocks());
  for (int n = 0; n < static_cast<int>(spin.op.num_blocks()); ++n) {
    CHECK(spin.twice_magnetization(n) == 2 * n - 2 * 3);
    CHECK(spin.op.block(n).rows() == boson.hamiltonian.block(n).rows());
  }
}

TEST_CASE("a corrupted boson operator is caught") {
  const auto spec = make("neumann", 1, 3, 2);
  auto boson = build_hp_hamiltonian(spec);
  auto blocks = boson.hamiltonian.blocks();
  blocks[2](0, 1) += 1e-6;
  blocks[2](1, 0) += 1e-6;
  boson.hamiltonian = BlockOperator(boson.hamiltonian.shared_space(), blocks);
  const auto r = verify_spin_boson_equivalence(build_spin_hamiltonian(spec), boson);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_number == 2);
  CHECK(r.max_entry_deviation == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("mode energies: examples against the one-particle block") {
  const double j = 1.0;
  // Periodic zero mode.
  const auto per = quadratic_mode_energies(make("periodic", 1, 4, 2, j));
  CHECK(sorted_energies(per).front() == doctest::Approx(0.0));

  // Neumann l = 2, S = 1/2: block JS[[1,-1],[-1,1]] has eigenvalues {0, 2SJ}.
  const auto neu = sorted_energies(quadratic_mode_energies(make("neumann", 1, 2, 1, j)));
  REQUIRE(neu.size() == 2);
  CHECK(std::abs(neu[0]) < 1e-14);
  CHECK(neu[1] == doctest::Approx(2 * 0.5 * j));

  // Dirichlet l = 3: two interior sites, each with one pinned neighbour;
  // JS[[2,-1],[-1,2]] + h has eigenvalues {JS + h, 3JS + h}.
  const double s = 1.5, h = 0.4;
  const auto dir = sorted_energies(quadratic_mode_energies(make("dirichlet", 1, 3, 3, j, h)));
  REQUIRE(dir.size() == 2);
  CHECK(dir[0] == doctest::Approx(j * s + h));
  CHECK(dir[1] == doctest::Approx(3 * j * s + h));

  const auto split = build_hp_hamiltonian(make("dirichlet", 1, 3, 3, j, h));
  const auto block = oracle::eigenvalues(one_particle_block(split));
  CHECK(block[0] == doctest::Approx(dir[0]));
  CHECK(block[1] == doctest::Approx(dir[1]));
}

TEST_CASE("mode certificates on every family") {
  for (const char* v : {"periodic", "neumann", "dirichlet"})
    for (int d = 1; d <= 3; ++d)
      for (int side : {2, 3, 4}) {
        if (std::string(v) == "dirichlet" && side == 2 && d > 1) continue;
        const auto c = certify_mode_energies(make(v, d, side, 2, 0.9, 0.1));
        CHECK(c.pass);
        CHECK(c.spectrum_deviation < 1e-10);
        CHECK(c.diagonalization_deviation < 1e-10);
        CHECK(c.unitarity_deviation < 1e-10);
      }
}

TEST_CASE("particle-number cap restricts the space") {
  const auto spec = make("periodic", 1, 4, 2);
  const auto split = build_hp_hamiltonian(spec, 2);
  CHECK(split.hamiltonian.num_blocks() == 3);
  const auto full = build_hp_hamiltonian(spec);
  for (int n = 0; n <= 2; ++n) CHECK((split.hamiltonian.block(n) - full.hamiltonian.block(n)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(occupation_label(std::vector<std::uint8_t>{0, 2, 1}) == "|0,2,1>");
}
