#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "magnonlab/bounds_lab.hpp"
#include "magnonlab/hp_boson.hpp"
#include "oracles.hpp"

using namespace magnonlab;
using std::numbers::pi;

TEST_CASE("inequality helper") {
  const auto q = check_at_least("a >= b", 1.0, 1.0 + 1e-12, 1e-10);
  CHECK(q.pass);
  CHECK(q.slack == doctest::Approx(-1e-12));
  CHECK_FALSE(check_at_least("a >= b", 1.0, 2.0).pass);
}

TEST_CASE("Fourier form of the Neumann box") {
  for (auto [d, ell, twice] : {std::tuple{1, 2, 1}, std::tuple{1, 3, 2}, std::tuple{2, 2, 1}}) {
    const auto r = neumann_fourier_identity_check(d, ell, Spin{twice}, 0.7);
    CHECK(r.pass);
    CHECK(r.max_deviation < 1e-12);
    CHECK(r.plancherel_deviation < 1e-12);
    CHECK(r.constant == doctest::Approx(-d * 0.5 * twice * 0.7 * (std::pow(ell, d) - std::pow(ell, d - 1))));
  }
}

TEST_CASE("c0 matches the grid minimum and increases toward pi^2/2") {
  double prev = 0.0;
  for (int ell : {2, 3, 4}) {
    const auto r = gap_bound_verify(1, ell, Spin{1});
    CHECK(r.c0 == doctest::Approx(ell * ell * (1 - std::cos(pi / ell))).epsilon(1e-14));
    CHECK(r.c0 == doctest::Approx(r.c0_closed_form).epsilon(1e-14));
    CHECK(r.c0 > prev);
    CHECK(r.c0 < pi * pi / 2);
    prev = r.c0;
  }
}

TEST_CASE("maximal total spin: zero energy, nonpositive intermediate bound") {
  for (int twice : {1, 2, 3}) {
    const auto r = gap_bound_verify(1, 3, Spin{twice});
    const auto top = std::max_element(r.sectors.begin(), r.sectors.end(),
                                      [](const auto& a, const auto& b) { return a.twice_total < b.twice_total; });
    CHECK(top->twice_total == 3 * twice);
    CHECK(std::abs(top->min_energy) < 1e-12);
    CHECK(top->intermediate.rhs <= 1e-12);
  }
}

TEST_CASE("two spins 1/2: singlet against the intermediate bound") {
  // d = 1, l = 2: c0 = 4, RHS = -SJl + J c0 l^{-2}[S(S+1)l - 0] = -1 + 1.5 = 0.5.
  const auto r = gap_bound_verify(1, 2, Spin{1});
  const auto it = std::find_if(r.sectors.begin(), r.sectors.end(), [](const auto& s) { return s.twice_total == 0; });
  REQUIRE(it != r.sectors.end());
  CHECK(it->min_energy == doctest::Approx(1.0));
  CHECK(it->intermediate.rhs == doctest::Approx(0.5));
  CHECK(it->intermediate.pass);
}

TEST_CASE("intermediate bound on every sector, final bound where applicable") {
  for (auto [d, ell, twice] : {std::tuple{1, 3, 2}, std::tuple{1, 2, 5}, std::tuple{1, 2, 6}, std::tuple{1, 3, 9},
                               std::tuple{3, 2, 1}, std::tuple{2, 2, 2}}) {
    const auto r = gap_bound_verify(d, ell, Spin{twice});
    CHECK(r.intermediate_pass);
    CHECK(r.final_pass);
    CHECK(r.pass);
    for (const auto& s : r.sectors) CHECK(s.applicable == (s.occupation_gap > r.condition_threshold));
  }
  CHECK(gap_bound_verify(1, 2, Spin{5}).applicable_count >= 1);
  CHECK(gap_bound_verify(3, 2, Spin{1}).applicable_count == 0);
}

TEST_CASE("sector minima agree with dense diagonalization") {
  const auto r = gap_bound_verify(1, 3, Spin{2});
  const auto lat = build_lattice(LatticeSpec::cube(1, 3, Boundary::Neumann));
  const auto ev = oracle::eigenvalues(oracle::spin_hamiltonian(lat, 2, 1.0));
  double lowest = 1e300;
  for (const auto& s : r.sectors) lowest = std::min(lowest, s.min_energy);
  CHECK(lowest == doctest::Approx(ev.front()).epsilon(1e-12));
}

TEST_CASE("reversed coupling sign breaks the sector bound") {
  CHECK_FALSE(gap_bound_verify(1, 2, Spin{1}, -1.0).pass);
}

TEST_CASE("interaction bound: low sectors and empirical constant") {
  const auto r = partition_bound_verify(LatticeSpec::cube(1, 2, Boundary::Neumann), Spin{2});
  CHECK(r.low_sector_max < 1e-14);
  CHECK(r.pass);
  CHECK(r.c_used == doctest::Approx(r.c_proof));
  CHECK(r.empirical_c <= r.c_proof);
  // Direct oracle: max over N >= 2 of spectral radius of K_N over N².
  const auto split = build_hp_hamiltonian(SpinModelSpec::neumann(LatticeSpec::cube(1, 2, Boundary::Neumann), Spin{2}));
  double direct = 0.0;
  for (int n = 2; n < static_cast<int>(split.interaction.num_blocks()); ++n) {
    const auto ev = oracle::eigenvalues(split.interaction.block(n));
    direct = std::max(direct, std::max(std::abs(ev.front()), std::abs(ev.back())) / (n * n));
  }
  CHECK(r.empirical_c_direct == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r.empirical_c == doctest::Approx(direct).epsilon(2e-3));
  CHECK(r.empirical_c >= direct * (1 - 1e-12));
}

TEST_CASE("interaction bound fails below the empirical constant") {
  const auto spec = LatticeSpec::cube(1, 3, Boundary::Neumann);
  const auto base = partition_bound_verify(spec, Spin{2});
  const auto r = partition_bound_verify(spec, Spin{2}, 0.5 * base.empirical_c);
  CHECK_FALSE(r.pass);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->min_eigenvalue < 0.0);
  CHECK(r.witness->residual < 1e-8);
  CHECK(partition_bound_verify(spec, Spin{2}, 1.01 * base.empirical_c).pass);
}

TEST_CASE("empirical constant is S-uniform on two sites") {
  std::vector<double> cs;
  for (int twice : {1, 2, 3, 4}) cs.push_back(partition_bound_verify(LatticeSpec::cube(1, 2, Boundary::Neumann), Spin{twice}).empirical_c);
  const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
  CHECK(*hi / *lo < 2.0);
}

TEST_CASE("proof constant") {
  CHECK(partition_bound_proof_constant(build_lattice(LatticeSpec::cube(1, 2, Boundary::Neumann)), 1.0) == doctest::Approx(1.5));
  CHECK(partition_bound_proof_constant(build_lattice(LatticeSpec::cube(3, 3, Boundary::Neumann)), 2.0) == doctest::Approx(18.0));
  CHECK(partition_bound_proof_constant(build_lattice(LatticeSpec::cube(1, 2, Boundary::Periodic)), 1.0) == doctest::Approx(3.0));
}

TEST_CASE("S* choice reduces the rest to (2S+1)^{-l^d}") {
  for (double s : {50.0, 1e3, 1e6})
    for (int d : {1, 3}) {
      const auto r = sstar_schedule(s, 3, 1.0, 2.0, d);
      CHECK(r.log_rest_bound == doctest::Approx(r.log_target).epsilon(1e-12));
      CHECK(r.log_target == doctest::Approx(-std::pow(3, d) * std::log(2 * s + 1)));
      CHECK(r.s_star_ratio == doctest::Approx(1 - 2 * 9 * std::log(2 * s + 1) / (2.0 * s)));
    }
  // Large box at small S: the prescribed S* goes negative.
  CHECK_FALSE(sstar_schedule(2.0, 40, 1.0, 2.0, 3).s_star_nonnegative);
}

TEST_CASE("c from the sector bound feeds the S* choice") {
  const auto p = gap_bound_verify(1, 3, Spin{2});
  const auto r = sstar_schedule(1e4, 3, 1.0, p.c, 1);
  CHECK(std::isfinite(r.s_star));
  CHECK(r.s_star > 0.0);
  CHECK(r.s_star_nonnegative);
}

TEST_CASE("upper schedule") {
  const double e = std::exp(1.0);
  const auto r = upper_bound_schedule(e, 1.0, 3);
  CHECK(r.cutoff == doctest::Approx(std::pow(e, 2.0 / 3)));
  CHECK(r.box_side == doctest::Approx(std::pow(e, 1.0 / 6)));
  CHECK(r.field == doctest::Approx(std::pow(e, 5.0 / 6)));
  double prev = 1e300;
  for (double s : {1e3, 1e6, 1e9, 1e12, 1e20}) {
    const auto u = upper_bound_schedule(s);
    CHECK(u.field / s < prev);
    prev = u.field / s;
  }
  const auto m = upper_bound_schedule(1e6);
  CHECK(m.field_below_spin.pass);
  CHECK_FALSE(m.all_guards);
  const auto first = smallest_valid_spin();
  REQUIRE(first.has_value());
  CHECK(upper_bound_schedule(*first).all_guards);
  CHECK_FALSE(upper_bound_schedule(*first * std::exp(-1e-3)).all_guards);
}

TEST_CASE("localization inequalities on L=4, l=2") {
  for (int twice : {1, 2, 3})
    for (double h : {0.0, 0.3}) {
      const auto r = localization_check(1, 4, 2, Spin{twice}, 1.0, h);
      CHECK(r.pass);
      CHECK(r.neumann.slack >= -1e-10);
      CHECK(r.dirichlet.slack >= -1e-10);
      CHECK(r.boxes == 2.0);
    }
  // Box of two spins 1/2: log Z^N = log(3 + e^{-βJ}), β = β̃/S = 2.
  const auto r = localization_check(1, 4, 2, Spin{1}, 1.0);
  CHECK(r.log_z_neumann == doctest::Approx(std::log(3.0 + std::exp(-2.0))).epsilon(1e-13));
  // Single Dirichlet site with two pinned neighbours: Σ_n e^{-β(2JS + h)n}.
  const auto rh = localization_check(1, 4, 2, Spin{1}, 1.0, 0.3);
  CHECK(rh.log_z_dirichlet == doctest::Approx(std::log(1.0 + std::exp(-2.0 * (1.0 + 0.3)))).epsilon(1e-13));
}

TEST_CASE("magnon comparators") {
  const auto spec = LatticeSpec::cube(1, 4, Boundary::Periodic);
  const auto m = magnon_comparison(spec, Spin{2}, 1.0, 2.0);
  // Nonzero modes: ε = 1, 2, 1 on the 4-ring; stiffness 2.
  const double ref = (2 * std::log(1 - std::exp(-2.0)) + std::log(1 - std::exp(-4.0))) / 4.0;
  CHECK(m.nonzero == doctest::Approx(ref).epsilon(1e-14));
  // Zero mode capped at 2S|Λ| = 8 adds log(9).
  CHECK(m.capped == doctest::Approx(ref - std::log(9.0) / 4.0).epsilon(1e-14));
  CHECK(m.integral == doctest::Approx(magnon_free_energy_bessel_series(MagnonModel{1, 2.0, 1.0}).value).epsilon(1e-8));
}

TEST_CASE("sandwich on the d=1, L=4 chain") {
  SandwichSpec spec;
  spec.spins = {Spin{1}, Spin{2}, Spin{4}, Spin{8}};
  const auto rows = sandwich_report(spec);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    REQUIRE(r.computed);
    CHECK(r.lower.pass);
    CHECK(r.upper.pass);
  }
  CHECK(std::abs(rows.back().f_exact_per_spin - rows.back().magnon.capped) <
        std::abs(rows.front().f_exact_per_spin - rows.front().magnon.capped));
}

TEST_CASE("f/S tends to zero from below at large beta") {
  SandwichSpec spec;
  spec.spins = {Spin{2}};
  double prev = -1e300;
  for (double bt : {1.0, 10.0, 100.0, 1000.0}) {
    spec.beta_tilde = bt;
    const double f = sandwich_report(spec)[0].f_exact_per_spin;
    CHECK(f < 0.0);
    CHECK(f > prev);
    prev = f;
  }
  CHECK(prev > -1e-2);
}

TEST_CASE("sandwich on the 2x2x2 periodic box at S=1/2 against the dense oracle") {
  SandwichSpec spec;
  spec.spins = {Spin{1}};
  spec.dimension = 3;
  spec.side = 2;
  spec.box_side = 2;
  const auto rows = sandwich_report(spec);
  REQUIRE(rows[0].computed);
  const auto lat = build_lattice(LatticeSpec::cube(3, 2, Boundary::Periodic));
  const auto ev = oracle::eigenvalues(oracle::spin_hamiltonian(lat, 1, 1.0));
  REQUIRE(ev.size() == 256);
  const double beta = 2.0;
  CHECK(rows[0].f_exact_per_spin == doctest::Approx(-oracle::log_z(ev, beta) / (beta * 8) / 0.5).epsilon(1e-12));
}

TEST_CASE("sandwich skips points over budget") {
  SandwichSpec spec;
  spec.spins = {Spin{1}, Spin{10}};
  spec.dimension = 3;
  spec.side = 4;
  const auto rows = sandwich_report(spec);
  CHECK_FALSE(rows[1].computed);
  CHECK(rows[1].note.find("skipped") != std::string::npos);
}
