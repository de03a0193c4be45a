// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance        run all ten
//   acceptance N      run criterion N only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "magnonlab/bounds_lab.hpp"
#include "magnonlab/hp_boson.hpp"
#include "magnonlab/magnon_gas.hpp"
#include "magnonlab/numeric.hpp"
#include "magnonlab/scan.hpp"
#include "magnonlab/spin_ed.hpp"
#include "oracles.hpp"

using namespace magnonlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

SpinModelSpec model_of(const EquivalenceCase& c) {
  if (c.variant == SpinVariant::Periodic)
    return SpinModelSpec::periodic(LatticeSpec::cube(c.dimension, c.side, Boundary::Periodic), c.spin, 1.0, c.field);
  if (c.variant == SpinVariant::Neumann)
    return SpinModelSpec::neumann(LatticeSpec::cube(c.dimension, c.side, Boundary::Neumann), c.spin, 1.0, c.field);
  return SpinModelSpec::dirichlet(LatticeSpec::cube(c.dimension, c.side, Boundary::Dirichlet), c.spin, 1.0, c.field);
}

Outcome hp_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = default_bounds_matrix();
  bool ok = true, d1 = false, d3 = false;
  double worst = 0.0;
  for (const auto& c : m.equivalence) {
    const auto spec = model_of(c);
    const auto lat = build_lattice(spec.lattice);
    d1 = d1 || (c.dimension == 1 && lat.num_sites() >= 2 && lat.num_sites() <= 4);
    d3 = d3 || (c.dimension == 3 && lat.num_sites() == 8 && c.spin.twice == 1);
    const auto r = verify_spin_boson_equivalence(build_spin_hamiltonian(spec), build_hp_hamiltonian(spec), 1e-10);
    worst = std::max(worst, r.max_entry_deviation);
    ok = ok && r.pass && r.max_entry_deviation <= 1e-10;
  }
  const double t = seconds_since(t0);
  return {ok && d1 && d3 && t <= 60.0,
          std::to_string(m.equivalence.size()) + " instances, max entry deviation " + fmt(worst) + ", " + fmt(t) + " s"};
}

Outcome fourier_identity() {
  bool ok = true;
  double worst = 0.0, worst_p = 0.0;
  for (auto [d, ell, twice] : {std::tuple{1, 2, 1}, std::tuple{1, 2, 2}, std::tuple{1, 3, 1}, std::tuple{1, 3, 2}, std::tuple{3, 2, 1}}) {
    const auto r = neumann_fourier_identity_check(d, ell, Spin{twice}, 1.0, 1e-10);
    worst = std::max(worst, r.max_deviation);
    worst_p = std::max(worst_p, r.plancherel_deviation);
    ok = ok && r.pass && r.max_deviation <= 1e-10 && r.plancherel_deviation <= 1e-10;
  }
  return {ok, "max deviation " + fmt(worst) + ", Plancherel " + fmt(worst_p)};
}

Outcome two_spin_and_infinite_temperature() {
  bool ok = true;
  double worst = 0.0;
  const auto pair = build_spin_hamiltonian(SpinModelSpec::neumann(LatticeSpec::cube(1, 2, Boundary::Neumann), Spin{1}, 1.0));
  for (double beta : {1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double z = std::exp(thermal_trace(pair, beta).log_z);
    const double ref = 3.0 + std::exp(-beta);
    worst = std::max(worst, std::abs(z - ref) / ref);
  }
  ok = worst <= 1e-12;
  std::size_t n = 0;
  for (const auto& c : default_bounds_matrix().equivalence) {
    const auto h = build_spin_hamiltonian(model_of(c));
    const double expect = std::pow(c.spin.twice + 1.0, static_cast<double>(h.num_sites()));
    const double z = std::exp(thermal_trace(h, 0.0).log_z);
    ok = ok && std::llround(z) == std::llround(expect) && static_cast<double>(h.op.dimension()) == expect;
    ++n;
  }
  return {ok, "max relative error " + fmt(worst) + "; beta=0 trace checked on " + std::to_string(n) + " instances"};
}

Outcome multiplet_degeneracy() {
  bool ok = true;
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& c : default_bounds_matrix().equivalence) {
    const auto spec = model_of(c);
    if (!spec.rotation_invariant()) continue;
    const auto t = total_spin_resolve(build_spin_hamiltonian(spec));
    for (double beta : {0.1, 1.0, 4.0}) worst = std::max(worst, multiplet_trace_spread(t, beta));
    ++n;
  }
  ok = n > 0 && worst <= 1e-10;
  return {ok, std::to_string(n) + " rotation-invariant instances, max relative spread " + fmt(worst)};
}

Outcome sector_bound() {
  bool ok = true;
  std::string applicable;
  for (const auto& c : default_bounds_matrix().gap_bound) {
    const auto r = gap_bound_verify(c.dimension, c.box_side, c.spin, 1.0, 1e-9);
    for (const auto& s : r.sectors) ok = ok && s.intermediate.slack >= -1e-9 && (!s.applicable || s.final_bound.pass);
    if (c.dimension == 3) applicable += " d=3 l=" + std::to_string(c.box_side) + " S=" + c.spin.str() + ": " +
                                         std::to_string(r.applicable_count) + " applicable sectors;";
    if (c.dimension == 1 && r.applicable_count > 0)
      applicable += " d=1 l=" + std::to_string(c.box_side) + " S=" + c.spin.str() + ": " + std::to_string(r.applicable_count) + ";";
  }
  return {ok, "final bound applicable on" + applicable};
}

Outcome interaction_bound() {
  bool ok = true;
  for (const auto& c : default_bounds_matrix().partition_bound) {
    const auto r = partition_bound_verify(LatticeSpec::cube(c.dimension, c.side, c.boundary), c.spin, c.constant);
    ok = ok && r.pass && std::isfinite(r.c_used);
  }
  std::vector<double> cs;
  for (int twice : {1, 2, 3, 4}) cs.push_back(partition_bound_verify(LatticeSpec::cube(1, 2, Boundary::Neumann), Spin{twice}).empirical_c);
  const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
  const double ratio = *hi / *lo;
  ok = ok && ratio < 2.0;
  return {ok, "empirical C on 2 sites: " + fmt(cs[0]) + " " + fmt(cs[1]) + " " + fmt(cs[2]) + " " + fmt(cs[3]) +
                  " (ratio " + fmt(ratio) + ")"};
}

Outcome localization() {
  bool ok = true;
  double worst = 1e300;
  for (const auto& c : default_bounds_matrix().localization) {
    if (!(c.dimension == 1 && c.side == 4 && c.box_side == 2)) continue;
    const auto r = localization_check(1, 4, 2, c.spin, c.beta_tilde, c.field, 1.0, 1e-10);
    worst = std::min({worst, r.neumann.slack, r.dirichlet.slack});
    ok = ok && r.neumann.slack >= -1e-10 && r.dirichlet.slack >= -1e-10;
  }
  return {ok, "min slack " + fmt(worst)};
}

Outcome bose_dp() {
  bool ok = true;
  double worst = 0.0;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int modes = 1; modes <= 4; ++modes)
    for (int cap = 0; cap <= 6; ++cap)
      for (int zero = 0; zero < 2; ++zero) {
        std::vector<double> e(static_cast<std::size_t>(modes));
        for (auto& v : e) v = u(rng);
        if (zero) e[0] = 0.0;
        const double beta = 0.2 + u(rng);
        double brute = 0.0;
        oracle::for_each_occupation(modes, cap, cap, [&](const std::vector<int>& n) {
          double en = 0.0;
          for (int k = 0; k < modes; ++k) en += n[static_cast<std::size_t>(k)] * e[static_cast<std::size_t>(k)];
          brute += std::exp(-beta * en);
        });
        const double dp = constrained_bose_log_partition({e, cap, false}, beta);
        worst = std::max(worst, std::abs(std::exp(dp) - brute) / brute);
      }
  ok = worst <= 1e-12;

  double worst_product = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> e(4);
    double ref = 0.0;
    for (auto& v : e) {
      v = 0.1 + u(rng);
      ref -= std::log1p(-std::exp(-v));
    }
    worst_product = std::max(worst_product, std::abs(constrained_bose_log_partition({e, std::nullopt, false}, 1.0) - ref));
  }
  ok = ok && worst_product <= 1e-10;

  int relaxed = 0;
  std::uniform_int_distribution<int> nm(1, 6), cap(0, 40);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> e(static_cast<std::size_t>(nm(rng)));
    for (auto& v : e) v = u(rng) < 0.6 ? 0.0 : u(rng);
    const ConstrainedBoseSpec s{e, cap(rng), false};
    const double beta = 0.1 + u(rng);
    relaxed += constrained_bose_log_partition(s, beta) <= relaxed_bose_log_bound(s, beta) + 1e-12;
  }
  ok = ok && relaxed == 20;
  return {ok, "DP vs enumeration " + fmt(worst) + ", uncapped vs product " + fmt(worst_product) + ", relaxation " +
                  std::to_string(relaxed) + "/20"};
}

Outcome quadrature() {
  bool ok = true;
  double worst = 0.0;
  std::vector<double> integrals;
  for (double b : {0.5, 1.0, 2.0}) {
    const MagnonModel m{3, 1.0, b};
    const auto a = magnon_free_energy_integral(m, QuadratureSpec{1e-10, 7});
    const auto s = magnon_free_energy_bessel_series(m);
    worst = std::max(worst, std::abs(a.value - s.value) / std::abs(s.value));
    integrals.push_back(s.value);
  }
  ok = worst <= 1e-8;

  // ℓ·|gap| on the fine grids must stay within the constant seen on the coarse ones.
  std::string trend;
  for (auto bc : {Boundary::Periodic, Boundary::Neumann}) {
    for (std::size_t i = 0; i < 3; ++i) {
      const double b = i == 0 ? 0.5 : i == 1 ? 1.0 : 2.0;
      double coarse = 0.0, fine = 0.0;
      for (int ell : {4, 8, 16, 32, 64}) {
        const auto grid = momentum_grid(LatticeSpec::cube(3, ell, bc));
        const double gap = std::abs(magnon_free_energy_finite(MagnonModel{3, 1.0, b}, grid, true) - integrals[i]);
        (ell <= 16 ? coarse : fine) = std::max(ell <= 16 ? coarse : fine, ell * gap);
      }
      ok = ok && fine <= coarse;
      if (b == 1.0) trend += " " + to_string(bc) + " C=" + fmt(coarse) + " (l<=16) vs " + fmt(fine) + " (l=32,64);";
    }
  }
  return {ok, "two schemes " + fmt(worst) + ";" + trend};
}

Outcome convergence_scan() {
  const auto t0 = std::chrono::steady_clock::now();
  auto c = default_config();
  c.dimension = 1;
  c.sides = {4};
  c.beta_tildes = {1.0};
  c.coupling = 1.0;
  c.spins = parse_spin_list("1/2,1,3/2,2,5/2,3,7/2,4");
  const auto rows = run_convergence_scan(c);
  bool ok = rows.size() == 8 && std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok(); });
  if (!ok) return {false, "scan rows missing or failed"};
  const double first = std::abs(rows.front().gap_finite), last = std::abs(rows.back().gap_finite);
  const auto fit = fit_error_scaling(rows, GapColumn::Finite);
  const double t = seconds_since(t0);
  ok = last < first && fit.exponent > 0.0 && t <= 600.0;
  std::printf("  info: zero-mode-excluded gap |f/S - nonzero sum| from %s (S=1/2) to %s (S=4)\n",
              fmt(std::abs(rows.front().gap_nonzero)).c_str(), fmt(std::abs(rows.back().gap_nonzero)).c_str());
  return {ok, "|gap| " + fmt(first) + " (S=1/2) -> " + fmt(last) + " (S=4), fitted p = " + fmt(fit.exponent) + ", " +
                  fmt(t) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"HP equivalence on the default matrix", hp_equivalence},
      {"Fourier form of the Neumann box and Plancherel", fourier_identity},
      {"two-spin partition function and beta=0 trace", two_spin_and_infinite_temperature},
      {"multiplet degeneracy across S3_T", multiplet_degeneracy},
      {"total-spin sector lower bounds", sector_bound},
      {"interaction bound constant and S-uniformity", interaction_bound},
      {"localization inequalities", localization},
      {"constrained Bose gas", bose_dp},
      {"quadrature schemes and finite sums", quadrature},
      {"convergence scan", convergence_scan},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
    return 2;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
