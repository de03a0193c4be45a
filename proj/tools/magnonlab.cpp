// magnonlab command-line driver.
//
// Precedence for every setting: built-in defaults, then --config FILE, then
// explicit flags.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "magnonlab/bounds_lab.hpp"
#include "magnonlab/magnon_gas.hpp"
#include "magnonlab/numeric.hpp"
#include "magnonlab/report_io.hpp"
#include "magnonlab/scan.hpp"
#include "magnonlab/spin_ed.hpp"

using namespace magnonlab;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<double> coupling;
  std::optional<unsigned> workers;
  std::string json_path;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "JSON experiment config");
  app->add_option("--coupling", f.coupling, "exchange coupling J");
  app->add_option("--workers", f.workers, "worker threads (0 = hardware)");
  app->add_option("--json", f.json_path, "write JSON report to this path");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig c = f.config_path.empty() ? default_config() : load_config_file(f.config_path);
  if (f.coupling) c.coupling = *f.coupling;
  if (f.workers) c.workers = *f.workers;
  if (!f.json_path.empty()) c.json_path = f.json_path;
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void emit_json(const std::string& path, const json& j) {
  if (path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_text(path, j.dump(2) + "\n");
}

LatticeSpec lattice_from(int d, int side, const std::string& boundary) {
  return LatticeSpec::cube(d, side, parse_boundary(boundary));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magnonlab: quantum Heisenberg ferromagnet against the free magnon gas"};
  app.require_subcommand(1);

  // scan
  CommonFlags scan_flags;
  std::string scan_spins, scan_csv;
  std::vector<int> scan_sides;
  std::vector<double> scan_betas;
  std::optional<int> scan_dim;
  std::optional<double> scan_budget;
  bool scan_timing = false, scan_empty_spins = false;
  auto* scan = app.add_subcommand("scan", "convergence table of f/S against magnon values");
  add_common(scan, scan_flags);
  scan->add_option("--spins", scan_spins, "comma list, e.g. 1/2,1,3/2");
  scan->add_flag("--no-spins", scan_empty_spins, "run with an empty spin list");
  scan->add_option("--sides", scan_sides, "periodic side lengths");
  scan->add_option("--beta-tildes", scan_betas, "scaled inverse temperatures");
  scan->add_option("--dimension", scan_dim, "lattice dimension");
  scan->add_option("--max-dimension", scan_budget, "Hilbert space budget");
  scan->add_option("--csv", scan_csv, "write CSV to this path (default stdout)");
  scan->add_flag("--timing", scan_timing, "record wall time per row (output no longer reproducible)");

  // bounds
  CommonFlags bounds_flags;
  bool bounds_empty = false, bounds_quiet = false;
  auto* bounds = app.add_subcommand("bounds", "run the verification suite over the instance matrix");
  add_common(bounds, bounds_flags);
  bounds->add_flag("--empty", bounds_empty, "clear the instance matrix");
  bounds->add_flag("--quiet", bounds_quiet, "only print the summary count");

  // magnon
  int mag_dim = 3;
  double mag_beta = 1.0, mag_coupling = 1.0, mag_tol = 1e-10;
  std::optional<int> mag_side;
  std::string mag_boundary = "periodic", mag_json;
  auto* magnon = app.add_subcommand("magnon", "free magnon gas: BZ integral and finite mode sums");
  magnon->add_option("--dimension", mag_dim);
  magnon->add_option("--beta-tilde", mag_beta);
  magnon->add_option("--coupling", mag_coupling, "magnon coupling multiplying the dispersion");
  magnon->add_option("--tolerance", mag_tol, "relative tolerance of the integral");
  magnon->add_option("--side", mag_side, "also sum over a finite lattice of this side");
  magnon->add_option("--boundary", mag_boundary, "periodic or neumann");
  magnon->add_option("--json", mag_json);

  // ed
  int ed_dim = 1, ed_side = 2;
  std::string ed_boundary = "periodic", ed_spin = "1/2", ed_json;
  double ed_beta = 1.0, ed_coupling = 1.0, ed_field = 0.0;
  bool ed_multiplets = false;
  auto* ed = app.add_subcommand("ed", "exact thermodynamics of one instance");
  ed->add_option("--dimension", ed_dim);
  ed->add_option("--side", ed_side, "side L, box side, or Dirichlet period");
  ed->add_option("--boundary", ed_boundary, "periodic, neumann or dirichlet");
  ed->add_option("--spin", ed_spin);
  ed->add_option("--beta-tilde", ed_beta, "beta = beta_tilde / S");
  ed->add_option("--coupling", ed_coupling);
  ed->add_option("--field", ed_field);
  ed->add_flag("--multiplets", ed_multiplets, "resolve total-spin sectors");
  ed->add_option("--json", ed_json);

  // fit
  std::string fit_csv, fit_column = "gap_finite", fit_json;
  auto* fit = app.add_subcommand("fit", "power-law fit of a gap column of a scan CSV");
  fit->add_option("csv", fit_csv, "convergence CSV")->required();
  fit->add_option("--column", fit_column, "gap_finite, gap_nonzero or gap_bz");
  fit->add_option("--json", fit_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*scan) {
      auto c = resolve(scan_flags);
      if (!scan_spins.empty()) c.spins = parse_spin_list(scan_spins);
      if (scan_empty_spins) c.spins.clear();
      if (!scan_sides.empty()) c.sides = scan_sides;
      if (!scan_betas.empty()) c.beta_tildes = scan_betas;
      if (scan_dim) c.dimension = *scan_dim;
      if (scan_budget) c.max_dimension = *scan_budget;
      if (!scan_csv.empty()) c.csv_path = scan_csv;
      if (scan_timing) c.timing = true;
      c.validate();

      const auto rows = run_convergence_scan(c);
      std::ostringstream csv;
      write_convergence_csv(csv, rows, c);
      if (c.csv_path.empty())
        std::cout << csv.str();
      else
        write_text(c.csv_path, csv.str());
      if (!c.json_path.empty()) write_text(c.json_path, convergence_json(rows, c).dump(2) + "\n");
      for (const auto& r : rows)
        if (!r.ok()) std::cerr << r.status << " S=" << r.spin.str() << " " << r.lattice << ": " << r.note << "\n";
      return 0;
    }

    if (*bounds) {
      auto c = resolve(bounds_flags);
      if (bounds_empty) c.bounds = BoundsMatrix{};
      const auto res = run_bounds_suite(c);
      if (!bounds_quiet)
        for (const auto& line : res.summary) std::cout << line << "\n";
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << res.checks_run << " checks, " << res.failures << " failures\n";
      if (!c.json_path.empty()) write_text(c.json_path, res.report.dump(2) + "\n");
      return res.exit_code;
    }

    if (*magnon) {
      MagnonModel model{mag_dim, mag_coupling, mag_beta};
      model.validate();
      json out{{"dimension", mag_dim}, {"beta_tilde", mag_beta}, {"coupling", mag_coupling}};
      try {
        out["integral"] = to_json(magnon_free_energy_integral(model, QuadratureSpec{mag_tol, 7}));
      } catch (const QuadratureError& e) {
        out["integral"] = json{{"error", e.what()},
                               {"best_estimate", number(e.best_estimate())},
                               {"error_bound", number(e.error_bound())}};
      }
      out["bessel_series"] = to_json(magnon_free_energy_bessel_series(model));
      if (mag_side) {
        const auto lattice = lattice_from(mag_dim, *mag_side, mag_boundary);
        const auto grid = momentum_grid(lattice);
        out["lattice"] = lattice.describe();
        out["finite_nonzero_modes"] = number(magnon_free_energy_finite(model, grid, true));
      }
      emit_json(mag_json, out);
      return 0;
    }

    if (*ed) {
      const auto lattice = lattice_from(ed_dim, ed_side, ed_boundary);
      const Spin spin = Spin::parse(ed_spin);
      SpinModelSpec spec = lattice.boundary == Boundary::Periodic ? SpinModelSpec::periodic(lattice, spin, ed_coupling, ed_field)
                           : lattice.boundary == Boundary::Neumann
                               ? SpinModelSpec::neumann(lattice, spin, ed_coupling, ed_field)
                               : SpinModelSpec::dirichlet(lattice, spin, ed_coupling, ed_field);
      const auto h = build_spin_hamiltonian(spec);
      const double beta = ed_beta / spin.value();
      json out{{"lattice", lattice.describe()},
               {"variant", to_string(spec.variant)},
               {"spin", spin.str()},
               {"coupling", ed_coupling},
               {"field", ed_field},
               {"beta_tilde", ed_beta},
               {"hilbert_dimension", spin_hilbert_dimension(spec)},
               {"thermal", to_json(thermal_trace(h, beta))}};
      out["f_per_spin"] = number(out["thermal"]["free_energy_per_site"].get<double>() / spin.value());
      if (ed_multiplets) {
        if (!spec.rotation_invariant()) throw ConfigError("--multiplets needs a rotation-invariant model");
        out["multiplets"] = to_json(total_spin_resolve(h), beta);
      }
      emit_json(ed_json, out);
      return 0;
    }

    if (*fit) {
      std::ifstream in(fit_csv);
      if (!in) throw ConfigError("cannot open '" + fit_csv + "'");
      const auto rows = read_convergence_csv(in);
      const auto column = parse_gap_column(fit_column);
      json fits = json::array();
      int failures = 0;
      for (const auto& group : group_rows(rows)) {
        json g{{"lattice", group.front().lattice}, {"beta_tilde", group.front().beta_tilde}, {"column", to_string(column)}};
        try {
          const auto r = fit_error_scaling(group, column);
          g["exponent"] = r.exponent;
          g["amplitude"] = r.amplitude;
          g["residual"] = r.residual;
          g["used"] = r.used;
          g["excluded"] = r.excluded;
          g["label"] = r.label;
        } catch (const std::invalid_argument& e) {
          g["error"] = e.what();
          ++failures;
        }
        fits.push_back(g);
      }
      emit_json(fit_json, json{{"fits", fits}});
      return failures == 0 ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
