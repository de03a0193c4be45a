#include "magnonlab/scan.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "magnonlab/bounds_lab.hpp"
#include "magnonlab/hp_boson.hpp"
#include "magnonlab/numeric.hpp"
#include "magnonlab/report_io.hpp"

namespace magnonlab {

using nlohmann::json;

namespace {

std::vector<Spin> spins_from(std::initializer_list<int> twice) {
  std::vector<Spin> out;
  for (int t : twice) out.push_back(Spin{t});
  return out;
}

Spin spin_from_json(const json& j) {
  if (j.is_string()) return Spin::parse(j.get<std::string>());
  if (j.is_number()) return Spin::from_value(j.get<double>());
  throw ConfigError("spin must be a number or a string like \"3/2\"");
}

template <class T>
T get_as(const json& obj, const char* key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be a table");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key '" + where + "." + key + "'");
  }
}

SpinVariant parse_variant(const std::string& name) {
  if (name == "periodic") return SpinVariant::Periodic;
  if (name == "neumann") return SpinVariant::Neumann;
  if (name == "dirichlet") return SpinVariant::DirichletField;
  throw ConfigError("unknown model variant '" + name + "'");
}

std::vector<IdentityCase> identity_cases(const json& arr, const std::string& where) {
  std::vector<IdentityCase> out;
  for (const auto& c : arr) {
    reject_unknown(c, {"dimension", "box_side", "spin"}, where);
    out.push_back(IdentityCase{get_as<int>(c, "dimension", 1), get_as<int>(c, "box_side", 2),
                               spin_from_json(c.value("spin", json(0.5)))});
  }
  return out;
}

json spin_list_json(const std::vector<Spin>& spins) {
  json a = json::array();
  for (const auto& s : spins) a.push_back(s.str());
  return a;
}

}  // namespace

std::vector<Spin> parse_spin_list(const std::string& text) {
  std::vector<Spin> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(Spin::parse(item));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

BoundsMatrix default_bounds_matrix() {
  BoundsMatrix m;
  for (int ell : {2, 3})
    for (int t : {1, 2}) m.identity.push_back({1, ell, Spin{t}});
  m.identity.push_back({3, 2, Spin{1}});

  for (int t : {1, 2, 3, 4, 5, 6}) m.gap_bound.push_back({1, 2, Spin{t}});
  for (int t : {1, 2, 9}) m.gap_bound.push_back({1, 3, Spin{t}});
  m.gap_bound.push_back({3, 2, Spin{1}});

  for (int t : {1, 2, 3, 4}) m.partition_bound.push_back({1, 2, Boundary::Neumann, Spin{t}, std::nullopt});
  for (int t : {1, 2}) m.partition_bound.push_back({1, 3, Boundary::Neumann, Spin{t}, std::nullopt});
  for (int t : {1, 2}) m.partition_bound.push_back({1, 4, Boundary::Periodic, Spin{t}, std::nullopt});
  m.partition_bound.push_back({3, 2, Boundary::Neumann, Spin{1}, std::nullopt});

  for (int t : {1, 2, 3, 4})
    for (double h : {0.0, 0.5}) m.localization.push_back({1, 4, 2, Spin{t}, 1.0, h});

  for (int t : {1, 2, 3, 4}) {
    for (int side : {2, 3, 4}) {
      m.equivalence.push_back({1, side, SpinVariant::Periodic, Spin{t}, 0.0});
      m.equivalence.push_back({1, side, SpinVariant::Neumann, Spin{t}, 0.0});
      m.equivalence.push_back({1, side + 1, SpinVariant::DirichletField, Spin{t}, 0.5});
    }
  }
  m.equivalence.push_back({3, 2, SpinVariant::Periodic, Spin{1}, 0.0});
  m.equivalence.push_back({3, 2, SpinVariant::Neumann, Spin{1}, 0.0});
  m.equivalence.push_back({3, 3, SpinVariant::DirichletField, Spin{1}, 0.5});
  return m;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.spins = spins_from({1, 2, 3, 4, 5, 6, 7, 8});
  c.bounds = default_bounds_matrix();
  return c;
}

void ExperimentConfig::validate() const {
  if (!std::isfinite(coupling) || coupling == 0.0) throw ConfigError("model.coupling must be finite and nonzero");
  if (!(magnon_stiffness > 0.0)) throw ConfigError("model.magnon_stiffness must be positive");
  if (dimension < 1 || dimension > 3) throw ConfigError("scan.dimension must be 1, 2 or 3");
  for (int s : sides)
    if (s < 2) throw ConfigError("scan.sides entries must be >= 2");
  for (double b : beta_tildes)
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("scan.beta_tildes entries must be positive");
  if (!(max_dimension >= 1.0)) throw ConfigError("budget.max_dimension must be >= 1");
  if (!(quadrature_tolerance > 0.0)) throw ConfigError("budget.quadrature_tolerance must be positive");
}

ExperimentConfig merge_config(ExperimentConfig c, const json& j) {
  reject_unknown(j, {"model", "scan", "budget", "run", "output", "bounds"}, "config");
  try {
    if (j.contains("model")) {
      const auto& m = j.at("model");
      reject_unknown(m, {"coupling", "magnon_stiffness"}, "model");
      c.coupling = get_as(m, "coupling", c.coupling);
      c.magnon_stiffness = get_as(m, "magnon_stiffness", c.magnon_stiffness);
    }
    if (j.contains("scan")) {
      const auto& s = j.at("scan");
      reject_unknown(s, {"dimension", "sides", "spins", "beta_tildes"}, "scan");
      c.dimension = get_as(s, "dimension", c.dimension);
      c.sides = get_as(s, "sides", c.sides);
      c.beta_tildes = get_as(s, "beta_tildes", c.beta_tildes);
      if (s.contains("spins")) {
        c.spins.clear();
        for (const auto& v : s.at("spins")) c.spins.push_back(spin_from_json(v));
      }
    }
    if (j.contains("budget")) {
      const auto& b = j.at("budget");
      reject_unknown(b, {"max_dimension", "quadrature_tolerance"}, "budget");
      c.max_dimension = get_as(b, "max_dimension", c.max_dimension);
      c.quadrature_tolerance = get_as(b, "quadrature_tolerance", c.quadrature_tolerance);
    }
    if (j.contains("run")) {
      const auto& r = j.at("run");
      reject_unknown(r, {"workers", "timing"}, "run");
      c.workers = get_as(r, "workers", c.workers);
      c.timing = get_as(r, "timing", c.timing);
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      reject_unknown(o, {"csv", "json"}, "output");
      c.csv_path = get_as(o, "csv", c.csv_path);
      c.json_path = get_as(o, "json", c.json_path);
    }
    if (j.contains("bounds")) {
      const auto& b = j.at("bounds");
      reject_unknown(b, {"identity", "gap_bound", "partition_bound", "localization", "equivalence"}, "bounds");
      if (b.contains("identity")) c.bounds.identity = identity_cases(b.at("identity"), "bounds.identity");
      if (b.contains("gap_bound")) c.bounds.gap_bound = identity_cases(b.at("gap_bound"), "bounds.gap_bound");
      if (b.contains("partition_bound")) {
        c.bounds.partition_bound.clear();
        for (const auto& e : b.at("partition_bound")) {
          reject_unknown(e, {"dimension", "side", "boundary", "spin", "constant"}, "bounds.partition_bound");
          PartitionBoundCase pc{get_as<int>(e, "dimension", 1), get_as<int>(e, "side", 2),
                        parse_boundary(get_as<std::string>(e, "boundary", "neumann")),
                        spin_from_json(e.value("spin", json(0.5))), std::nullopt};
          if (e.contains("constant") && !e.at("constant").is_null()) pc.constant = e.at("constant").get<double>();
          c.bounds.partition_bound.push_back(pc);
        }
      }
      if (b.contains("localization")) {
        c.bounds.localization.clear();
        for (const auto& e : b.at("localization")) {
          reject_unknown(e, {"dimension", "side", "box_side", "spin", "beta_tilde", "field"}, "bounds.localization");
          c.bounds.localization.push_back({get_as<int>(e, "dimension", 1), get_as<int>(e, "side", 4),
                                           get_as<int>(e, "box_side", 2), spin_from_json(e.value("spin", json(0.5))),
                                           get_as<double>(e, "beta_tilde", 1.0), get_as<double>(e, "field", 0.0)});
        }
      }
      if (b.contains("equivalence")) {
        c.bounds.equivalence.clear();
        for (const auto& e : b.at("equivalence")) {
          reject_unknown(e, {"dimension", "side", "variant", "spin", "field"}, "bounds.equivalence");
          c.bounds.equivalence.push_back({get_as<int>(e, "dimension", 1), get_as<int>(e, "side", 2),
                                          parse_variant(get_as<std::string>(e, "variant", "neumann")),
                                          spin_from_json(e.value("spin", json(0.5))), get_as<double>(e, "field", 0.0)});
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return merge_config(std::move(base), j);
}

json config_to_json(const ExperimentConfig& c) {
  json identity = json::array();
  for (const auto& e : c.bounds.identity)
    identity.push_back({{"dimension", e.dimension}, {"box_side", e.box_side}, {"spin", e.spin.str()}});
  json gap_bound = json::array();
  for (const auto& e : c.bounds.gap_bound)
    gap_bound.push_back({{"dimension", e.dimension}, {"box_side", e.box_side}, {"spin", e.spin.str()}});
  json partition_bound = json::array();
  for (const auto& e : c.bounds.partition_bound)
    partition_bound.push_back({{"dimension", e.dimension},
                      {"side", e.side},
                      {"boundary", to_string(e.boundary)},
                      {"spin", e.spin.str()},
                      {"constant", e.constant ? json(*e.constant) : json(nullptr)}});
  json loc = json::array();
  for (const auto& e : c.bounds.localization)
    loc.push_back({{"dimension", e.dimension},
                   {"side", e.side},
                   {"box_side", e.box_side},
                   {"spin", e.spin.str()},
                   {"beta_tilde", e.beta_tilde},
                   {"field", e.field}});
  json eq = json::array();
  for (const auto& e : c.bounds.equivalence)
    eq.push_back({{"dimension", e.dimension},
                  {"side", e.side},
                  {"variant", to_string(e.variant)},
                  {"spin", e.spin.str()},
                  {"field", e.field}});
  return json{
      {"model", {{"coupling", c.coupling}, {"magnon_stiffness", c.magnon_stiffness}}},
      {"scan",
       {{"dimension", c.dimension}, {"sides", c.sides}, {"spins", spin_list_json(c.spins)}, {"beta_tildes", c.beta_tildes}}},
      {"budget", {{"max_dimension", c.max_dimension}, {"quadrature_tolerance", c.quadrature_tolerance}}},
      {"run", {{"workers", c.workers}, {"timing", c.timing}}},
      {"output", {{"csv", c.csv_path}, {"json", c.json_path}}},
      {"bounds",
       {{"identity", identity}, {"gap_bound", gap_bound}, {"partition_bound", partition_bound}, {"localization", loc}, {"equivalence", eq}}}};
}

std::string config_hash(const ExperimentConfig& config) {
  auto j = config_to_json(config);
  j.erase("output");
  j.erase("run");
  return hex64(fnv1a64(j.dump()));
}

std::vector<ConvergenceRow> run_convergence_scan(const ExperimentConfig& config) {
  config.validate();
  std::vector<ConvergenceRow> rows;
  for (int side : config.sides)
    for (double bt : config.beta_tildes)
      for (const Spin& s : config.spins) {
        ConvergenceRow r;
        r.index = rows.size();
        r.dimension = config.dimension;
        r.side = side;
        r.lattice = LatticeSpec::cube(config.dimension, side, Boundary::Periodic).describe();
        r.spin = s;
        r.beta_tilde = bt;
        rows.push_back(std::move(r));
      }

  // Points run in parallel; eigensolves inside a point stay serial.
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        auto& r = rows[i];
        const auto start = std::chrono::steady_clock::now();
        try {
          const auto lattice = LatticeSpec::cube(r.dimension, r.side, Boundary::Periodic);
          auto model = SpinModelSpec::periodic(lattice, r.spin, config.coupling);
          model.dimension_budget = config.max_dimension;
          r.hilbert_dimension = spin_hilbert_dimension(model);
          const auto h = build_spin_hamiltonian(model, 1);
          const auto t = thermal_trace(h, r.beta_tilde / r.spin.value(), 1);
          r.f_exact_per_spin = t.free_energy_per_site / r.spin.value();
          const auto m = magnon_comparison(lattice, r.spin, r.beta_tilde, config.magnon_stiffness * config.coupling,
                                           QuadratureSpec{config.quadrature_tolerance, 7});
          r.magnon_nonzero = m.nonzero;
          r.magnon_finite = m.capped;
          r.bz_integral = m.integral;
          r.bz_error = m.integral_error;
          r.gap_finite = r.f_exact_per_spin - r.magnon_finite;
          r.gap_nonzero = r.f_exact_per_spin - r.magnon_nonzero;
          r.gap_bz = r.f_exact_per_spin - r.bz_integral;
          r.status = "ok";
        } catch (const BudgetExceeded& e) {
          r.status = "skipped";
          r.note = e.what();
        } catch (const std::exception& e) {
          r.status = "error";
          r.note = e.what();
        }
        if (config.timing)
          r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      },
      config.workers);
  return rows;
}

namespace {

const std::vector<std::string> kColumns = {
    "index",        "dimension",      "side",          "lattice",     "spin",     "beta_tilde",
    "status",       "hilbert_dimension", "f_exact_per_S", "magnon_nonzero", "magnon_finite", "bz_integral",
    "bz_error",     "gap_finite",     "gap_nonzero",   "gap_bz",      "wall_seconds", "note"};

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_field(const std::string& s) {
  if (s.empty()) return std::nan("");
  return std::stod(s);
}

}  // namespace

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, const ExperimentConfig& config) {
  os << kCsvSchema << "\n";
  os << "# config_hash: " << config_hash(config) << "\n";
  os << "# config: " << config_to_json(config).dump() << "\n";
  for (std::size_t i = 0; i < kColumns.size(); ++i) os << (i ? "," : "") << kColumns[i];
  os << "\n";
  for (const auto& r : rows) {
    auto num = [&](double x) { return r.ok() ? format_double(x) : std::string(); };
    os << r.index << "," << r.dimension << "," << r.side << "," << r.lattice << "," << r.spin.str() << ","
       << format_double(r.beta_tilde) << "," << r.status << ","
       << (r.hilbert_dimension > 0 ? format_double(r.hilbert_dimension) : "") << "," << num(r.f_exact_per_spin) << ","
       << num(r.magnon_nonzero) << "," << num(r.magnon_finite) << "," << num(r.bz_integral) << ","
       << num(r.bz_error) << "," << num(r.gap_finite) << "," << num(r.gap_nonzero) << "," << num(r.gap_bz) << ","
       << (r.wall_seconds ? format_double(*r.wall_seconds) : "") << "," << csv_quote(r.note) << "\n";
  }
}

std::vector<ConvergenceRow> read_convergence_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvSchema)
    throw std::runtime_error("not a convergence table (missing '" + std::string(kCsvSchema) + "' line)");
  std::vector<std::string> header;
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = csv_split(line);
    if (header.empty()) {
      header = fields;
      if (header != kColumns) throw std::runtime_error("unexpected convergence table columns");
      continue;
    }
    if (fields.size() != header.size()) throw std::runtime_error("malformed convergence row: " + line);
    std::map<std::string, std::string> f;
    for (std::size_t i = 0; i < header.size(); ++i) f[header[i]] = fields[i];
    ConvergenceRow r;
    r.index = static_cast<std::size_t>(std::stoul(f["index"]));
    r.dimension = std::stoi(f["dimension"]);
    r.side = std::stoi(f["side"]);
    r.lattice = f["lattice"];
    r.spin = Spin::parse(f["spin"]);
    r.beta_tilde = std::stod(f["beta_tilde"]);
    r.status = f["status"];
    r.note = f["note"];
    r.hilbert_dimension = f["hilbert_dimension"].empty() ? 0.0 : std::stod(f["hilbert_dimension"]);
    if (r.ok()) {
      r.f_exact_per_spin = parse_field(f["f_exact_per_S"]);
      r.magnon_nonzero = parse_field(f["magnon_nonzero"]);
      r.magnon_finite = parse_field(f["magnon_finite"]);
      r.bz_integral = parse_field(f["bz_integral"]);
      r.bz_error = parse_field(f["bz_error"]);
      r.gap_finite = parse_field(f["gap_finite"]);
      r.gap_nonzero = parse_field(f["gap_nonzero"]);
      r.gap_bz = parse_field(f["gap_bz"]);
    }
    if (!f["wall_seconds"].empty()) r.wall_seconds = std::stod(f["wall_seconds"]);
    rows.push_back(std::move(r));
  }
  return rows;
}

json convergence_json(const std::vector<ConvergenceRow>& rows, const ExperimentConfig& config) {
  json arr = json::array();
  for (const auto& r : rows) {
    json row{{"index", r.index},   {"dimension", r.dimension}, {"side", r.side},   {"lattice", r.lattice},
             {"spin", r.spin.str()}, {"beta_tilde", r.beta_tilde}, {"status", r.status}, {"note", r.note},
             {"hilbert_dimension", r.hilbert_dimension}};
    if (r.ok()) {
      row["f_exact_per_S"] = number(r.f_exact_per_spin);
      row["magnon_nonzero"] = number(r.magnon_nonzero);
      row["magnon_finite"] = number(r.magnon_finite);
      row["bz_integral"] = number(r.bz_integral);
      row["bz_error"] = number(r.bz_error);
      row["gap_finite"] = number(r.gap_finite);
      row["gap_nonzero"] = number(r.gap_nonzero);
      row["gap_bz"] = number(r.gap_bz);
    }
    if (r.wall_seconds) row["wall_seconds"] = *r.wall_seconds;
    arr.push_back(std::move(row));
  }
  return json{{"schema", "magnonlab-convergence v1"},
              {"config", config_to_json(config)},
              {"config_hash", config_hash(config)},
              {"rows", arr}};
}

GapColumn parse_gap_column(const std::string& name) {
  if (name == "gap_finite") return GapColumn::Finite;
  if (name == "gap_nonzero") return GapColumn::NonZero;
  if (name == "gap_bz") return GapColumn::Integral;
  throw ConfigError("unknown gap column '" + name + "' (gap_finite, gap_nonzero, gap_bz)");
}

std::string to_string(GapColumn c) {
  switch (c) {
    case GapColumn::Finite: return "gap_finite";
    case GapColumn::NonZero: return "gap_nonzero";
    case GapColumn::Integral: return "gap_bz";
  }
  return "?";
}

std::vector<std::vector<ConvergenceRow>> group_rows(const std::vector<ConvergenceRow>& rows) {
  std::vector<std::vector<ConvergenceRow>> groups;
  std::map<std::pair<std::string, double>, std::size_t> where;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.lattice, r.beta_tilde);
    auto it = where.find(key);
    if (it == where.end()) {
      it = where.emplace(key, groups.size()).first;
      groups.emplace_back();
    }
    groups[it->second].push_back(r);
  }
  return groups;
}

FitResult fit_error_scaling(const std::vector<ConvergenceRow>& rows, GapColumn column) {
  if (group_rows(rows).size() > 1) throw std::invalid_argument("fit needs rows from one lattice and one beta_tilde");
  FitResult fit;
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    const std::string who = "S=" + r.spin.str();
    if (!r.ok()) {
      fit.excluded.push_back(who + ": row status " + r.status);
      continue;
    }
    const double gap = column == GapColumn::Finite ? r.gap_finite : column == GapColumn::NonZero ? r.gap_nonzero : r.gap_bz;
    if (!(gap > 0.0)) {
      fit.excluded.push_back(who + ": nonpositive gap " + format_double(gap));
      continue;
    }
    xs.push_back(std::log(r.spin.value()));
    ys.push_back(std::log(gap));
  }
  fit.used = xs.size();
  if (xs.size() < 3) throw std::invalid_argument("fit needs at least 3 rows with positive gap");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit needs at least two distinct spins");
  const double slope = sxy / sxx;
  fit.exponent = -slope;
  fit.amplitude = std::exp(my - slope * mx);
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + slope * (xs[i] - mx));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

SuiteResult run_bounds_suite(const ExperimentConfig& config) {
  config.validate();
  const auto& m = config.bounds;
  struct Job {
    std::string kind;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < m.identity.size(); ++i) jobs.push_back({"identity", i});
  for (std::size_t i = 0; i < m.gap_bound.size(); ++i) jobs.push_back({"gap_bound", i});
  for (std::size_t i = 0; i < m.partition_bound.size(); ++i) jobs.push_back({"partition_bound", i});
  for (std::size_t i = 0; i < m.localization.size(); ++i) jobs.push_back({"localization", i});
  for (std::size_t i = 0; i < m.equivalence.size(); ++i) jobs.push_back({"equivalence", i});

  std::vector<json> results(jobs.size());
  std::vector<char> passed(jobs.size(), 0);
  std::vector<std::string> lines(jobs.size());
  const double j = config.coupling;

  parallel_for(
      jobs.size(),
      [&](std::size_t k) {
        const auto& job = jobs[k];
        std::string label;
        try {
          if (job.kind == "identity") {
            const auto& c = m.identity[job.index];
            label = "d=" + std::to_string(c.dimension) + " l=" + std::to_string(c.box_side) + " S=" + c.spin.str();
            const auto r = neumann_fourier_identity_check(c.dimension, c.box_side, c.spin, j);
            results[k] = to_json(r);
            passed[k] = r.pass;
          } else if (job.kind == "gap_bound") {
            const auto& c = m.gap_bound[job.index];
            label = "d=" + std::to_string(c.dimension) + " l=" + std::to_string(c.box_side) + " S=" + c.spin.str();
            const auto r = gap_bound_verify(c.dimension, c.box_side, c.spin, j, 1e-9, 1);
            results[k] = to_json(r);
            passed[k] = r.pass;
            label += " applicable=" + std::to_string(r.applicable_count);
          } else if (job.kind == "partition_bound") {
            const auto& c = m.partition_bound[job.index];
            const auto lat = LatticeSpec::cube(c.dimension, c.side, c.boundary);
            label = lat.describe() + " S=" + c.spin.str();
            const auto r = partition_bound_verify(lat, c.spin, c.constant, j, 1);
            results[k] = to_json(r);
            passed[k] = r.pass;
            label += " C=" + format_double(r.c_used) + " empirical=" + format_double(r.empirical_c);
          } else if (job.kind == "localization") {
            const auto& c = m.localization[job.index];
            label = "d=" + std::to_string(c.dimension) + " L=" + std::to_string(c.side) +
                    " l=" + std::to_string(c.box_side) + " S=" + c.spin.str() + " h=" + format_double(c.field);
            const auto r = localization_check(c.dimension, c.side, c.box_side, c.spin, c.beta_tilde, c.field, j, 1e-10, 1);
            results[k] = to_json(r);
            passed[k] = r.pass;
          } else {
            const auto& c = m.equivalence[job.index];
            SpinModelSpec spec;
            if (c.variant == SpinVariant::Periodic)
              spec = SpinModelSpec::periodic(LatticeSpec::cube(c.dimension, c.side, Boundary::Periodic), c.spin, j, c.field);
            else if (c.variant == SpinVariant::Neumann)
              spec = SpinModelSpec::neumann(LatticeSpec::cube(c.dimension, c.side, Boundary::Neumann), c.spin, j, c.field);
            else
              spec = SpinModelSpec::dirichlet(LatticeSpec::cube(c.dimension, c.side, Boundary::Dirichlet), c.spin, j, c.field);
            label = spec.lattice.describe() + " S=" + c.spin.str();
            const auto r = verify_spin_boson_equivalence(build_spin_hamiltonian(spec, 1), build_hp_hamiltonian(spec, std::nullopt, 1));
            results[k] = to_json(r);
            passed[k] = r.pass;
          }
        } catch (const std::exception& e) {
          results[k] = json{{"error", e.what()}, {"pass", false}};
          passed[k] = 0;
          label += std::string(" error: ") + e.what();
        }
        results[k]["check"] = job.kind;
        lines[k] = std::string(passed[k] ? "PASS " : "FAIL ") + job.kind + " " + label;
      },
      config.workers);

  SuiteResult out;
  json checks = json::object();
  for (const char* kind : {"identity", "gap_bound", "partition_bound", "localization", "equivalence"}) checks[kind] = json::array();
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    checks[jobs[k].kind].push_back(results[k]);
    if (!passed[k]) ++out.failures;
  }
  out.checks_run = jobs.size();
  out.summary = lines;
  if (jobs.empty()) out.warnings.push_back("no checks run: the bounds matrix is empty");
  out.exit_code = out.failures == 0 ? 0 : 1;
  out.report = json{{"config", config_to_json(config)},
                    {"config_hash", config_hash(config)},
                    {"checks", checks},
                    {"checks_run", out.checks_run},
                    {"failures", out.failures},
                    {"warnings", out.warnings},
                    {"pass", out.failures == 0}};
  return out;
}

}  // namespace magnonlab
