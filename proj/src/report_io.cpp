#include "magnonlab/report_io.hpp"

#include <cmath>

namespace magnonlab {

using nlohmann::json;

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json to_json(const Inequality& q) {
  return json{{"name", q.name},   {"lhs", number(q.lhs)},           {"rhs", number(q.rhs)},
              {"slack", number(q.slack)}, {"tolerance", number(q.tolerance)}, {"pass", q.pass}};
}

json to_json(const IdentityReport& r) {
  return json{{"dimension", r.dimension},
              {"box_side", r.box_side},
              {"spin", r.spin.str()},
              {"coupling", number(r.coupling)},
              {"hilbert_dimension", r.hilbert_dimension},
              {"constant", number(r.constant)},
              {"identity", to_json(check_at_least("max |H^N - Fourier form| <= tol", r.tolerance, r.max_deviation))},
              {"plancherel", to_json(check_at_least("max |sum_k S_k.S_k - S(S+1)l^d| <= tol", r.tolerance,
                                                    r.plancherel_deviation))},
              {"pass", r.pass}};
}

json to_json(const GapBoundReport& r) {
  json sectors = json::array();
  for (const auto& s : r.sectors)
    sectors.push_back(json{{"twice_total_spin", s.twice_total},
                           {"min_energy", number(s.min_energy)},
                           {"occupation_gap", number(s.occupation_gap)},
                           {"applicable", s.applicable},
                           {"intermediate", to_json(s.intermediate)},
                           {"final", to_json(s.final_bound)}});
  return json{{"dimension", r.dimension},
              {"box_side", r.box_side},
              {"spin", r.spin.str()},
              {"coupling", number(r.coupling)},
              {"c0", number(r.c0)},
              {"c0_closed_form", number(r.c0_closed_form)},
              {"c", number(r.c)},
              {"condition_threshold", number(r.condition_threshold)},
              {"applicable_sectors", r.applicable_count},
              {"sectors", sectors},
              {"intermediate_pass", r.intermediate_pass},
              {"final_pass", r.final_pass},
              {"pass", r.pass}};
}

json to_json(const PartitionBoundReport& r) {
  json sectors = json::array();
  for (const auto& s : r.sectors)
    sectors.push_back(json{{"number", s.number},
                           {"k_min", number(s.k_min)},
                           {"k_max", number(s.k_max)},
                           {"minus", to_json(s.minus)},
                           {"plus", to_json(s.plus)}});
  json out{{"lattice", r.lattice.describe()},
           {"spin", r.spin.str()},
           {"coupling", number(r.coupling)},
           {"c_used", number(r.c_used)},
           {"c_proof", number(r.c_proof)},
           {"low_sector_max", number(r.low_sector_max)},
           {"empirical_c", number(r.empirical_c)},
           {"empirical_c_direct", number(r.empirical_c_direct)},
           {"sectors", sectors},
           {"pass", r.pass}};
  if (r.witness)
    out["witness"] = json{{"number", r.witness->number},
                          {"operator", r.witness->sign},
                          {"min_eigenvalue", number(r.witness->min_eigenvalue)},
                          {"rayleigh_k", number(r.witness->rayleigh_k)},
                          {"number_squared", number(r.witness->number_squared)},
                          {"residual", number(r.witness->residual)}};
  return out;
}

json to_json(const SStarReport& r) {
  return json{{"spin", number(r.spin)},
              {"box_side", r.box_side},
              {"dimension", r.dimension},
              {"beta_tilde", number(r.beta_tilde)},
              {"c", number(r.c)},
              {"s_star", number(r.s_star)},
              {"s_star_ratio", number(r.s_star_ratio)},
              {"log_rest_bound", number(r.log_rest_bound)},
              {"log_target", number(r.log_target)},
              {"consequence", to_json(r.consequence)},
              {"side_condition", to_json(r.side_condition)},
              {"condition_holds", r.condition_holds},
              {"s_star_nonnegative", r.s_star_nonnegative}};
}

json to_json(const UpperSchedule& r) {
  return json{{"spin", number(r.spin)},
              {"constant", number(r.constant)},
              {"dimension", r.dimension},
              {"cutoff", number(r.cutoff)},
              {"box_side", number(r.box_side)},
              {"field", number(r.field)},
              {"field_below_spin", to_json(r.field_below_spin)},
              {"cutoff_below_spin", to_json(r.cutoff_below_spin)},
              {"box_at_least_two", to_json(r.box_at_least_two)},
              {"tail_condition", to_json(r.tail_condition)},
              {"all_guards", r.all_guards}};
}

json to_json(const LocalizationReport& r) {
  return json{{"dimension", r.dimension},
              {"side", r.side},
              {"box_side", r.box_side},
              {"spin", r.spin.str()},
              {"coupling", number(r.coupling)},
              {"beta_tilde", number(r.beta_tilde)},
              {"beta", number(r.beta)},
              {"field", number(r.field)},
              {"boxes", number(r.boxes)},
              {"log_z", number(r.log_z)},
              {"log_z_neumann", number(r.log_z_neumann)},
              {"log_z_field", number(r.log_z_field)},
              {"log_z_dirichlet", number(r.log_z_dirichlet)},
              {"neumann", to_json(r.neumann)},
              {"dirichlet", to_json(r.dirichlet)},
              {"pass", r.pass}};
}

json to_json(const EquivalenceReport& r) {
  return json{{"dimension", r.dimension},
              {"max_entry_deviation", number(r.max_entry_deviation)},
              {"max_spectrum_deviation", number(r.max_spectrum_deviation)},
              {"worst_number", r.worst_number},
              {"worst_row", r.worst_row},
              {"worst_col", r.worst_col},
              {"pass", r.pass}};
}

json to_json(const ModeCertificate& r) {
  return json{{"spectrum_deviation", number(r.spectrum_deviation)},
              {"diagonalization_deviation", number(r.diagonalization_deviation)},
              {"unitarity_deviation", number(r.unitarity_deviation)},
              {"pass", r.pass}};
}

json to_json(const BoseTailReport& r) {
  return json{{"beta_tilde", number(r.beta_tilde)},
              {"spin", number(r.spin)},
              {"field", number(r.field)},
              {"cutoff", r.cutoff},
              {"box_side", r.box_side},
              {"dimension", r.dimension},
              {"modes", r.modes},
              {"log_exact_tail", number(r.log_exact_tail)},
              {"log_dp_complement", number(r.log_dp_complement)},
              {"log_intermediate", number(r.log_intermediate)},
              {"log_bound", number(r.log_paper_bound)},
              {"truncation_bound", number(r.truncation_bound)},
              {"field_below_spin", r.field_below_spin},
              {"occupation_margin", number(r.occupation_margin)},
              {"bound_applicable", r.bound_applicable},
              {"tail_vs_bound", to_json(check_at_least("log bound >= log tail", r.log_paper_bound, r.log_exact_tail))}};
}

json to_json(const QuadratureResult& r) {
  return json{{"value", number(r.value)},
              {"error_estimate", number(r.error_estimate)},
              {"nodes_per_axis", r.nodes_per_axis},
              {"levels", r.levels},
              {"scheme", r.scheme}};
}

json to_json(const ThermalResult& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks)
    blocks.push_back(json{{"number", b.number},
                          {"twice_magnetization", b.twice_magnetization},
                          {"dimension", b.dimension},
                          {"log_trace", number(b.log_trace)}});
  return json{{"beta", number(r.beta)},
              {"log_z", number(r.log_z)},
              {"free_energy_per_site", number(r.free_energy_per_site)},
              {"ground_energy", number(r.ground_energy)},
              {"blocks", blocks}};
}

json to_json(const MultipletTable& t, double beta) {
  json sectors = json::array();
  for (const auto& s : t.sectors)
    sectors.push_back(json{{"twice_total_spin", s.twice_total},
                           {"twice_magnetization", s.twice_magnetization},
                           {"dimension", s.energies.size()},
                           {"min_energy", number(s.energies.empty() ? 0.0 : s.energies.front())},
                           {"log_partial_trace", number(log_partial_trace(s, beta))}});
  return json{{"max_label_deviation", number(t.max_label_deviation)},
              {"trace_spread", number(multiplet_trace_spread(t, beta))},
              {"sectors", sectors}};
}

json to_json(const SandwichRow& r) {
  json out{{"spin", r.spin.str()}, {"lattice", r.lattice}, {"beta_tilde", number(r.beta_tilde)},
           {"computed", r.computed}, {"note", r.note}};
  if (r.computed) {
    out["f_exact_per_spin"] = number(r.f_exact_per_spin);
    out["magnon_nonzero"] = number(r.magnon.nonzero);
    out["magnon_finite"] = number(r.magnon.capped);
    out["bz_integral"] = number(r.magnon.integral);
    out["neumann_bound"] = number(r.neumann_bound);
    out["dirichlet_bound"] = number(r.dirichlet_bound);
    out["lower"] = to_json(r.lower);
    out["upper"] = to_json(r.upper);
  }
  return out;
}

}  // namespace magnonlab
