#pragma once

#include <json.hpp>

#include "magnonlab/bounds_lab.hpp"
#include "magnonlab/hp_boson.hpp"
#include "magnonlab/magnon_gas.hpp"
#include "magnonlab/spin_ed.hpp"

namespace magnonlab {

/// Non-finite doubles become strings ("inf", "-inf", "nan").
nlohmann::json number(double x);

nlohmann::json to_json(const Inequality& q);
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const GapBoundReport& r);
nlohmann::json to_json(const PartitionBoundReport& r);
nlohmann::json to_json(const SStarReport& r);
nlohmann::json to_json(const UpperSchedule& r);
nlohmann::json to_json(const LocalizationReport& r);
nlohmann::json to_json(const EquivalenceReport& r);
nlohmann::json to_json(const ModeCertificate& r);
nlohmann::json to_json(const BoseTailReport& r);
nlohmann::json to_json(const QuadratureResult& r);
nlohmann::json to_json(const ThermalResult& r);
nlohmann::json to_json(const MultipletTable& t, double beta);
nlohmann::json to_json(const SandwichRow& r);

}  // namespace magnonlab
