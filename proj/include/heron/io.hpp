#pragma once

// File formats: complex arrays as {"dim": d, "entries": [[re, im], ...]}
// (row-major for matrices), herald configs/outcomes, Wigner grids as CSV
// ("x,p,w") and JSON, quadrature records as CSV ("theta,x") and JSON.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "heron/fock.hpp"
#include "heron/herald.hpp"
#include "heron/synth.hpp"
#include "heron/tomo.hpp"
#include "heron/wigner.hpp"

namespace heron::io {

using nlohmann::json;

json to_json(const FockVector& v);
json to_json(const DensityOperator& rho);
FockVector fock_from_json(const json& j);
DensityOperator density_from_json(const json& j);

json to_json(const HeraldConfig& config);
HeraldConfig herald_config_from_json(const json& j);

// Density-operator schema plus the herald probability and diagnostics.
json to_json(const HeraldOutcome& outcome);

json to_json(const DisplacementRecipe& recipe);
DisplacementRecipe recipe_from_json(const json& j);

json to_json(const WignerGrid& grid);
void write_grid_csv(const WignerGrid& grid, std::ostream& out);

json records_to_json(const std::vector<QuadratureRecord>& records);
std::vector<QuadratureRecord> records_from_json(const json& j);
void write_records_csv(const std::vector<QuadratureRecord>& records,
                       std::ostream& out);
std::vector<QuadratureRecord> read_records_csv(std::istream& in);

json to_json(const TomoResult& result);    // diagnostics only, no state
json to_json(const MetricsReport& report);

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

// Minimal structural validator for the shipped schema files: supports
// type, properties, required, items, minItems, maxItems,
// additionalProperties. Returns human-readable problems, empty when valid.
std::vector<std::string> validate_schema(const json& doc, const json& schema);

}  // namespace heron::io
