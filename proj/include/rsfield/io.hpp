#ifndef RSFIELD_IO_HPP
#define RSFIELD_IO_HPP

#include <string>

#include "rsfield/fields.hpp"
#include "rsfield/ou.hpp"
#include "rsfield/report.hpp"
#include "rsfield/rsint.hpp"

#include <json.hpp>

namespace rsfield {

/// Writes content to path via a temporary file and rename.
void atomic_write(const std::string& path, const std::string& content);

/// Deterministic shortest-round-trip formatting used in every numeric output.
std::string format_double(double x);

/// GridField persistence: <base>.csv holds N coordinate columns and a value
/// column, row-major over the tensor grid; <base>.json records the axes.
void save_grid_field(const std::string& base_path, const GridField& field);
GridField load_grid_field(const std::string& base_path);

std::string grid_field_csv(const GridField& field);

nlohmann::json to_json(const IntegralResult& r);
nlohmann::json to_json(const TestReport& r);
nlohmann::json axes_json(const GridPartition& P);
GridPartition partition_from_json(const nlohmann::json& j);

std::string report_table(const TestReport& r);

/// Ensemble persistence: field_<k>.csv per replication plus manifest.json
/// with driver, parameters, seed, M and the axes.
void save_ensemble(const std::string& dir, const FieldEnsemble& E);
FieldEnsemble load_ensemble(const std::string& dir);

/// TransformedField persistence: GridField files plus a provenance block.
void save_transformed(const std::string& base_path, const TransformedField& field);

}  // namespace rsfield

#endif
