#pragma once

#include "impscat/harness.hpp"

#include "json.hpp"

#include <filesystem>

namespace impscat::io {

using nlohmann::json;

json to_json(const TrigSeries& s);
TrigSeries trig_from_json(const json& j, const std::string& where);

/// {n, L, xhat, yhat, x, y}; complex values as [re, im].  The samples make
/// reloading exact; a document without them is resynthesized from xhat, yhat.
json to_json(const Curve& c);
Curve curve_from_json(const json& j, const std::string& where = "curve");

json to_json(const Impedance& imp);
Impedance impedance_from_json(const json& j, const std::string& where = "impedance");

json to_json(const MeasurementSet& m);
MeasurementSet measurements_from_json(const json& j, const std::string& where = "measurements");

json to_json(const RunRecord& r);
RunRecord record_from_json(const json& j, const std::string& where = "record");

json to_json(const GNConfig& c);
GNConfig gn_config_from_json(const json& j, const std::string& where = "gn");

json to_json(const RLASchedule& s);
RLASchedule schedule_from_json(const json& j, const std::string& where = "schedule");

json to_json(const LandscapeSpec& s);
LandscapeSpec landscape_from_json(const json& j, const std::string& where = "landscape");

json to_json(const ExperimentSpec& s);
ExperimentSpec spec_from_json(const json& j);

json to_json(const LandscapeGrid& g);
LandscapeGrid grid_from_json(const json& j, const std::string& where = "grid");

/// Parses a file; syntax errors become SpecError with the line number
/// (or DataError when data_file is set).
json read_json(const std::filesystem::path& path, bool data_file = false);
/// Writes through a temporary file and rename.
void write_json(const std::filesystem::path& path, const json& j);

ExperimentSpec read_spec(const std::filesystem::path& path);

}  // namespace impscat::io
