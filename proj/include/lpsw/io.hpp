#pragma once

#include <string>

#include <json.hpp>

#include "lpsw/lab.hpp"
#include "lpsw/swe.hpp"

namespace lpsw {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Field container: little-endian "BSWF" magic, u32 n, f64 length,
// u32 components, then components * n^2 row-major f64 sample planes.
void write_field(const Field& f, const std::string& path, bool force = false);
Field read_field(const std::string& path);

// Plain-text companion for small grids: one "ix,iy,c0[,c1,...]" row per
// grid point after a header row.
void write_field_csv(const Field& f, const std::string& path, bool force = false);
Field read_field_csv(const std::string& path);

json to_json(const NormReport& r);
json to_json(const TrajectoryNorm& r);
json to_json(const EstimateReport& r);
json to_json(const Calibration& c);
json to_json(const IterationBudget& b);
json to_json(const IterationReport& r);
json to_json(const DirectResult& r);
json to_json(const DivergenceReport& r);
json to_json(const GlobalReport& r);
json to_json(const TransportEstimateReport& r);

Calibration calibration_from_json(const json& j);
Calibration load_calibration(const std::string& path);
void save_calibration(const Calibration& cal, const std::string& path, bool force = false);

// Reports are wrapped as {schema_version, kind, metadata{timestamp,...},
// body}, written atomically (temp file + rename). Existing files are
// never overwritten without force.
void write_report(const json& body, const std::string& kind, const std::string& path,
                  bool force = false);
json load_json(const std::string& path);

// Canonical serialisation with the volatile metadata (timestamp) removed;
// reports from identical runs compare byte-identical through this.
std::string canonical_dump(json report);

// CSV writer; rows of doubles under a comma-separated header line.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows, bool force = false);

// Serialise infinities as the string "inf" (JSON has no literal for it).
json encode_extended(double v);
double decode_extended(const json& v);

}  // namespace lpsw
