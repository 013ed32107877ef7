#pragma once

#include "io/config.hpp"
#include "verify/suite.hpp"

namespace ttlift::io {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "ttlift.report/1";

nlohmann::ordered_json build_report(const ModelConfig& cfg, const std::vector<std::string>& groups,
                                    const std::vector<verify::Entry>& entries);

nlohmann::ordered_json series_json(const Series& s);
nlohmann::ordered_json matrix_json(const SeriesMatrix& m);

const std::vector<std::string>& lift_targets();
// Throws std::out_of_range for an unknown target, ContextError if the target needs a metric.
nlohmann::ordered_json lift_dump(const big::BigContext& ctx, const ModelConfig& cfg, const std::string& target);

}  // namespace ttlift::io
