#pragma once

// Report emission: RFC-4180 CSV with 17 significant digits, JSON documents
// and log-log SVG plots drawn from the same series.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddwave/analysis.hpp"

namespace ddw {

/// Shortest round-trip-safe text for a double (17 significant digits, '.' separator).
std::string format_number(double value);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_escape(const std::string& field);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Two columns: t, norm.
void write_series_csv(const std::filesystem::path& path, const std::vector<NormPoint>& series);

/// Pretty-printed with sorted keys so identical inputs give identical bytes.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

struct PlotSeries {
    std::string label;
    std::vector<NormPoint> points;
};

/// Log-log line plot; nonpositive values are skipped.
std::string loglog_svg(const std::string& title, const std::vector<PlotSeries>& series);
void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::vector<PlotSeries>& series);

nlohmann::json to_json(const DecayFit& fit);
nlohmann::json to_json(const std::vector<NormPoint>& series);

}  // namespace ddw
