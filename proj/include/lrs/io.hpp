#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrs/forward.hpp"

namespace lrs {

// Shortest round-trip decimal form, '.' separator regardless of locale.
[[nodiscard]] std::string fmt_double(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Returns header and rows; blank lines are skipped.
[[nodiscard]] std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
[[nodiscard]] nlohmann::json read_json(const std::filesystem::path& path);

// CSV (k, re, im) plus a sidecar JSON next to it (same stem, .json) holding
// grid metadata, x_meas, N, provenance and the resolved config.
void write_measurements(const std::filesystem::path& csv, const ModalMeasurementSet& m,
                        const nlohmann::json& config);

struct LoadedMeasurements {
    ModalMeasurementSet set;
    nlohmann::json config;
};

[[nodiscard]] LoadedMeasurements read_measurements(const std::filesystem::path& csv);

}  // namespace lrs
