#pragma once

// JSON experiment configuration. Every block is optional and falls back to
// the defaults below; unknown keys anywhere are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddwave/analysis.hpp"
#include "ddwave/field.hpp"
#include "ddwave/params.hpp"
#include "ddwave/symbol.hpp"
#include "ddwave/zones.hpp"

namespace ddw {

struct RawParams {
    double a = 1.0;
    double b = 2.0;
    double rho = 0.25;
    double theta = 0.75;
};

struct StudyBlock {
    double s = 0.0;
    DataClass data_class = DataClass::Lm;
    double m = 1.0;
    double gamma = 1.0;
    std::vector<double> times = log_spaced(1e2, 1e4, 25);
    double window_min = 1e2;
    double window_max = 1e4;
    Pipeline pipeline = Pipeline::Polar;
    std::size_t angles = 64;
    double rel_tol = 1e-8;
    /// Allowed deviation of a fitted decay slope from the theoretical rate.
    double rate_tolerance = 0.1;
    /// Slack on refinement exponents and residual orders.
    double refinement_tolerance = 0.15;
};

struct SweepBlock {
    FrequencyRegime regime = FrequencyRegime::Small;
    double r_min = 1e-4;
    double r_max = 1e-2;
    std::size_t n = 40;
};

struct ScanBlock {
    std::size_t samples = 100000;
    double min_real_part_floor = 1e-3;
};

struct PointwiseBlock {
    double r_min = 1e-3;
    double r_max = 1e3;
    std::size_t r_count = 31;
    std::vector<double> times{0.0, 1.0, 10.0, 100.0};
};

struct GevreyBlock {
    double t = 1.0;
    /// Absent: half the exterior gap coefficient of the sample set.
    std::optional<double> c_prime;
    double r_min = 10.0;
    double r_max = 1e4;
    std::size_t samples = 200;
    double bound = 2.0;
};

struct OutputBlock {
    /// Empty: the command line or DDWAVE_OUT decides.
    std::string directory;
    bool csv = true;
    bool json = true;
    bool svg = false;
};

struct ExperimentConfig {
    RawParams raw;
    ModelParams params = validate_params(1.0, 2.0, 0.25, 0.75);
    ZoneConfig zone;
    GridSpec grid;
    InitialDataSpec data{DataKind::Gaussian, 1.0, 1.0, DataTarget::FirstOrder};
    StudyBlock study;
    SweepBlock sweep;
    ScanBlock scan;
    PointwiseBlock pointwise;
    GevreyBlock gevrey;
    OutputBlock output;
    std::uint64_t seed = 42;

    /// Re-validates every block (parameters included) after overrides.
    void finalize();

    StudyConfig study_config() const;
    nlohmann::json to_json() const;
};

/// Throws ValidationError on malformed JSON, unknown keys or invalid values.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

}  // namespace ddw
