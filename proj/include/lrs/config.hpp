#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrs/forward.hpp"
#include "lrs/invert.hpp"
#include "lrs/profile.hpp"
#include "lrs/specfun.hpp"

namespace lrs {

struct GridSpec {
    double a = 0.0;
    double b = 0.0;
    int I = 50;
};

// Where h_min / h_max for the inversion come from:
//   section_sweep: h_max is the width at the measurement section, h_min the sweep estimate
//   sweep:         both from the amplitude sweep
//   profile:       both from the configured profile
//   values:        both given explicitly
struct BoundsSpec {
    std::string source = "section_sweep";
    std::optional<double> h_min;
    std::optional<double> h_max;
    double k_lo = 29.5;
    double k_hi = 33.5;
    int count = 91;
    Backend backend = Backend::airy;
};

struct RunConfig {
    std::string profile_id = "h1";
    std::vector<PolyPiece> custom_pieces;  // used when profile_id is not a built-in
    SourceSpec sources = default_sources(6.0);
    int N = 1;
    std::optional<GridSpec> grid;  // defaults per built-in profile
    int keep = 12;
    double x_meas = 6.0;
    Backend backend = Backend::airy;
    double sigma = 0.0;
    std::uint64_t seed = 1;
    PhiInverse phi = PhiInverse::exact;
    UnwrapMode unwrap = UnwrapMode::increasing;
    double mesh_step = 1e-3;
    PmlForm pml = PmlForm::stretched;
    BoundsSpec bounds;
    AnchorOverride anchors;
    std::vector<double> sigmas;  // noise study; empty means 30 log-spaced in [1.23e-4, 54.6]
};

[[nodiscard]] RunConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::string& path);
[[nodiscard]] nlohmann::json config_to_json(const RunConfig& c);

// Default frequency band for a built-in profile id.
[[nodiscard]] GridSpec default_grid(const std::string& profile_id);

[[nodiscard]] std::vector<double> default_sigmas();

// Checks the config against module preconditions; throws Errc::config naming the field.
void validate(const RunConfig& c);

[[nodiscard]] WidthProfile resolve_profile(const RunConfig& c);
[[nodiscard]] GridSpec resolve_grid_spec(const RunConfig& c);

}  // namespace lrs
