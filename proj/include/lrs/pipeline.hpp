#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrs/bounds.hpp"
#include "lrs/config.hpp"
#include "lrs/forward.hpp"
#include "lrs/invert.hpp"

namespace lrs {

struct Bounds {
    double h_min = 0.0;
    double h_max = 0.0;
    std::string source;
    std::optional<SweepResult> sweep;
};

[[nodiscard]] Bounds resolve_bounds(const RunConfig& c, const WidthProfile& p);

[[nodiscard]] FrequencyGrid resolve_grid(const RunConfig& c, const WidthProfile& p);
[[nodiscard]] SynthOptions synth_options(const RunConfig& c, const WidthProfile& p);

// Clean data from the configured backend, with noise added when sigma > 0.
[[nodiscard]] ModalMeasurementSet simulate(const RunConfig& c, const WidthProfile& p);

struct InversionOptions {
    PhiInverse phi = PhiInverse::exact;
    UnwrapMode unwrap = UnwrapMode::increasing;
    int keep = 12;
    double h_min = 0.0;
    double h_max = 0.0;
    AnchorOverride anchors;
};

[[nodiscard]] InversionOptions inversion_options(const RunConfig& c, const Bounds& b);

struct InversionResult {
    std::vector<cplx> v;
    std::vector<double> raw;
    std::vector<double> t;
    int ell = 0;
    std::vector<double> d;
    std::vector<int> kept;
    std::vector<double> k_kept;
    std::vector<double> d_kept;
    TriangularSystem sys;
    double condition = 0.0;
    StripSolution strip;
    Reconstruction rec;
    std::optional<double> e_inf;
    bool partial_recovery = false;
    std::vector<std::string> warnings;
};

// normalize -> phi inverse -> unwrap -> ell -> thin -> assemble -> solve ->
// reconstruct. Errors carry the failing stage name.
[[nodiscard]] InversionResult invert_measurements(const ModalMeasurementSet& m,
                                                  const SourceSpec& src,
                                                  const InversionOptions& opt,
                                                  const WidthProfile* truth = nullptr);

[[nodiscard]] nlohmann::json report_json(const RunConfig& c, const ModalMeasurementSet& m,
                                         const Bounds& b, const InversionResult& r);

struct NoiseRow {
    double sigma = 0.0;
    double e_inf = 0.0;  // NaN when the inversion failed
    std::string error;
};

[[nodiscard]] std::vector<NoiseRow> noise_study(const RunConfig& c);

struct ReproduceRow {
    std::string profile;
    double e_inf = 0.0;
    double target = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string error;
};

// Runs h1..h4 on their default grids; writes per-profile reports under `out`
// when given.
[[nodiscard]] std::vector<ReproduceRow> reproduce(const RunConfig& base,
                                                  const std::filesystem::path* out = nullptr);

int cmd_simulate(const RunConfig& c, const std::filesystem::path& out, std::ostream& log);
int cmd_invert(const RunConfig& c, const std::optional<std::filesystem::path>& measurements,
               const std::filesystem::path& out, std::ostream& log);
int cmd_bounds(const RunConfig& c, const std::filesystem::path& out, std::ostream& log);
int cmd_noise_study(const RunConfig& c, const std::filesystem::path& out, std::ostream& log);
int cmd_reproduce(const RunConfig& c, const std::filesystem::path& out, std::ostream& log);

}  // namespace lrs
