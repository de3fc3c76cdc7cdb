// lrstrip: simulate, invert and study width reconstructions from
// locally resonant modal measurements.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lrs/config.hpp"
#include "lrs/error.hpp"
#include "lrs/io.hpp"
#include "lrs/pipeline.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out = "out";
    std::string backend;
    std::string phi_inverse;
    std::string profile;
    std::optional<std::uint64_t> seed;
    std::optional<int> keep;
    std::optional<double> sigma;
    std::string measurements;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON run configuration");
    sub->add_option("--out", f.out, "output directory")->capture_default_str();
    sub->add_option("--backend", f.backend, "forward model")
        ->check(CLI::IsMember({"airy", "simplified", "fd"}));
    sub->add_option("--seed", f.seed, "noise seed");
    sub->add_option("--keep", f.keep, "frequencies kept for the inversion");
    sub->add_option("--phi-inverse", f.phi_inverse, "left inverse of phi")
        ->check(CLI::IsMember({"exact", "paper"}));
    sub->add_option("--profile", f.profile, "built-in profile id (h1, h2, h3, h4, h6)");
    sub->add_option("--sigma", f.sigma, "noise standard deviation");
}

lrs::RunConfig resolve(const Flags& f) {
    lrs::RunConfig c;
    if (!f.config.empty()) {
        c = lrs::load_config(f.config);
    } else if (!f.measurements.empty()) {
        c = lrs::config_from_json(lrs::read_measurements(f.measurements).config);
    }
    if (!f.profile.empty() && f.profile != c.profile_id) {
        c.profile_id = f.profile;
        c.custom_pieces.clear();
        c.grid.reset();
    }
    if (!f.backend.empty()) c.backend = lrs::parse_backend(f.backend);
    if (!f.phi_inverse.empty()) c.phi = lrs::parse_phi_inverse(f.phi_inverse.c_str());
    if (f.seed) c.seed = *f.seed;
    if (f.keep) c.keep = *f.keep;
    if (f.sigma) c.sigma = *f.sigma;
    lrs::validate(c);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Width reconstruction of a slowly varying waveguide from locally resonant data"};
    app.require_subcommand(1);
    Flags f;
    auto* sim = app.add_subcommand("simulate", "write synthetic section measurements");
    auto* inv = app.add_subcommand("invert", "reconstruct h from measurements");
    auto* bnd = app.add_subcommand("bounds", "estimate h_min and h_max from an amplitude sweep");
    auto* noise = app.add_subcommand("noise-study", "reconstruction error against noise level");
    auto* rep = app.add_subcommand("reproduce", "four-profile reconstruction summary");
    for (auto* s : {sim, inv, bnd, noise, rep}) add_common(s, f);
    inv->add_option("--measurements", f.measurements, "measurement CSV written by simulate")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        lrs::RunConfig c = resolve(f);
        if (bnd->parsed() && !f.backend.empty()) c.bounds.backend = c.backend;
        const std::filesystem::path out = f.out;
        if (sim->parsed()) return lrs::cmd_simulate(c, out, std::cout);
        if (inv->parsed()) {
            std::optional<std::filesystem::path> m;
            if (!f.measurements.empty()) m = f.measurements;
            return lrs::cmd_invert(c, m, out, std::cout);
        }
        if (bnd->parsed()) return lrs::cmd_bounds(c, out, std::cout);
        if (noise->parsed()) return lrs::cmd_noise_study(c, out, std::cout);
        if (rep->parsed()) return lrs::cmd_reproduce(c, out, std::cout);
    } catch (const lrs::Error& e) {
        std::cerr << "error [" << lrs::errc_name(e.code()) << "]: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
