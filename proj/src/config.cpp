#include "lrs/config.hpp"

#include <cmath>
#include <fstream>

#include "lrs/error.hpp"

namespace lrs {
namespace {

using nlohmann::json;

bool is_builtin(const std::string& id) {
    return id == "h1" || id == "h2" || id == "h3" || id == "h4" || id == "h6";
}

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
    throw Error(Errc::config, "config field '" + field + "': " + msg);
}

template <class T>
T get(const json& j, const char* key, const std::string& path, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        bad(path + key, e.what());
    }
}

std::optional<double> get_opt(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) bad(path + key, "expected a number");
    return j.at(key).get<double>();
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

GridSpec default_grid(const std::string& id) {
    if (id == "h1") return {30.92, 31.93, 50};
    if (id == "h2") return {30.9, 31.95, 50};
    if (id == "h3" || id == "h4") return {31.01, 31.83, 50};
    if (id == "h6") return {31.42, 32.1, 50};
    throw Error(Errc::config, "config field 'grid': required for profile '" + id + "'");
}

std::vector<double> default_sigmas() {
    std::vector<double> s(30);
    const double a = std::log(1.23e-4), b = std::log(54.6);
    for (int i = 0; i < 30; ++i) s[i] = std::exp(a + (b - a) * i / 29.0);
    s.front() = 1.23e-4;
    s.back() = 54.6;
    return s;
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) bad("<root>", "expected a JSON object");
    RunConfig c;
    if (j.contains("profile")) {
        const json& p = j.at("profile");
        if (p.is_string()) {
            c.profile_id = p.get<std::string>();
        } else if (p.is_object()) {
            c.profile_id = get<std::string>(p, "id", "profile.", "custom");
            if (!p.contains("pieces") || !p.at("pieces").is_array())
                bad("profile.pieces", "expected an array of {x0, x1, coeffs}");
            for (const auto& pc : p.at("pieces")) {
                PolyPiece piece;
                piece.x0 = get<double>(pc, "x0", "profile.pieces[].", 0.0);
                piece.x1 = get<double>(pc, "x1", "profile.pieces[].", 0.0);
                piece.coeffs = get<std::vector<double>>(pc, "coeffs", "profile.pieces[].", {});
                c.custom_pieces.push_back(piece);
            }
        } else {
            bad("profile", "expected an id string or a piecewise object");
        }
    }
    if (j.contains("sources")) {
        const json& s = j.at("sources");
        if (!s.is_object()) bad("sources", "expected an object");
        c.sources = SourceSpec{};
        for (const auto& f : s.value("interior", json::array()))
            c.sources.interior.push_back(
                {get<double>(f, "x", "sources.interior[].", 0.0),
                 get<std::vector<double>>(f, "fy", "sources.interior[].", {})});
        for (const auto& b : s.value("top", json::array()))
            c.sources.top.push_back({get<double>(b, "x", "sources.top[].", 0.0),
                                     get<double>(b, "amplitude", "sources.top[].", 1.0)});
        for (const auto& b : s.value("bot", json::array()))
            c.sources.bot.push_back({get<double>(b, "x", "sources.bot[].", 0.0),
                                     get<double>(b, "amplitude", "sources.bot[].", 1.0)});
    }
    c.N = get<int>(j, "N", "", c.N);
    if (j.contains("grid") && !j.at("grid").is_null()) {
        const json& g = j.at("grid");
        GridSpec gs;
        gs.a = get<double>(g, "a", "grid.", 0.0);
        gs.b = get<double>(g, "b", "grid.", 0.0);
        gs.I = get<int>(g, "I", "grid.", 50);
        c.grid = gs;
    }
    c.keep = get<int>(j, "keep", "", c.keep);
    c.x_meas = get<double>(j, "x_meas", "", c.x_meas);
    try {
        c.backend = parse_backend(get<std::string>(j, "backend", "", "airy"));
        c.phi = parse_phi_inverse(get<std::string>(j, "phi_inverse", "", "exact").c_str());
        c.unwrap = parse_unwrap_mode(get<std::string>(j, "unwrap", "", "increasing"));
    } catch (const Error& e) {
        bad("backend/phi_inverse/unwrap", e.what());
    }
    c.sigma = get<double>(j, "sigma", "", c.sigma);
    c.seed = get<std::uint64_t>(j, "seed", "", c.seed);
    if (j.contains("fd")) {
        const json& f = j.at("fd");
        c.mesh_step = get<double>(f, "mesh_step", "fd.", c.mesh_step);
        const auto pml = get<std::string>(f, "pml", "fd.", "stretched");
        if (pml == "stretched") c.pml = PmlForm::stretched;
        else if (pml == "absorbing_potential") c.pml = PmlForm::absorbing_potential;
        else bad("fd.pml", "expected 'stretched' or 'absorbing_potential'");
    }
    if (j.contains("bounds")) {
        const json& b = j.at("bounds");
        c.bounds.source = get<std::string>(b, "source", "bounds.", c.bounds.source);
        c.bounds.h_min = get_opt(b, "h_min", "bounds.");
        c.bounds.h_max = get_opt(b, "h_max", "bounds.");
        c.bounds.k_lo = get<double>(b, "k_lo", "bounds.", c.bounds.k_lo);
        c.bounds.k_hi = get<double>(b, "k_hi", "bounds.", c.bounds.k_hi);
        c.bounds.count = get<int>(b, "count", "bounds.", c.bounds.count);
        try {
            c.bounds.backend = parse_backend(get<std::string>(b, "backend", "bounds.", "airy"));
        } catch (const Error& e) {
            bad("bounds.backend", e.what());
        }
    }
    if (j.contains("anchors")) {
        const json& a = j.at("anchors");
        if (auto v = get_opt(a, "x_right", "anchors.")) {
            c.anchors.has_right = true;
            c.anchors.right = *v;
        }
        if (auto v = get_opt(a, "x_left", "anchors.")) {
            c.anchors.has_left = true;
            c.anchors.left = *v;
        }
    }
    c.sigmas = get<std::vector<double>>(j, "sigmas", "", {});
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(Errc::config, "config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
    json j;
    if (is_builtin(c.profile_id)) {
        j["profile"] = c.profile_id;
    } else {
        json pieces = json::array();
        for (const auto& p : c.custom_pieces)
            pieces.push_back({{"x0", p.x0}, {"x1", p.x1}, {"coeffs", p.coeffs}});
        j["profile"] = {{"id", c.profile_id}, {"pieces", pieces}};
    }
    json interior = json::array(), top = json::array(), bot = json::array();
    for (const auto& f : c.sources.interior) interior.push_back({{"x", f.x}, {"fy", f.fy}});
    for (const auto& b : c.sources.top) top.push_back({{"x", b.x}, {"amplitude", b.amplitude}});
    for (const auto& b : c.sources.bot) bot.push_back({{"x", b.x}, {"amplitude", b.amplitude}});
    j["sources"] = {{"interior", interior}, {"top", top}, {"bot", bot}};
    j["N"] = c.N;
    const GridSpec g = resolve_grid_spec(c);
    j["grid"] = {{"a", g.a}, {"b", g.b}, {"I", g.I}};
    j["keep"] = c.keep;
    j["x_meas"] = c.x_meas;
    j["backend"] = backend_name(c.backend);
    j["sigma"] = c.sigma;
    j["seed"] = c.seed;
    j["phi_inverse"] = phi_inverse_name(c.phi);
    j["unwrap"] = unwrap_mode_name(c.unwrap);
    j["fd"] = {{"mesh_step", c.mesh_step},
               {"pml", c.pml == PmlForm::stretched ? "stretched" : "absorbing_potential"}};
    j["bounds"] = {{"source", c.bounds.source},     {"h_min", opt_json(c.bounds.h_min)},
                   {"h_max", opt_json(c.bounds.h_max)}, {"k_lo", c.bounds.k_lo},
                   {"k_hi", c.bounds.k_hi},           {"count", c.bounds.count},
                   {"backend", backend_name(c.bounds.backend)}};
    j["anchors"] = {
        {"x_right", c.anchors.has_right ? json(c.anchors.right) : json(nullptr)},
        {"x_left", c.anchors.has_left ? json(c.anchors.left) : json(nullptr)}};
    j["sigmas"] = c.sigmas.empty() ? default_sigmas() : c.sigmas;
    return j;
}

void validate(const RunConfig& c) {
    if (!is_builtin(c.profile_id) && c.custom_pieces.empty())
        bad("profile", "unknown id '" + c.profile_id + "' and no pieces given");
    if (c.N < 1) bad("N", "must be at least 1");
    if (c.grid) {
        if (c.grid->I < 2) bad("grid.I", "must be at least 2");
        if (!(c.grid->a < c.grid->b)) bad("grid", "need a < b");
    } else if (!is_builtin(c.profile_id)) {
        bad("grid", "required for custom profiles");
    }
    const int I = resolve_grid_spec(c).I;
    if (c.keep < 2 || c.keep > I) bad("keep", "must lie in [2, grid.I]");
    if (!(c.sigma >= 0.0)) bad("sigma", "must be non-negative");
    if (!(c.mesh_step > 0.0 && c.mesh_step <= 1e-3)) bad("fd.mesh_step", "must lie in (0, 1e-3]");
    const auto& b = c.bounds;
    if (b.source != "section_sweep" && b.source != "sweep" && b.source != "profile" &&
        b.source != "values")
        bad("bounds.source", "expected section_sweep, sweep, profile or values");
    if (b.source == "values" && !(b.h_min && b.h_max))
        bad("bounds", "source 'values' needs h_min and h_max");
    if (b.h_min && b.h_max && !(*b.h_min > 0.0 && *b.h_min < *b.h_max))
        bad("bounds", "need 0 < h_min < h_max");
    if (b.count < 1) bad("bounds.count", "must be positive");
    const double left = c.sources.leftmost();
    if (!std::isfinite(left)) bad("sources", "at least one source is required");
    if (left < c.x_meas) bad("sources", "all sources must lie at or right of x_meas");
    for (double s : c.sigmas)
        if (!(s >= 0.0)) bad("sigmas", "must be non-negative");
}

WidthProfile resolve_profile(const RunConfig& c) {
    if (is_builtin(c.profile_id)) return builtin_profile(c.profile_id);
    try {
        return piecewise_polynomial_profile(c.profile_id, c.custom_pieces);
    } catch (const Error& e) {
        bad("profile.pieces", e.what());
    }
}

GridSpec resolve_grid_spec(const RunConfig& c) {
    return c.grid ? *c.grid : default_grid(c.profile_id);
}

}  // namespace lrs
