#include "lrs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lrs/error.hpp"
#include "lrs/io.hpp"

namespace lrs {

using nlohmann::json;

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        rethrow_with_context(e, std::string("stage ") + name);
    }
}

json samples_json(const std::vector<std::pair<double, double>>& s) {
    json a = json::array();
    for (const auto& [x, h] : s) a.push_back({x, h});
    return a;
}

void ensure_dir(const std::filesystem::path& out) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw Error(Errc::io, "cannot create output directory '" + out.string() + "'");
}

void write_reconstruction(const std::filesystem::path& dir, const RunConfig& c,
                          const ModalMeasurementSet& m, const Bounds& b,
                          const InversionResult& r) {
    write_json(dir / "report.json", report_json(c, m, b, r));
    std::vector<std::vector<double>> rows;
    for (const auto& [x, h] : r.rec.samples) rows.push_back({x, h});
    write_csv(dir / "h_app.csv", {"x", "h_app"}, rows);
}

}  // namespace

FrequencyGrid resolve_grid(const RunConfig& c, const WidthProfile& p) {
    const GridSpec g = resolve_grid_spec(c);
    try {
        return make_grid(g.a, g.b, g.I, c.N, p);
    } catch (const Error& e) {
        throw Error(Errc::config, std::string("config field 'grid': ") + e.what());
    }
}

SynthOptions synth_options(const RunConfig& c, const WidthProfile& p) {
    SynthOptions o;
    o.fd.mesh_step = c.mesh_step;
    o.fd.pml.form = c.pml;
    o.policy = p.monotone ? RootPolicy::unique : RootPolicy::rightmost;
    return o;
}

Bounds resolve_bounds(const RunConfig& c, const WidthProfile& p) {
    Bounds b;
    b.source = c.bounds.source;
    if (b.source == "profile") {
        b.h_min = p.h_min;
        b.h_max = p.h_max;
    } else if (b.source == "values") {
        b.h_min = *c.bounds.h_min;
        b.h_max = *c.bounds.h_max;
    } else {
        b.sweep = stage("bounds", [&] {
            return sweep(p, c.sources, c.N, c.bounds.k_lo, c.bounds.k_hi, c.bounds.count, c.x_meas,
                         c.bounds.backend, synth_options(c, p));
        });
        b.h_min = stage("bounds", [&] { return estimate_hmin(*b.sweep, c.N); });
        b.h_max = b.source == "sweep" ? stage("bounds", [&] { return estimate_hmax(*b.sweep, c.N); })
                                      : p.h(c.x_meas);
    }
    if (b.source != "values") {
        if (c.bounds.h_min) b.h_min = *c.bounds.h_min;
        if (c.bounds.h_max) b.h_max = *c.bounds.h_max;
    }
    if (!(b.h_min > 0.0 && b.h_min < b.h_max)) {
        std::ostringstream os;
        os << "inconsistent bounds h_min = " << b.h_min << ", h_max = " << b.h_max;
        throw Error(Errc::inconclusive, os.str());
    }
    return b;
}

ModalMeasurementSet simulate(const RunConfig& c, const WidthProfile& p) {
    if (c.x_meas < p.support_hi)
        throw Error(Errc::config, "config field 'x_meas': must lie right of the profile support");
    const FrequencyGrid g = resolve_grid(c, p);
    auto m = stage("simulate", [&] {
        return synth_measurements(p, c.sources, c.N, g, c.x_meas, c.backend, synth_options(c, p));
    });
    if (c.sigma > 0.0) m = add_noise(m, c.sigma, c.seed);
    return m;
}

InversionOptions inversion_options(const RunConfig& c, const Bounds& b) {
    InversionOptions o;
    o.phi = c.phi;
    o.unwrap = c.unwrap;
    o.keep = c.keep;
    o.h_min = b.h_min;
    o.h_max = b.h_max;
    o.anchors = c.anchors;
    return o;
}

InversionResult invert_measurements(const ModalMeasurementSet& m, const SourceSpec& src,
                                    const InversionOptions& opt, const WidthProfile* truth) {
    InversionResult r;
    const int N = m.grid.N;
    const auto& k = m.grid.values;
    if (k.size() < 2) throw Error(Errc::degenerate_grid, "stage ell: need at least two frequencies");

    r.v = stage("normalize", [&] { return normalize(m, flat_profile(opt.h_max), src); });
    r.raw = stage("phi_inverse", [&] {
        std::vector<double> raw;
        for (const auto& z : r.v) raw.push_back(phi_left_inverse(z, opt.phi));
        return raw;
    });
    r.t = stage("unwrap", [&] { return unwrap(r.raw, opt.unwrap); });
    r.ell = stage("ell", [&] { return estimate_ell(r.t[0], r.t[1], k[0], k[1], opt.h_max, N); });
    for (double t : r.t) r.d.push_back(t + r.ell * pi);

    r.kept = stage("thin", [&] { return thin_indices(static_cast<int>(k.size()), opt.keep); });
    for (int i : r.kept) {
        r.k_kept.push_back(k[i]);
        r.d_kept.push_back(r.d[i]);
    }
    r.sys = stage("assemble", [&] { return assemble_system(r.k_kept, N * pi / opt.h_max, r.d_kept); });
    r.condition = condition_estimate(r.sys);
    r.strip = stage("solve", [&] { return solve_strip(r.sys, m.x_meas); });
    if (!r.strip.negative_steps.empty())
        r.warnings.push_back(std::to_string(r.strip.negative_steps.size()) +
                             " negative V entries: x_app not decreasing (ill-conditioned T)");
    r.rec = stage("reconstruct", [&] {
        return reconstruct(opt.h_min, opt.h_max, N, r.k_kept, r.strip.x_app, opt.anchors);
    });
    for (const auto& w : r.rec.warnings) r.warnings.push_back(w);
    if (truth) {
        r.e_inf = linf_error(r.rec, *truth);
        r.partial_recovery = !truth->monotone;
        if (r.partial_recovery)
            r.warnings.push_back("profile is not monotone: only the increasing part next to the "
                                 "measurement section is recovered");
    }
    return r;
}

json report_json(const RunConfig& c, const ModalMeasurementSet& m, const Bounds& b,
                 const InversionResult& r) {
    json j;
    j["config"] = config_to_json(c);
    j["inputs"] = {{"grid", m.grid.values},
                   {"x_meas", m.x_meas},
                   {"N", m.grid.N},
                   {"provenance",
                    {{"kind", m.provenance.kind},
                     {"base", m.provenance.base},
                     {"sigma", m.provenance.sigma},
                     {"seed", m.provenance.seed}}}};
    j["bounds"] = {{"h_min", b.h_min}, {"h_max", b.h_max}, {"source", b.source}};
    j["ell"] = r.ell;
    j["raw"] = r.raw;
    j["t"] = r.t;
    j["d"] = r.d;
    j["kept_indices"] = r.kept;
    j["k_kept"] = r.k_kept;
    j["d_kept"] = r.d_kept;
    std::vector<double> diag;
    for (Eigen::Index i = 0; i < r.sys.T.rows(); ++i) diag.push_back(r.sys.T(i, i));
    j["T"] = {{"diagonal", diag}, {"condition_1norm", r.condition}};
    j["V"] = std::vector<double>(r.strip.V.data(), r.strip.V.data() + r.strip.V.size());
    j["negative_steps"] = r.strip.negative_steps;
    j["x_app"] = r.strip.x_app;
    j["h_app_samples"] = samples_json(r.rec.samples);
    j["anchors"] = {{"x_right", r.rec.x_right}, {"x_left", r.rec.x_left}};
    j["e_inf"] = r.e_inf ? json(*r.e_inf) : json(nullptr);
    j["partial_recovery"] = r.partial_recovery;
    j["warnings"] = r.warnings;
    return j;
}

std::vector<NoiseRow> noise_study(const RunConfig& c0) {
    RunConfig c = c0;
    c.sigma = 0.0;
    std::vector<double> sig = c.sigmas.empty() ? default_sigmas() : c.sigmas;
    std::sort(sig.begin(), sig.end());
    const WidthProfile p = resolve_profile(c);
    const Bounds b = resolve_bounds(c, p);
    const ModalMeasurementSet clean = simulate(c, p);
    const InversionOptions opt = inversion_options(c, b);
    std::vector<NoiseRow> rows;
    for (std::size_t i = 0; i < sig.size(); ++i) {
        NoiseRow row;
        row.sigma = sig[i];
        try {
            const auto noisy = add_noise(clean, sig[i], c.seed + i);
            row.e_inf = *invert_measurements(noisy, c.sources, opt, &p).e_inf;
        } catch (const Error& e) {
            row.e_inf = std::numeric_limits<double>::quiet_NaN();
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ReproduceRow> reproduce(const RunConfig& base, const std::filesystem::path* out) {
    struct Case {
        const char* id;
        double target;
        double threshold;
    };
    const Case cases[] = {{"h1", 0.0097, 0.029}, {"h2", 0.010, 0.030}, {"h3", 0.011, 0.033},
                          {"h4", 0.015, 0.045}};
    std::vector<ReproduceRow> rows;
    for (const auto& cs : cases) {
        RunConfig c = base;
        c.profile_id = cs.id;
        c.custom_pieces.clear();
        c.grid.reset();
        ReproduceRow row;
        row.profile = cs.id;
        row.target = cs.target;
        row.threshold = cs.threshold;
        try {
            validate(c);
            const WidthProfile p = resolve_profile(c);
            const Bounds b = resolve_bounds(c, p);
            const ModalMeasurementSet m = simulate(c, p);
            const InversionResult r = invert_measurements(m, c.sources, inversion_options(c, b), &p);
            row.e_inf = *r.e_inf;
            row.pass = row.e_inf <= row.threshold;
            if (out) {
                const auto dir = *out / cs.id;
                ensure_dir(dir);
                write_measurements(dir / "measurements.csv", m, config_to_json(c));
                write_reconstruction(dir, c, m, b, r);
            }
        } catch (const Error& e) {
            row.e_inf = std::numeric_limits<double>::quiet_NaN();
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

int cmd_simulate(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
    ensure_dir(out);
    const WidthProfile p = resolve_profile(c);
    const ModalMeasurementSet m = simulate(c, p);
    write_measurements(out / "measurements.csv", m, config_to_json(c));
    log << "simulate: " << m.values.size() << " frequencies (" << m.provenance.kind << ") -> "
        << (out / "measurements.csv").string() << '\n';
    return 0;
}

int cmd_invert(const RunConfig& c, const std::optional<std::filesystem::path>& measurements,
               const std::filesystem::path& out, std::ostream& log) {
    ensure_dir(out);
    const WidthProfile p = resolve_profile(c);
    const ModalMeasurementSet m = measurements ? read_measurements(*measurements).set : simulate(c, p);
    const Bounds b = resolve_bounds(c, p);
    const InversionResult r = invert_measurements(m, c.sources, inversion_options(c, b), &p);
    write_reconstruction(out, c, m, b, r);
    log << "invert: ell = " << r.ell << ", E_inf = " << fmt_double(*r.e_inf)
        << (r.partial_recovery ? " (partial recovery)" : "") << '\n';
    for (const auto& w : r.warnings) log << "warning: " << w << '\n';
    return 0;
}

int cmd_bounds(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
    ensure_dir(out);
    const WidthProfile p = resolve_profile(c);
    const SweepResult s = stage("bounds", [&] {
        return sweep(p, c.sources, c.N, c.bounds.k_lo, c.bounds.k_hi, c.bounds.count, c.x_meas,
                     c.bounds.backend, synth_options(c, p));
    });
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < s.k.size(); ++i) rows.push_back({s.k[i], s.amp[i], s.ref[i]});
    write_csv(out / "sweep.csv", {"k", "amp", "ref"}, rows);
    const double hmax = stage("bounds", [&] { return estimate_hmax(s, c.N); });
    const ChangePoint cp = stage("bounds", [&] { return detect_change_point(s); });
    const double hmin = c.N * pi / cp.k_hat;
    json j;
    j["config"] = config_to_json(c);
    j["h_max"] = hmax;
    j["h_min"] = hmin;
    j["change_point"] = {{"k_hat", cp.k_hat}, {"jump", cp.jump}, {"threshold", cp.threshold}};
    j["profile_h_max"] = p.h_max;
    j["profile_h_min"] = p.h_min;
    write_json(out / "bounds.json", j);
    log << "bounds: h_max ~ " << fmt_double(hmax) << " (profile " << fmt_double(p.h_max)
        << "), h_min ~ " << fmt_double(hmin) << " (profile " << fmt_double(p.h_min) << ")\n";
    return 0;
}

int cmd_noise_study(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
    ensure_dir(out);
    const auto rows = noise_study(c);
    std::vector<std::vector<double>> csv;
    json errors = json::array();
    for (const auto& r : rows) {
        csv.push_back({r.sigma, r.e_inf});
        if (!r.error.empty()) errors.push_back({{"sigma", r.sigma}, {"error", r.error}});
        log << "sigma " << fmt_double(r.sigma) << "  E_inf " << fmt_double(r.e_inf) << '\n';
    }
    write_csv(out / "noise_study.csv", {"sigma", "e_inf"}, csv);
    write_json(out / "noise_study.json", {{"config", config_to_json(c)}, {"failures", errors}});
    return 0;
}

int cmd_reproduce(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
    ensure_dir(out);
    const auto rows = reproduce(c, &out);
    std::ofstream csv(out / "summary.csv", std::ios::binary);
    csv << "profile,e_inf,target,threshold,pass\n";
    json j = json::array();
    std::vector<std::string> offenders;
    log << "profile  E_inf       target   threshold  pass\n";
    for (const auto& r : rows) {
        csv << r.profile << ',' << fmt_double(r.e_inf) << ',' << fmt_double(r.target) << ','
            << fmt_double(r.threshold) << ',' << (r.pass ? 1 : 0) << '\n';
        j.push_back({{"profile", r.profile},
                     {"e_inf", std::isnan(r.e_inf) ? json(nullptr) : json(r.e_inf)},
                     {"target", r.target},
                     {"threshold", r.threshold},
                     {"pass", r.pass},
                     {"error", r.error}});
        char line[128];
        std::snprintf(line, sizeof line, "%-8s %-11.6f %-8.4f %-10.4f %s\n", r.profile.c_str(),
                      r.e_inf, r.target, r.threshold, r.pass ? "yes" : "NO");
        log << line;
        if (!r.error.empty()) log << "  error: " << r.error << '\n';
        if (!r.pass) offenders.push_back(r.profile);
    }
    write_json(out / "summary.json", {{"config", config_to_json(c)}, {"rows", j}});
    if (!offenders.empty()) {
        log << "over threshold:";
        for (const auto& o : offenders) log << ' ' << o;
        log << '\n';
        return 1;
    }
    return 0;
}

}  // namespace lrs
