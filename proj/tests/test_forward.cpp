#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fd_checks.hpp"
#include "lrs/error.hpp"
#include "lrs/forward.hpp"
#include "lrs/specfun.hpp"

using namespace lrs;

namespace {

bool throws_code(Errc code, auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("modal_source weights") {
    const WidthProfile h1 = builtin_profile("h1");
    SourceSpec top;
    top.top.push_back({6.0, 1.0});
    auto g = modal_source(top, h1, 1);
    REQUIRE(g.atoms.size() == 1);
    CHECK(g.atoms[0].x == 6.0);
    CHECK(g.atoms[0].w.real() == doctest::Approx(-std::sqrt(2.0) / h1.h_max).epsilon(1e-13));

    SourceSpec bot;
    bot.bot.push_back({6.0, 1.0});
    CHECK(modal_source(bot, h1, 0).atoms[0].w.real() == doctest::Approx(1.0 / h1.h_max).epsilon(1e-13));

    SourceSpec in;
    in.interior.push_back({6.0, {0.0, 1.0}});
    const double h = h1.h_max;
    auto f = [&](double y) { return y * eval_basis(h1, 1, 6.0, y); };
    const double oracle =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, h, 15, 1e-15) / std::sqrt(h);
    const double w = modal_source(in, h1, 1).atoms[0].w.real();
    CHECK(std::abs(w - oracle) < 1e-10 * std::abs(oracle));
    CHECK(w == doctest::Approx(-2.0 * std::sqrt(2.0) * h / (M_PI * M_PI)).epsilon(1e-12));
}

TEST_CASE("xi_phase") {
    const WidthProfile h1 = builtin_profile("h1");
    const double k = 31.4;
    const double xs = resonant_point(h1, 1, k);
    CHECK(std::abs(xi_phase(h1, 1, k, xs)) < 1e-12);
    CHECK(xi_phase(h1, 1, k, xs + 0.5) < 0.0);
    CHECK(xi_phase(h1, 1, k, xs - 0.5) > 0.0);
    // plateau bound beyond x0 = 4
    const double kn = local_wavenumber(h1, 1, k, 6.0).real();
    CHECK(-xi_phase(h1, 1, k, 6.0) >= std::pow(2.0 * kn, 2.0 / 3.0));

    // linear profile: closed form and a Riemann oracle in t with x = x* + t^2
    const WidthProfile h3 = builtin_profile("h3");
    const double g5 = 0.01 / 30.0;
    const double xs3 = resonant_point(h3, 1, k);
    const double x = xs3 + 0.5;
    auto F = [&](double hh) { return std::sqrt(k * k * hh * hh - M_PI * M_PI) - M_PI * std::acos(M_PI / (k * hh)); };
    const double closed = F(h3.h(x)) / g5;
    const int n = 1000000;
    const double T = std::sqrt(x - xs3);
    double riemann = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) * T / n;
        riemann += 2.0 * t * std::sqrt(local_wavenumber_sq(h3.h(xs3 + t * t), 1, k));
    }
    riemann *= T / n;
    CHECK(std::abs(riemann - closed) < 1e-8 * closed);
    const double want = -std::pow(1.5 * closed, 2.0 / 3.0);
    CHECK(std::abs(xi_phase(h3, 1, k, x) - want) < 1e-8 * std::abs(want));
    CHECK(zeta_of_k(h3, 1, k, x) == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("green_app closed forms") {
    const WidthProfile flat = flat_profile(0.1);
    for (int n : {0, 1}) {
        const double k = 33.0;
        const double kn = std::sqrt(k * k - n * n * M_PI * M_PI / 0.01);
        for (double d : {0.0, 0.7, 3.0}) {
            const cplx want = cplx(0, 1) * std::exp(cplx(0, kn * d)) / (2.0 * kn);
            CHECK(rel(green_app(flat, n, k, 1.0 + d, 1.0), want) < 1e-12);
        }
    }
    const double k = 20.0;
    const double kn = std::sqrt(M_PI * M_PI / 0.01 - k * k);
    CHECK(rel(green_app(flat, 1, k, 1.5, 1.0), cplx(std::exp(-0.5 * kn) / (2.0 * kn), 0.0)) < 1e-12);
}

TEST_CASE("green_app symmetry in all three cases") {
    const WidthProfile h1 = builtin_profile("h1");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int n : {0, 1, 2}) {
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng), s = u(rng);
            const cplx a = green_app(h1, n, 31.4, x, s);
            const cplx b = green_app(h1, n, 31.4, s, x);
            CHECK(std::abs(a - b) <= 1e-12 * std::abs(a) + 1e-300);
        }
    }
}

TEST_CASE("green_app turning point is finite") {
    const WidthProfile h1 = builtin_profile("h1");
    const double k = 31.4;
    const double xs = resonant_point(h1, 1, k);
    const cplx at = green_app(h1, 1, k, xs, 6.0);
    const cplx near = green_app(h1, 1, k, xs + 1e-5, 6.0);
    CHECK(std::isfinite(at.real()));
    CHECK(rel(at, near) < 1e-3);
}

TEST_CASE("green_app far field follows the Airy envelope") {
    const WidthProfile h1 = builtin_profile("h1");
    const double k = 31.4;
    const double xs = resonant_point(h1, 1, k);
    const double s = xs - 0.3;
    const double xis = xi_phase(h1, 1, k, s);
    const double ws = std::pow(xis / -local_wavenumber_sq(h1.h(s), 1, k), 0.25);
    const double ai = airy(xis).ai;
    for (double x : {xs + 1.0, 4.0, 6.0, 8.0}) {
        const double t = -xi_phase(h1, 1, k, x);
        const double kn = local_wavenumber(h1, 1, k, x).real();
        const double env = std::sqrt(M_PI) * ws * ai / std::sqrt(kn);
        const double dev = std::abs(std::abs(green_app(h1, 1, k, x, s)) - env) / env;
        CHECK(dev * std::pow(t, 1.25) < 0.2);
    }
}

TEST_CASE("modal data, q and zeta") {
    const WidthProfile h1 = builtin_profile("h1");
    const WidthProfile flat = flat_profile(0.1);
    SourceSpec b;
    b.top.push_back({6.0, 1.0});
    const double k = 33.0;
    const double kn = std::sqrt(k * k - M_PI * M_PI / 0.01);
    const double w = -std::sqrt(2.0) / 0.1;
    CHECK(rel(modal_data_airy(flat, b, 1, k, 6.0), cplx(0.0, w / (2.0 * kn))) < 1e-12);
    CHECK(rel(q_of_k(flat, b, 1, k, 6.0), cplx(w / kn, 0.0)) < 1e-12);

    // linearity of every backend
    const SourceSpec src = default_sources();
    for (Backend be : {Backend::airy, Backend::simplified, Backend::fd}) {
        const FrequencyGrid g = make_grid(31.3, 31.5, 2, 1, h1);
        const auto one = synth_measurements(h1, src, 1, g, 6.0, be);
        const auto two = synth_measurements(h1, src.scaled(2.0), 1, g, 6.0, be);
        SourceSpec mix = src;
        mix.bot.push_back({7.0, 0.3});
        SourceSpec extra;
        extra.bot.push_back({7.0, 0.3});
        const auto m = synth_measurements(h1, mix, 1, g, 6.0, be);
        const auto e = synth_measurements(h1, extra, 1, g, 6.0, be == Backend::simplified ? Backend::simplified : be);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(std::abs(two.values[i] - 2.0 * one.values[i]) < 1e-10 * std::abs(one.values[i]));
            CHECK(std::abs(m.values[i] - one.values[i] - e.values[i]) < 1e-10 * std::abs(m.values[i]));
        }
    }

    // cancelling pair: weights w and -w exp(-i k_N d) placed at x_meas and x_meas + d
    SourceSpec c;
    c.bot.push_back({6.0, 1.0});
    c.bot.push_back({6.0 + M_PI / kn, 1.0});
    CHECK(throws_code(Errc::degenerate_source, [&] { (void)q_of_k(flat, c, 1, k, 6.0); }));

    // default sources: q nonzero and zeta increasing over the grid
    const FrequencyGrid g1 = make_grid(30.92, 31.93, 50, 1, h1);
    double prev = -1.0;
    for (double kk : g1.values) {
        const cplx q = q_of_k(h1, src, 1, kk, 6.0);
        const auto atoms = modal_source(src, h1, 1).atoms;
        const double knm = local_wavenumber(h1, 1, kk, 6.0).real();
        CHECK(rel(q, (atoms[0].w + atoms[1].w) / knm) < 1e-13);
        CHECK(std::abs(modal_data_airy(h1, src, 1, kk, 6.0)) > 0.0);
        const double z = zeta_of_k(h1, 1, kk, 6.0);
        CHECK(z > prev);
        CHECK(z >= (6.0 - 4.0) * knm);
        CHECK(rel(modal_data_simplified(h1, src, 1, kk, 6.0), q * phi(z)) < 1e-14);
        prev = z;
    }
}

TEST_CASE("fd oracle against closed forms") {
    CHECK(fdcheck::uniform_guide_error(0.1, 1, 33.0) < 0.01);
    CHECK(fdcheck::uniform_guide_error(0.1, 0, 31.0) < 0.01);
    CHECK(fdcheck::pml_reflection(0.1, 1, 33.0) < 1e-3);
    CHECK(fdcheck::pml_reflection(0.1, 0, 31.0) < 1e-3);

    // evanescent decay rate by a log-linear fit
    const WidthProfile flat = flat_profile(0.1);
    const double k = 25.0;
    const double kappa = std::sqrt(M_PI * M_PI / 0.01 - k * k);
    const FdField u = fd_solve(flat, 1, k, {{0.0, 1.0}});
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 0; i <= 100; ++i) {
        const double x = 0.2 + 0.8 * i / 100.0;
        const double y = std::log(std::abs(u.at(x)));
        sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(-slope - kappa) < 0.01 * kappa);

    FdOptions coarse;
    coarse.mesh_step = 2e-3;
    CHECK(throws_code(Errc::domain, [&] { (void)fd_oracle(flat, default_sources(), 1, 33.0, 6.0, coarse); }));
}

TEST_CASE("airy backend tracks the fd oracle on h1") {
    const WidthProfile h1 = builtin_profile("h1");
    const FrequencyGrid g = make_grid(30.92, 31.93, 50, 1, h1);
    const SourceSpec src = default_sources();
    const auto a = synth_measurements(h1, src, 1, g, 6.0, Backend::airy);
    const auto f = synth_measurements(h1, src, 1, g, 6.0, Backend::fd);
    CHECK(a.provenance.kind == "airy_model");
    CHECK(f.provenance.kind == "fd_oracle");
    std::vector<double> r;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        r.push_back(std::abs(a.values[i] - f.values[i]) / std::abs(f.values[i]));
        num += std::norm(a.values[i] - f.values[i]);
        den += std::norm(f.values[i]);
    }
    std::nth_element(r.begin(), r.begin() + 25, r.end());
    MESSAGE("median pointwise gap " << r[25] << ", relative L2 " << std::sqrt(num / den));
    CHECK(r[25] < 0.1);
    CHECK(std::sqrt(num / den) <= 0.1);
}

TEST_CASE("synth_measurements bookkeeping") {
    const WidthProfile h1 = builtin_profile("h1");
    const FrequencyGrid g = make_grid(31.4, 31.4, 1, 1, h1);
    const auto m = synth_measurements(h1, default_sources(), 1, g, 6.0, Backend::simplified);
    CHECK(m.values.size() == 1);
    CHECK(m.provenance.kind == "simplified_model");
    FrequencyGrid bad = g;
    bad.values = {31.4, M_PI / h1.h_max};
    CHECK_THROWS_WITH_AS((void)synth_measurements(h1, default_sources(), 1, bad, 6.0, Backend::airy),
                         doctest::Contains("frequency"), Error);
}

TEST_CASE("add_noise") {
    ModalMeasurementSet m;
    m.values.assign(20000, cplx(1.0, -1.0));
    m.provenance.kind = "airy_model";
    const auto z = add_noise(m, 0.0, 3);
    CHECK(z.values == m.values);
    CHECK(z.provenance.kind == "noisy");
    const double sigma = 0.37;
    const auto a = add_noise(m, sigma, 42);
    const auto b = add_noise(m, sigma, 42);
    CHECK(a.values == b.values);
    CHECK(a.provenance.base == "airy_model");
    CHECK(a.provenance.sigma == sigma);
    CHECK(a.provenance.seed == 42u);
    double ss = 0.0;
    for (std::size_t i = 0; i < m.values.size(); ++i) ss += std::norm(a.values[i] - m.values[i]);
    const double sd = std::sqrt(ss / static_cast<double>(m.values.size()));
    CHECK(std::abs(sd - sigma) < 0.02 * sigma);
    CHECK(add_noise(m, sigma, 43).values != a.values);
}
