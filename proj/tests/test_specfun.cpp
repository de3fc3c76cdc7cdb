#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "airy_oracle.hpp"
#include "lrs/error.hpp"
#include "lrs/specfun.hpp"

using namespace lrs;
using std::numbers::pi;

namespace {

double mod_pi(double t) {
    double r = std::fmod(t, pi);
    if (r < 0) r += pi;
    return r;
}

double circ_dist(double a, double b) {
    const double d = mod_pi(a - b);
    return std::min(d, pi - d);
}

}  // namespace

TEST_CASE("airy at the origin and first zero") {
    const AiryPair a = airy(0.0);
    CHECK(a.ai == doctest::Approx(0.35502805388781723926).epsilon(1e-15));
    CHECK(a.bi == doctest::Approx(0.61492662744600073515).epsilon(1e-15));
    CHECK(a.aip == doctest::Approx(-0.25881940379280679840).epsilon(1e-15));
    CHECK(std::abs(airy(-2.33810741045976703849).ai) < 1e-9);
    const AiryPair o = oracle::airy_series(0.0);
    CHECK(o.ai == doctest::Approx(0.35502805388781723926).epsilon(1e-15));
    CHECK(std::abs(oracle::airy_series(-2.33810741045976703849).ai) < 1e-15);
}

TEST_CASE("airy against the series oracle") {
    double worst = 0.0;
    for (int i = 0; i <= 700; ++i) {
        const double x = -30.0 + 35.0 * i / 700.0 + 1e-3 * std::sin(i);
        worst = std::max(worst, oracle::airy_error(x).max());
    }
    INFO("worst relative error " << worst);
    CHECK(worst <= 1e-10);
}

TEST_CASE("airy wronskian") {
    for (int i = 0; i <= 3500; ++i) {
        const double x = -30.0 + 35.0 * i / 3500.0;
        const AiryPair a = airy(x);
        CHECK(std::abs((a.ai * a.bip - a.aip * a.bi) * pi - 1.0) < 1e-9);
    }
    for (double x : {-500.0, -120.0, 9.5, 20.0}) {
        const AiryPair a = airy(x);
        CHECK(std::abs((a.ai * a.bip - a.aip * a.bi) * pi - 1.0) < 1e-9);
    }
}

TEST_CASE("airy seams are continuous") {
    for (double s : {airy_seam_negative, airy_seam_positive}) {
        const AiryPair t = airy(s + (s < 0 ? 1e-12 : -1e-12));
        const AiryPair a = airy_asymptotic(s);
        const double scale_ai = std::max(std::abs(a.ai), s < 0 ? std::hypot(a.ai, a.bi) : 0.0);
        const double scale_bi = std::max(std::abs(a.bi), s < 0 ? std::hypot(a.ai, a.bi) : 0.0);
        CHECK(std::abs(t.ai - a.ai) / scale_ai < 1e-10);
        CHECK(std::abs(t.bi - a.bi) / scale_bi < 1e-10);
    }
}

TEST_CASE("airy overflow saturates") {
    const AiryPair a = airy(200.0);
    CHECK(a.overflow);
    CHECK(std::isfinite(a.bi));
    CHECK(a.ai >= 0.0);
    CHECK(a.ai < 1e-300);
    CHECK_FALSE(airy(5.0).overflow);
}

TEST_CASE("airy large-argument envelope bound") {
    // |sqrt(pi) t^{1/4} Ai(-t) - sin(2/3 t^{3/2} + pi/4)| t^{5/4} stays bounded
    for (double t : {10.0, 100.0, 1000.0}) {
        const AiryPair a = airy(-t);
        const double z = 2.0 / 3.0 * std::pow(t, 1.5) + pi / 4;
        const double ra = std::abs(std::sqrt(pi) * std::pow(t, 0.25) * a.ai - std::sin(z));
        const double rb = std::abs(std::sqrt(pi) * std::pow(t, 0.25) * a.bi - std::cos(z));
        CHECK(ra * std::pow(t, 1.25) < 0.1);
        CHECK(rb * std::pow(t, 1.25) < 0.1);
    }
}

TEST_CASE("phi") {
    CHECK(std::abs(phi(0.0) - std::complex<double>(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(phi(pi / 4) - std::complex<double>(0.0, 1.0)) < 1e-15);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        CHECK(std::abs(phi(x + pi) - phi(x)) < 1e-13);
        CHECK(std::abs(std::abs(phi(x)) - std::abs(std::sin(x + pi / 4))) < 1e-14);
    }
}

TEST_CASE("phi_left_inverse exact") {
    CHECK(std::abs(phi_left_inverse({0.5, 0.5})) < 1e-15);
    CHECK(phi_left_inverse({0.0, 1.0}) == doctest::Approx(pi / 4).epsilon(1e-15));
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double t = 50.0 * pi * i / 9999.0;
        worst = std::max(worst, circ_dist(phi_left_inverse(phi(t)), t));
    }
    CHECK(worst < 1e-12);
    for (double t : {0.0, 1.0, 3.0}) {
        const double r = phi_left_inverse(phi(t));
        CHECK(r >= 0.0);
        CHECK(r < pi);
    }
    CHECK_THROWS_AS((void)phi_left_inverse({1.3, 0.0}), Error);
    CHECK_NOTHROW((void)phi_left_inverse({1.2, 0.0}));
}

TEST_CASE("phi_left_inverse paper variant has a constant offset") {
    // away from the branch boundaries of the piecewise formula
    std::vector<double> offsets;
    for (int i = 0; i < 400; ++i) {
        const double t = 0.05 + (pi - 0.1) * i / 399.0;
        if (std::abs(std::abs(std::sin(t + pi / 4)) - 0.5) < 0.02) continue;
        offsets.push_back(mod_pi(phi_left_inverse(phi(t), PhiInverse::paper) - t));
    }
    REQUIRE(offsets.size() > 100);
    const double c = offsets.front();
    for (double o : offsets) CHECK(circ_dist(o, c) < 1e-12);
    MESSAGE("paper variant offset " << c);
}

TEST_CASE("phi inverse names") {
    CHECK(parse_phi_inverse("exact") == PhiInverse::exact);
    CHECK(parse_phi_inverse("paper") == PhiInverse::paper);
    CHECK_THROWS_AS((void)parse_phi_inverse("other"), Error);
    CHECK(std::string(phi_inverse_name(PhiInverse::paper)) == "paper");
}
