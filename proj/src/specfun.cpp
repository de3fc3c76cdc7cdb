#include "lrs/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lrs/error.hpp"
#include "lrs/profile.hpp"

namespace lrs {
namespace {

// Ai(0), -Ai'(0); Bi(0) = sqrt(3) Ai(0), Bi'(0) = -sqrt(3) Ai'(0).
constexpr double ai0 = 0.355028053887817239260063186004;
constexpr double aip0 = -0.258819403792806798405183560189;
constexpr double sqrt3 = 1.73205080756887729352744634151;
const double sqrt_pi = std::sqrt(pi);

// Expansion coefficients u_k, v_k of the large-argument forms.
constexpr int n_asym = 60;
struct AsymCoeffs {
    std::array<double, n_asym> u{}, v{};
    AsymCoeffs() {
        u[0] = v[0] = 1.0;
        for (int k = 1; k < n_asym; ++k) {
            u[k] = u[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) /
                   ((2.0 * k - 1) * 216.0 * k);
            v[k] = -(6.0 * k + 1) / (6.0 * k - 1) * u[k];
        }
    }
};
const AsymCoeffs& asym() {
    static const AsymCoeffs c;
    return c;
}

// Sums c_k s_k / z^k with s_k = sign^k, truncated at the smallest term.
double asym_sum(const std::array<double, n_asym>& c, double z, double sign) {
    double sum = c[0], term = 1.0, prev = std::numeric_limits<double>::infinity();
    double zk = 1.0;
    for (int k = 1; k < n_asym; ++k) {
        zk *= sign / z;
        term = c[k] * zk;
        if (std::abs(term) >= prev) break;
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Even- and odd-indexed alternating sums for the oscillatory side.
void asym_split(const std::array<double, n_asym>& c, double z, double& even, double& odd) {
    even = 0.0;
    odd = 0.0;
    double zk = 1.0, prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_asym; ++k) {
        const double term = c[k] * zk;
        if (k > 0 && std::abs(term) >= prev) break;
        const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        (k % 2 == 0 ? even : odd) += sgn * term;
        prev = std::abs(term);
        if (k > 1 && prev < 1e-18) break;
        zk /= z;
    }
}

struct Value {
    double y, yp;
};

// One Taylor step of y'' = x y from x0 by dx.
Value taylor_step(double x0, Value v, double dx) {
    double am1 = 0.0, a0 = v.y, a1 = v.yp;
    double y = a0 + a1 * dx, yp = a1;
    double pw = dx;  // dx^(n+1) for the coefficient a_{n+2}
    int quiet = 0;
    for (int n = 0; n < 80; ++n) {
        const double a2 = (x0 * a0 + am1) / ((n + 2.0) * (n + 1.0));
        const double ty = a2 * pw * dx;
        const double typ = (n + 2.0) * a2 * pw;
        y += ty;
        yp += typ;
        // x0 = 0 zeroes every third coefficient, so require a run of small terms.
        const bool small = std::abs(ty) <= 1e-18 * std::abs(y) && std::abs(typ) <= 1e-18 * std::abs(yp);
        quiet = small ? quiet + 1 : 0;
        if (n > 4 && quiet >= 3) break;
        am1 = a0;
        a0 = a1;
        a1 = a2;
        pw *= dx;
    }
    return {y, yp};
}

// Node tables on [-9, 8] with step 1/32. Ai on x > 0 is integrated backward
// from the asymptotic value at 8, where it is the dominant solution.
constexpr double node_step = 1.0 / 32.0;
constexpr int node_count = 17 * 32 + 1;
constexpr int node_zero = 9 * 32;

struct Tables {
    std::vector<Value> ai, bi;
    Tables() : ai(node_count), bi(node_count) {
        auto x_of = [](int j) { return airy_seam_negative + j * node_step; };
        ai[node_zero] = {ai0, aip0};
        bi[node_zero] = {sqrt3 * ai0, -sqrt3 * aip0};
        for (int j = node_zero; j > 0; --j) {
            ai[j - 1] = taylor_step(x_of(j), ai[j], -node_step);
            bi[j - 1] = taylor_step(x_of(j), bi[j], -node_step);
        }
        for (int j = node_zero; j + 1 < node_count; ++j)
            bi[j + 1] = taylor_step(x_of(j), bi[j], node_step);
        const AiryPair end = airy_asymptotic(airy_seam_positive);
        ai[node_count - 1] = {end.ai, end.aip};
        for (int j = node_count - 1; j > node_zero + 1; --j)
            ai[j - 1] = taylor_step(x_of(j), ai[j], -node_step);
    }
};
const Tables& tables() {
    static const Tables t;
    return t;
}

}  // namespace

AiryPair airy_asymptotic(double x) {
    const auto& c = asym();
    AiryPair r;
    if (x > 0.0) {
        const double q = std::pow(x, 0.25);
        const double z = 2.0 / 3.0 * x * std::sqrt(x);
        const double ea = std::exp(-z);
        r.ai = ea / (2.0 * sqrt_pi * q) * asym_sum(c.u, z, -1.0);
        r.aip = -q * ea / (2.0 * sqrt_pi) * asym_sum(c.v, z, -1.0);
        const double su = asym_sum(c.u, z, 1.0);
        const double sv = asym_sum(c.v, z, 1.0);
        const double log_scale = z - std::log(sqrt_pi);
        if (log_scale + std::log(q * std::abs(sv)) > std::log(std::numeric_limits<double>::max())) {
            r.bi = r.bip = std::numeric_limits<double>::max();
            r.overflow = true;
        } else {
            const double eb = std::exp(z);
            r.bi = eb / (sqrt_pi * q) * su;
            r.bip = q * eb / sqrt_pi * sv;
        }
        return r;
    }
    const double t = -x;
    const double q = std::pow(t, 0.25);
    const double z = 2.0 / 3.0 * t * std::sqrt(t);
    double ue, uo, ve, vo;
    asym_split(c.u, z, ue, uo);
    asym_split(c.v, z, ve, vo);
    const double ph = z - pi / 4.0;
    const double cs = std::cos(ph), sn = std::sin(ph);
    r.ai = (cs * ue + sn * uo) / (sqrt_pi * q);
    r.bi = (-sn * ue + cs * uo) / (sqrt_pi * q);
    r.aip = q / sqrt_pi * (sn * ve - cs * vo);
    r.bip = q / sqrt_pi * (cs * ve + sn * vo);
    return r;
}

AiryPair airy(double x) {
    if (!std::isfinite(x)) throw Error(Errc::domain, "airy: argument must be finite");
    if (x < airy_seam_negative || x > airy_seam_positive) return airy_asymptotic(x);
    const auto& tb = tables();
    int j = static_cast<int>(std::lround((x - airy_seam_negative) / node_step));
    if (j < 0) j = 0;
    if (j >= node_count) j = node_count - 1;
    const double xj = airy_seam_negative + j * node_step;
    const double dx = x - xj;
    const Value a = dx == 0.0 ? tb.ai[j] : taylor_step(xj, tb.ai[j], dx);
    const Value b = dx == 0.0 ? tb.bi[j] : taylor_step(xj, tb.bi[j], dx);
    return {a.y, b.y, a.yp, b.yp, false};
}

std::complex<double> phi(double x) {
    const double a = x + pi / 4.0;
    return std::sin(a) * std::complex<double>(std::cos(a), std::sin(a));
}

const char* phi_inverse_name(PhiInverse v) noexcept {
    return v == PhiInverse::exact ? "exact" : "paper";
}

PhiInverse parse_phi_inverse(const char* s) {
    const std::string v(s);
    if (v == "exact") return PhiInverse::exact;
    if (v == "paper") return PhiInverse::paper;
    throw Error(Errc::config, "phi inverse must be 'exact' or 'paper', got '" + v + "'");
}

double phi_left_inverse(std::complex<double> z, PhiInverse variant) {
    const double r = std::abs(z);
    if (!(r <= 1.25)) {
        std::ostringstream os;
        os << "phi_left_inverse: |z| = " << r << " exceeds 1.25";
        throw Error(Errc::off_image, os.str());
    }
    double th;
    if (variant == PhiInverse::exact) {
        // 1 + 2i phi(t) = exp(2i(t + pi/4))
        th = std::arg(std::complex<double>(1.0, 0.0) + std::complex<double>(0.0, 2.0) * z) / 2.0 -
             pi / 4.0;
    } else if (r < 0.5) {
        const double s = std::asin(r);
        th = z.real() >= 0.0 ? s : pi - s;
    } else {
        th = std::acos(std::max(-1.0, std::min(1.0, z.real() / r)));
    }
    th = std::fmod(th, pi);
    if (th < 0.0) th += pi;
    if (th >= pi) th -= pi;
    return th;
}

}  // namespace lrs
