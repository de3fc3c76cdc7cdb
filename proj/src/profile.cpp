#include "lrs/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lrs/error.hpp"

namespace lrs {
namespace {

constexpr double g1 = 3e-6;
constexpr double g3 = 5e-5;
constexpr double g5 = 0.01 / 30.0;
constexpr double g6 = 25e-4;
constexpr double g7 = 5e-4;
constexpr double g2 = 8192.0 / 5.0 * 1e-6;
// Plateau of h2 taken from continuity at |x| = 4: g3 * p(4) = g3 * 512/15.
constexpr double g4 = g3 * 512.0 / 15.0;

double p2(double a) { return a * a * a * (a * a / 5.0 - 2.0 * a + 16.0 / 3.0); }
double p2_prime(double a) { return a * a * (a - 4.0) * (a - 4.0); }

struct SlopeStats {
    double lo = 0.0, hi = 0.0, eta = 0.0, min_slope = 0.0;
    bool monotone = false;
};

// Dense sampling of the support; a 1e-6 margin keeps corner singularities
// (h4 at x = -4) out of the slope statistics.
SlopeStats sample_slopes(const std::function<double(double)>& h,
                         const std::function<double(double)>& hp, double lo, double hi) {
    constexpr int n = 100000;
    constexpr double margin = 1e-6;
    SlopeStats s;
    s.lo = std::min(h(lo), h(hi));
    s.hi = std::max(h(lo), h(hi));
    s.min_slope = std::numeric_limits<double>::infinity();
    bool nonneg = true;
    bool prev_flat = false;
    bool flat_run = false;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = h(x);
        s.lo = std::min(s.lo, v);
        s.hi = std::max(s.hi, v);
        if (x <= lo + margin || x >= hi - margin) continue;
        const double d = hp(x);
        s.eta = std::max(s.eta, std::abs(d));
        s.min_slope = std::min(s.min_slope, d);
        if (d < 0.0) nonneg = false;
        const bool flat = d <= 0.0;
        if (flat && prev_flat) flat_run = true;
        prev_flat = flat;
    }
    s.monotone = nonneg && !flat_run && h(hi) > h(lo);
    return s;
}

WidthProfile finish(std::string id, std::function<double(double)> h,
                    std::function<double(double)> hp, double lo, double hi) {
    const SlopeStats s = sample_slopes(h, hp, lo, hi);
    WidthProfile p;
    p.id = std::move(id);
    p.h = std::move(h);
    p.h_prime = std::move(hp);
    p.support_lo = lo;
    p.support_hi = hi;
    p.h_min = s.lo;
    p.h_max = s.hi;
    p.eta = s.eta;
    p.theta = s.eta > 0.0 ? std::max(0.0, s.min_slope) / s.eta : 0.0;
    p.monotone = s.monotone;
    p.kinks = {lo, hi};
    return p;
}

// Extremes of piecewise-linear parts sit on the kinks, which sampling may miss.
void widen_to_kinks(WidthProfile& p) {
    for (double x : p.kinks) {
        p.h_min = std::min(p.h_min, p.h(x));
        p.h_max = std::max(p.h_max, p.h(x));
    }
}

}  // namespace

WidthProfile builtin_profile(std::string_view id) {
    if (id == "h1") {
        auto h = [](double x) {
            if (x < -4.0) return 0.1 - g2;
            if (x > 4.0) return 0.1 + g2;
            const double x2 = x * x;
            return 0.1 + g1 * x * (x2 * x2 / 5.0 - 32.0 * x2 / 3.0 + 256.0);
        };
        auto hp = [](double x) {
            if (x < -4.0 || x > 4.0) return 0.0;
            const double t = x * x - 16.0;
            return g1 * t * t;
        };
        return finish("h1", h, hp, -4.0, 4.0);
    }
    if (id == "h2") {
        auto h = [](double x) {
            if (x < -4.0) return 0.1 - g4;
            if (x > 4.0) return 0.1 + g4;
            return x < 0.0 ? 0.1 - g3 * p2(-x) : 0.1 + g3 * p2(x);
        };
        auto hp = [](double x) {
            if (x < -4.0 || x > 4.0) return 0.0;
            return g3 * p2_prime(std::abs(x));
        };
        return finish("h2", h, hp, -4.0, 4.0);
    }
    if (id == "h3") {
        auto h = [](double x) { return 0.1 + g5 * std::clamp(x, -4.0, 4.0); };
        auto hp = [](double x) { return (x < -4.0 || x > 4.0) ? 0.0 : g5; };
        return finish("h3", h, hp, -4.0, 4.0);
    }
    if (id == "h4") {
        auto h = [](double x) {
            const double c = std::clamp(x, -4.0, 4.0);
            return 0.1 - 4.0 * g5 + 4.0 * g5 * std::sqrt(c + 4.0) / std::sqrt(2.0);
        };
        auto hp = [](double x) {
            if (x <= -4.0) return x == -4.0 ? std::numeric_limits<double>::infinity() : 0.0;
            if (x > 4.0) return 0.0;
            return std::sqrt(2.0) * g5 / std::sqrt(x + 4.0);
        };
        return finish("h4", h, hp, -4.0, 4.0);
    }
    if (id == "h6") {
        auto h = [](double x) {
            if (x >= -5.0 && x <= 0.0) return 0.1 - g7 * (x + 5.0);
            if (x > 0.0 && x <= 4.0) return 0.1 + g6 / 4.0 * (x - 4.0);
            return 0.1;
        };
        auto hp = [](double x) {
            if (x >= -5.0 && x <= 0.0) return -g7;
            if (x > 0.0 && x <= 4.0) return g6 / 4.0;
            return 0.0;
        };
        auto p = finish("h6", h, hp, -5.0, 4.0);
        p.kinks = {-5.0, 0.0, 4.0};
        widen_to_kinks(p);
        return p;
    }
    throw Error(Errc::unknown_profile, "unknown profile id '" + std::string(id) + "'");
}

WidthProfile custom_profile(std::string id, std::function<double(double)> h,
                            std::function<double(double)> h_prime, double lo, double hi) {
    if (!(lo < hi)) throw Error(Errc::domain, "custom profile: support must satisfy lo < hi");
    auto p = finish(std::move(id), std::move(h), std::move(h_prime), lo, hi);
    if (!(p.h_min > 0.0)) throw Error(Errc::domain, "custom profile: width must stay positive");
    return p;
}

WidthProfile piecewise_polynomial_profile(std::string id, std::vector<PolyPiece> pieces) {
    if (pieces.empty()) throw Error(Errc::domain, "piecewise profile: no pieces");
    std::sort(pieces.begin(), pieces.end(),
              [](const PolyPiece& a, const PolyPiece& b) { return a.x0 < b.x0; });
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].x0 < pieces[i].x1) || pieces[i].coeffs.empty())
            throw Error(Errc::domain, "piecewise profile: piece " + std::to_string(i) +
                                          " needs x0 < x1 and coefficients");
        if (i > 0 && std::abs(pieces[i].x0 - pieces[i - 1].x1) > 1e-12)
            throw Error(Errc::domain, "piecewise profile: pieces must be contiguous");
    }
    auto eval = [](const PolyPiece& pc, double x, bool deriv) {
        double v = 0.0;
        for (std::size_t j = pc.coeffs.size(); j-- > 0;) {
            if (deriv) {
                if (j == 0) break;
                v = v * x + static_cast<double>(j) * pc.coeffs[j];
            } else {
                v = v * x + pc.coeffs[j];
            }
        }
        return v;
    };
    auto locate = [pieces](double x) -> const PolyPiece* {
        for (const auto& pc : pieces)
            if (x <= pc.x1) return &pc;
        return &pieces.back();
    };
    const double lo = pieces.front().x0;
    const double hi = pieces.back().x1;
    const double left = eval(pieces.front(), lo, false);
    const double right = eval(pieces.back(), hi, false);
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        const double a = eval(pieces[i - 1], pieces[i].x0, false);
        const double b = eval(pieces[i], pieces[i].x0, false);
        if (std::abs(a - b) > 1e-12)
            throw Error(Errc::domain, "piecewise profile: discontinuity at x = " +
                                          std::to_string(pieces[i].x0));
    }
    auto h = [=](double x) {
        if (x <= lo) return left;
        if (x >= hi) return right;
        return eval(*locate(x), x, false);
    };
    auto hp = [=](double x) {
        if (x < lo || x > hi) return 0.0;
        return eval(*locate(x), x, true);
    };
    auto p = custom_profile(std::move(id), h, hp, lo, hi);
    p.kinks.clear();
    p.kinks.push_back(lo);
    for (const auto& pc : pieces) p.kinks.push_back(pc.x1);
    widen_to_kinks(p);
    return p;
}

WidthProfile flat_profile(double w) {
    if (!(w > 0.0)) throw Error(Errc::domain, "flat profile: width must be positive");
    WidthProfile p;
    p.id = "flat";
    p.h = [w](double) { return w; };
    p.h_prime = [](double) { return 0.0; };
    p.h_min = p.h_max = w;
    return p;
}

double eval_basis(const WidthProfile& p, int n, double x, double y) {
    if (n < 0) throw Error(Errc::domain, "mode index must be non-negative");
    const double h = p.h(x);
    const double tol = 1e-14 * h;
    if (y < -tol || y > h + tol) {
        std::ostringstream os;
        os << "eval_basis: y = " << y << " outside [0, " << h << "]";
        throw Error(Errc::domain, os.str());
    }
    if (n == 0) return 1.0 / std::sqrt(h);
    return std::sqrt(2.0 / h) * std::cos(n * pi * y / h);
}

double local_wavenumber_sq(double h, int n, double k) {
    const double c = n * pi / h;
    return (k - c) * (k + c);
}

std::complex<double> local_wavenumber(const WidthProfile& p, int n, double k, double x) {
    const double s = local_wavenumber_sq(p.h(x), n, k);
    return s >= 0.0 ? std::complex<double>(std::sqrt(s), 0.0)
                    : std::complex<double>(0.0, std::sqrt(-s));
}

const char* mode_class_name(ModeClass c) noexcept {
    switch (c) {
        case ModeClass::propagative: return "propagative";
        case ModeClass::evanescent: return "evanescent";
        case ModeClass::locally_resonant: return "locally_resonant";
    }
    return "unknown";
}

ModeClass classify_mode(const WidthProfile& p, int n, double k) {
    if (!(k > 0.0)) throw Error(Errc::domain, "classify_mode: k must be positive");
    if (n == 0) return ModeClass::propagative;
    const double lo = n * pi / p.h_max;
    const double hi = n * pi / p.h_min;
    const double tol = 1e-12 * k;
    if (std::abs(k - lo) <= tol || std::abs(k - hi) <= tol) {
        std::ostringstream os;
        os.precision(17);
        os << "k = " << k << " sits on a cutoff of mode " << n << " (delta(k) = 0)";
        throw Error(Errc::ill_posed_frequency, os.str());
    }
    if (k > hi) return ModeClass::propagative;
    if (k < lo) return ModeClass::evanescent;
    return ModeClass::locally_resonant;
}

double resonant_point(const WidthProfile& p, int N, double k, RootPolicy policy) {
    if (classify_mode(p, N, k) != ModeClass::locally_resonant) {
        std::ostringstream os;
        os << "resonant_point: mode " << N << " is not locally resonant at k = " << k;
        throw Error(Errc::out_of_band, os.str());
    }
    const double target = N * pi / k;
    auto f = [&](double x) { return p.h(x) - target; };

    // Bracket every crossing on a dense grid, then bisect the chosen one.
    constexpr int samples = 4000;
    const double lo = p.support_lo, hi = p.support_hi;
    std::vector<std::pair<double, double>> brackets;
    double xa = lo, fa = f(lo);
    for (int i = 1; i <= samples; ++i) {
        const double xb = lo + (hi - lo) * i / samples;
        const double fb = f(xb);
        if (fa == 0.0) {
            brackets.emplace_back(xa, xa);
        } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
            brackets.emplace_back(xa, xb);
        }
        xa = xb;
        fa = fb;
    }
    if (fa == 0.0) brackets.emplace_back(xa, xa);
    if (brackets.empty())
        throw Error(Errc::out_of_band, "resonant_point: no crossing of h = N pi / k on support");
    if (brackets.size() > 1 && policy == RootPolicy::unique) {
        std::ostringstream os;
        os << "resonant_point: " << brackets.size() << " crossings of h = N pi / k (k = " << k
           << "); profile is not monotone";
        throw Error(Errc::ambiguity, os.str());
    }
    auto [a, b] = brackets.back();
    double fl = f(a);
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) {
            a = b = m;
            break;
        }
        if ((fm < 0.0) == (fl < 0.0)) {
            a = m;
            fl = fm;
        } else {
            b = m;
        }
    }
    const double xs = 0.5 * (a + b);
    const double d = p.h_prime(xs);
    if (!(std::abs(d) > 1e-15)) {
        std::ostringstream os;
        os << "resonant_point: h'(x*) = " << d << " at x* = " << xs << " (non-simple resonance)";
        throw Error(Errc::multiple_resonance, os.str());
    }
    return xs;
}

double delta_of_k(const WidthProfile& p, double k) {
    if (!(k > 0.0)) throw Error(Errc::domain, "delta_of_k: k must be positive");
    const int nmax = static_cast<int>(std::ceil(2.0 * k * p.h_max / pi));
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= nmax; ++n) {
        best = std::min(best, std::sqrt(std::abs(local_wavenumber_sq(p.h_min, n, k))));
        best = std::min(best, std::sqrt(std::abs(local_wavenumber_sq(p.h_max, n, k))));
    }
    return best;
}

FrequencyGrid make_grid(double a, double b, int I, int N, const WidthProfile& p) {
    if (N < 1) throw Error(Errc::domain, "make_grid: N must be at least 1");
    if (I < 1) throw Error(Errc::domain, "make_grid: I must be at least 1");
    if (I == 1 ? a != b : !(a < b)) throw Error(Errc::domain, "make_grid: need a < b (or a == b for I = 1)");
    FrequencyGrid g;
    g.N = N;
    g.k0 = N * pi / p.h_max;
    g.k_end = N * pi / p.h_min;
    if (!(a > g.k0 && b < g.k_end)) {
        std::ostringstream os;
        os.precision(12);
        os << "make_grid: [" << a << ", " << b << "] not inside the resonant band (" << g.k0
           << ", " << g.k_end << ")";
        throw Error(Errc::out_of_band, os.str());
    }
    g.values.resize(static_cast<std::size_t>(I));
    g.rho = I > 1 ? (b - a) / (I - 1) : 0.0;
    for (int i = 0; i < I; ++i) g.values[i] = a + g.rho * i;
    g.values.back() = b;
    g.delta_k = std::min(std::sqrt(a * a - g.k0 * g.k0), std::sqrt(g.k_end * g.k_end - b * b));
    return g;
}

}  // namespace lrs
