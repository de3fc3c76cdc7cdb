#include "lrs/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "lrs/error.hpp"
#include "lrs/quadrature.hpp"
#include "lrs/specfun.hpp"

namespace lrs {
namespace {

constexpr cplx I1{0.0, 1.0};

double poly_eval(const std::vector<double>& c, double y) {
    double v = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) v = v * y + c[j];
    return v;
}

// Amplitude factor (xi / -k_N^2)^(1/4) of the Airy kernel. At the turning
// point both parts vanish; the ratio tends to c^(-2/3), c = 2 N^2 pi^2 h'/h^3.
double airy_weight(const WidthProfile& p, int n, double k, double y, double xi, double xs) {
    auto limit = [&]() {
        const double h = p.h(xs);
        const double c = 2.0 * n * n * pi * pi * p.h_prime(xs) / (h * h * h);
        if (!(c > 0.0) || !std::isfinite(c)) {
            std::ostringstream os;
            os << "green_app: kernel singular at the turning point x* = " << xs;
            throw Error(Errc::pole, os.str());
        }
        return std::pow(c, -1.0 / 6.0);
    };
    if (std::abs(xi) < 1e-6) return limit();
    const double ratio = xi / -local_wavenumber_sq(p.h(y), n, k);
    if (!(ratio > 0.0) || !std::isfinite(ratio)) return limit();
    return std::pow(ratio, 0.25);
}

double xi_from(const WidthProfile& p, int N, double k, double xs, double x) {
    const double I = phase_integral(p, N, k, xs, x);
    const double v = std::pow(1.5 * I, 2.0 / 3.0);
    return x > xs ? -v : v;
}

const char* provenance_kind(Backend b) {
    switch (b) {
        case Backend::airy: return "airy_model";
        case Backend::simplified: return "simplified_model";
        case Backend::fd: return "fd_oracle";
    }
    return "unknown";
}

}  // namespace

SourceSpec SourceSpec::scaled(double factor) const {
    SourceSpec s = *this;
    for (auto& f : s.interior)
        for (auto& c : f.fy) c *= factor;
    for (auto& b : s.top) b.amplitude *= factor;
    for (auto& b : s.bot) b.amplitude *= factor;
    return s;
}

double SourceSpec::leftmost() const {
    double x = std::numeric_limits<double>::infinity();
    for (const auto& f : interior) x = std::min(x, f.x);
    for (const auto& b : top) x = std::min(x, b.x);
    for (const auto& b : bot) x = std::min(x, b.x);
    return x;
}

SourceSpec default_sources(double x) {
    SourceSpec s;
    s.interior.push_back({x, {0.0, 1.0}});
    s.top.push_back({x, 1.0});
    return s;
}

ModalSourceCoeff modal_source(const SourceSpec& src, const WidthProfile& p, int n) {
    if (n < 0) throw Error(Errc::domain, "modal_source: mode index must be non-negative");
    ModalSourceCoeff g;
    g.n = n;
    for (const auto& f : src.interior) {
        const double h = p.h(f.x);
        auto integrand = [&](double y) { return poly_eval(f.fy, y) * eval_basis(p, n, f.x, y); };
        const double fn = integrate(integrand, 0.0, h, 1e-13);
        g.atoms.push_back({f.x, fn / std::sqrt(h)});
    }
    for (const auto& b : src.top) {
        const double h = p.h(b.x);
        const double hp = p.h_prime(b.x);
        const double w = eval_basis(p, n, b.x, h) * std::sqrt(1.0 + hp * hp) / std::sqrt(h);
        g.atoms.push_back({b.x, b.amplitude * w});
    }
    for (const auto& b : src.bot) {
        const double h = p.h(b.x);
        g.atoms.push_back({b.x, b.amplitude * eval_basis(p, n, b.x, 0.0) / std::sqrt(h)});
    }
    return g;
}

double xi_phase(const WidthProfile& p, int N, double k, double x, RootPolicy policy) {
    const double xs = resonant_point(p, N, k, policy);
    try {
        return xi_from(p, N, k, xs, x);
    } catch (const Error& e) {
        std::ostringstream os;
        os << "xi_phase between x* = " << xs << " and x = " << x;
        rethrow_with_context(e, os.str());
    }
}

cplx green_app(const WidthProfile& p, int n, double k, double x, double s, RootPolicy policy) {
    const ModeClass cls = classify_mode(p, n, k);
    if (cls != ModeClass::locally_resonant) {
        const double kx = std::abs(local_wavenumber(p, n, k, x));
        const double ks = std::abs(local_wavenumber(p, n, k, s));
        const double I = wkb_integral(p, n, k, s, x);
        const double amp = 1.0 / (2.0 * std::sqrt(kx * ks));
        if (cls == ModeClass::propagative) return I1 * amp * std::exp(I1 * I);
        return amp * std::exp(-I);
    }
    const double xs = resonant_point(p, n, k, policy);
    const double xi_x = xi_from(p, n, k, xs, x);
    const double xi_s = x == s ? xi_x : xi_from(p, n, k, xs, s);
    const double wx = airy_weight(p, n, k, x, xi_x, xs);
    const double ws = x == s ? wx : airy_weight(p, n, k, s, xi_s, xs);
    // Decaying Ai on the left point, outgoing i Ai + Bi on the right one.
    const double xi_left = x <= s ? xi_x : xi_s;
    const double xi_right = x <= s ? xi_s : xi_x;
    const AiryPair l = airy(xi_left);
    const AiryPair r = airy(xi_right);
    if (r.overflow) throw Error(Errc::domain, "green_app: Bi overflow on the evanescent side");
    return pi * wx * ws * l.ai * cplx(r.bi, r.ai);
}

cplx modal_data_airy(const WidthProfile& p, const SourceSpec& src, int N, double k,
                     double x_meas, RootPolicy policy) {
    const auto g = modal_source(src, p, N);
    cplx u = 0.0;
    for (const auto& a : g.atoms) u += a.w * green_app(p, N, k, x_meas, a.x, policy);
    return u;
}

cplx q_of_k(const WidthProfile& p, const SourceSpec& src, int N, double k, double x_meas) {
    const cplx kn = local_wavenumber(p, N, k, x_meas);
    if (kn.imag() != 0.0 || !(kn.real() > 0.0)) {
        std::ostringstream os;
        os << "q_of_k: k_N(x_meas) must be real positive, got " << kn;
        throw Error(Errc::domain, os.str());
    }
    const auto g = modal_source(src, p, N);
    cplx q = 0.0;
    double scale = 0.0;
    for (const auto& a : g.atoms) {
        q += a.w * std::exp(I1 * kn.real() * (a.x - x_meas));
        scale += std::abs(a.w);
    }
    q /= kn.real();
    scale /= kn.real();
    if (!(std::abs(q) > 1e-12 * scale)) {
        std::ostringstream os;
        os << "q_of_k: sources cancel at k = " << k << " (|q| = " << std::abs(q) << ")";
        throw Error(Errc::degenerate_source, os.str());
    }
    return q;
}

double zeta_of_k(const WidthProfile& p, int N, double k, double x_meas, RootPolicy policy) {
    const double xs = resonant_point(p, N, k, policy);
    if (!(x_meas > xs)) throw Error(Errc::domain, "zeta_of_k: x_meas must lie right of x*");
    return phase_integral(p, N, k, xs, x_meas);
}

cplx modal_data_simplified(const WidthProfile& p, const SourceSpec& src, int N, double k,
                           double x_meas, RootPolicy policy) {
    return q_of_k(p, src, N, k, x_meas) * phi(zeta_of_k(p, N, k, x_meas, policy));
}

cplx FdField::at(double x) const {
    const double f = (x - x0) / dx;
    if (f < 0.0 || f > static_cast<double>(u.size() - 1))
        throw Error(Errc::domain, "FdField::at: x outside the mesh");
    const auto i = std::min(static_cast<std::size_t>(f), u.size() - 2);
    const double t = f - static_cast<double>(i);
    return (1.0 - t) * u[i] + t * u[i + 1];
}

FdField fd_solve(const WidthProfile& p, int N, double k, const std::vector<DeltaAtom>& atoms,
                 const FdOptions& opt) {
    const PmlSpec& pml = opt.pml;
    if (!(opt.mesh_step > 0.0) || !(pml.outer_lo < pml.inner_lo && pml.inner_lo < pml.inner_hi &&
                                    pml.inner_hi < pml.outer_hi))
        throw Error(Errc::domain, "fd_solve: invalid mesh step or PML layout");
    const long n = std::lround((pml.outer_hi - pml.outer_lo) / opt.mesh_step) + 1;
    const double dx = (pml.outer_hi - pml.outer_lo) / static_cast<double>(n - 1);
    auto xof = [&](double i) { return pml.outer_lo + i * dx; };
    auto dist = [&](double x) {
        if (x >= pml.inner_hi) return x - pml.inner_hi;
        if (x <= pml.inner_lo) return pml.inner_lo - x;
        return 0.0;
    };
    const bool stretch = pml.form == PmlForm::stretched;
    // alpha = -k dist; stretch factor 1 - i alpha / k.
    auto sfac = [&](double x) { return stretch ? cplx(1.0, dist(x)) : cplx(1.0, 0.0); };

    const auto m = static_cast<std::size_t>(n);
    std::vector<cplx> rhs(m, 0.0);
    for (const auto& a : atoms) {
        const long j = std::lround((a.x - pml.outer_lo) / dx);
        if (j <= 0 || j >= n - 1) throw Error(Errc::domain, "fd_solve: source outside the mesh");
        rhs[static_cast<std::size_t>(j)] -= a.w / dx;
    }

    // Thomas sweep over the interior nodes 1..n-2 (Dirichlet ends).
    std::vector<cplx> cp(m, 0.0), dp(m, 0.0);
    const double inv2 = 1.0 / (dx * dx);
    cplx prev_c = 0.0, prev_d = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double x = xof(static_cast<double>(i));
        const cplx si = sfac(x);
        const cplx lo = inv2 / (si * sfac(x - 0.5 * dx));
        const cplx up = inv2 / (si * sfac(x + 0.5 * dx));
        cplx kap2 = local_wavenumber_sq(p.h(x), N, k);
        if (!stretch) kap2 += I1 * k * (-k * dist(x));
        const cplx diag = kap2 - lo - up;
        const cplx piv = diag - lo * prev_c;
        if (!(std::abs(piv) > 1e-300) || !std::isfinite(piv.real()) || !std::isfinite(piv.imag())) {
            std::ostringstream os;
            os << "fd_solve: zero pivot at x = " << x << " (k = " << k << ")";
            throw Error(Errc::solver, os.str());
        }
        cp[i] = (i + 2 < m) ? up / piv : 0.0;
        dp[i] = (rhs[i] - lo * prev_d) / piv;
        prev_c = cp[i];
        prev_d = dp[i];
    }
    FdField out;
    out.x0 = pml.outer_lo;
    out.dx = dx;
    out.u.assign(m, 0.0);
    for (std::size_t i = m - 2; i >= 1; --i) {
        out.u[i] = dp[i] - cp[i] * out.u[i + 1];
        if (i == 1) break;
    }
    return out;
}

cplx fd_oracle(const WidthProfile& p, const SourceSpec& src, int N, double k, double x_meas,
               const FdOptions& opt) {
    if (opt.mesh_step > 1e-3) throw Error(Errc::domain, "fd_oracle: mesh_step must be <= 1e-3");
    return fd_solve(p, N, k, modal_source(src, p, N).atoms, opt).at(x_meas);
}

const char* backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::airy: return "airy";
        case Backend::simplified: return "simplified";
        case Backend::fd: return "fd";
    }
    return "unknown";
}

Backend parse_backend(const std::string& s) {
    if (s == "airy") return Backend::airy;
    if (s == "simplified") return Backend::simplified;
    if (s == "fd") return Backend::fd;
    throw Error(Errc::config, "backend must be airy, simplified or fd, got '" + s + "'");
}

ModalMeasurementSet synth_measurements(const WidthProfile& p, const SourceSpec& src, int N,
                                       const FrequencyGrid& grid, double x_meas, Backend backend,
                                       const SynthOptions& opt) {
    ModalMeasurementSet m;
    m.grid = grid;
    m.x_meas = x_meas;
    m.provenance.kind = provenance_kind(backend);
    m.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double k = grid.values[i];
        try {
            switch (backend) {
                case Backend::airy: m.values[i] = modal_data_airy(p, src, N, k, x_meas, opt.policy); break;
                case Backend::simplified:
                    m.values[i] = modal_data_simplified(p, src, N, k, x_meas, opt.policy);
                    break;
                case Backend::fd: m.values[i] = fd_oracle(p, src, N, k, x_meas, opt.fd); break;
            }
        } catch (const Error& e) {
            std::ostringstream os;
            os.precision(12);
            os << "frequency index " << i << " (k = " << k << ")";
            rethrow_with_context(e, os.str());
        }
    }
    return m;
}

ModalMeasurementSet add_noise(const ModalMeasurementSet& m, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw Error(Errc::domain, "add_noise: sigma must be non-negative");
    ModalMeasurementSet out = m;
    out.provenance.base = m.provenance.kind == "noisy" ? m.provenance.base : m.provenance.kind;
    out.provenance.kind = "noisy";
    out.provenance.sigma = sigma;
    out.provenance.seed = seed;
    if (sigma == 0.0) return out;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, sigma / std::sqrt(2.0));
    for (auto& v : out.values) {
        const double re = nd(gen);
        const double im = nd(gen);
        v += cplx(re, im);
    }
    return out;
}

}  // namespace lrs
