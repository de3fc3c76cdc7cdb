#include "lrs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lrs/error.hpp"

namespace lrs {
namespace {

constexpr int window = 5;

double guard(double k, double cutoff) {
    return std::abs(k - cutoff) <= 1e-9 * cutoff ? cutoff * (1.0 + 1e-9) : k;
}

int peak_index(const SweepResult& s) {
    if (s.amp.size() < 3) throw Error(Errc::inconclusive_band, "sweep too short to locate a peak");
    const auto it = std::max_element(s.amp.begin(), s.amp.end());
    const int j = static_cast<int>(it - s.amp.begin());
    if (j == 0 || j + 1 == static_cast<int>(s.amp.size()))
        throw Error(Errc::inconclusive_band, "amplitude maximum sits on the sweep boundary");
    return j;
}

}  // namespace

SweepResult sweep(const WidthProfile& p, const SourceSpec& src, int N, double k_lo, double k_hi,
                  int count, double x_meas, Backend backend, const SynthOptions& opt) {
    if (count < 1) throw Error(Errc::domain, "sweep: count must be at least 1");
    const double c_lo = N * pi / p.h_max;
    const double c_hi = N * pi / p.h_min;
    if (count > 1 && !(k_lo < c_lo && k_hi > c_hi)) {
        std::ostringstream os;
        os << "sweep: band [" << k_lo << ", " << k_hi << "] does not straddle the cutoffs " << c_lo
           << " and " << c_hi;
        throw Error(Errc::inconclusive_band, os.str());
    }
    const WidthProfile section = flat_profile(p.h(x_meas));
    SweepResult r;
    for (int i = 0; i < count; ++i) {
        double k = count == 1 ? k_lo : k_lo + (k_hi - k_lo) * i / (count - 1);
        k = guard(guard(guard(k, c_lo), c_hi), section.h_max > 0 ? N * pi / section.h_max : k);
        cplx u;
        try {
            const bool in_band = k > c_lo && k < c_hi;
            switch (backend) {
                case Backend::fd: u = fd_oracle(p, src, N, k, x_meas, opt.fd); break;
                case Backend::simplified:
                    if (in_band) {
                        u = modal_data_simplified(p, src, N, k, x_meas, opt.policy);
                        break;
                    }
                    [[fallthrough]];
                case Backend::airy: u = modal_data_airy(p, src, N, k, x_meas, opt.policy); break;
            }
        } catch (const Error& e) {
            std::ostringstream os;
            os << "sweep at k = " << k;
            rethrow_with_context(e, os.str());
        }
        const double a = std::abs(u);
        if (!(a > 0.0) || !std::isfinite(a)) {
            std::ostringstream os;
            os << "sweep: non-positive or non-finite amplitude at k = " << k;
            throw Error(Errc::domain, os.str());
        }
        r.k.push_back(k);
        r.amp.push_back(a);
        r.ref.push_back(std::abs(green_app(section, N, k, x_meas, x_meas)));
    }
    return r;
}

double estimate_hmax(const SweepResult& s, int N) {
    const int j = peak_index(s);
    const double x0 = s.k[j - 1], x1 = s.k[j], x2 = s.k[j + 1];
    const double y0 = std::log(s.amp[j - 1]), y1 = std::log(s.amp[j]), y2 = std::log(s.amp[j + 1]);
    // vertex of the parabola through three points
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0);
    double k_hat = x1;
    if (curv < 0.0) {
        k_hat = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
        k_hat = std::clamp(k_hat, x0, x2);
    }
    return N * pi / k_hat;
}

ChangePoint detect_change_point(const SweepResult& s) {
    const int n = static_cast<int>(s.amp.size());
    if (static_cast<int>(s.ref.size()) != n) throw Error(Errc::domain, "sweep: reference curve missing");
    const int ip = peak_index(s);
    std::vector<double> r(n), slope(n > 0 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) r[i] = std::log(s.amp[i]) - std::log(s.ref[i]);
    for (int i = 0; i + 1 < n; ++i) slope[i] = std::abs(r[i + 1] - r[i]);

    const int first = ip + 1;
    const int c_lo = first + window;
    const int c_hi = n - 1 - window;
    if (c_lo > c_hi) throw Error(Errc::inconclusive, "sweep too short past the explosion");

    // Past the band the measurement follows the reference, so the residual
    // goes quiet: pick the window pair with the largest active/quiet ratio.
    constexpr double eps = 1e-3;
    std::vector<double> jumps;
    double best = 0.0;
    ChangePoint cp;
    for (int c = c_lo; c <= c_hi; ++c) {
        double left = 0.0, right = 0.0;
        for (int j = 0; j < window; ++j) {
            left += slope[c - 1 - j];
            right += slope[c + j];
        }
        left /= window;
        right /= window;
        jumps.push_back(std::abs(left - right));
        const double score = (left + eps) / (right + eps);
        if (score > best) {
            best = score;
            cp.index = c;
            cp.jump = left - right;
        }
    }
    std::nth_element(jumps.begin(), jumps.begin() + jumps.size() / 2, jumps.end());
    cp.threshold = std::max(3.0 * jumps[jumps.size() / 2], 1e-3);
    if (cp.index < 0 || !(cp.jump > cp.threshold)) {
        std::ostringstream os;
        os << "no change point above threshold (best jump " << cp.jump << ", threshold "
           << cp.threshold << ")";
        throw Error(Errc::inconclusive, os.str());
    }
    // slope[c-1] still spans the old regime, slope[c] the new one
    cp.k_hat = 0.5 * (s.k[cp.index - 1] + s.k[cp.index]);
    return cp;
}

double estimate_hmin(const SweepResult& s, int N) { return N * pi / detect_change_point(s).k_hat; }

}  // namespace lrs
