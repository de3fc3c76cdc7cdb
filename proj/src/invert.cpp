#include "lrs/invert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lrs/error.hpp"

namespace lrs {

std::vector<cplx> normalize(const ModalMeasurementSet& m, const WidthProfile& plateau,
                            const SourceSpec& src) {
    std::vector<cplx> v(m.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const cplx q = q_of_k(plateau, src, m.grid.N, m.grid.values[i], m.x_meas);
        v[i] = m.values[i] / q;
    }
    return v;
}

const char* unwrap_mode_name(UnwrapMode m) noexcept {
    return m == UnwrapMode::nearest ? "nearest" : "increasing";
}

UnwrapMode parse_unwrap_mode(const std::string& s) {
    if (s == "nearest") return UnwrapMode::nearest;
    if (s == "increasing") return UnwrapMode::increasing;
    throw Error(Errc::config, "unwrap mode must be 'nearest' or 'increasing', got '" + s + "'");
}

std::vector<double> unwrap(const std::vector<double>& raw, UnwrapMode mode) {
    std::vector<double> t(raw.size());
    if (raw.empty()) return t;
    t[0] = raw[0];
    for (std::size_t i = 1; i < raw.size(); ++i) {
        const double f = (t[i - 1] - raw[i]) / pi;
        double m;
        if (mode == UnwrapMode::nearest) {
            if (std::abs(f - std::floor(f) - 0.5) < 1e-9 / pi) {
                std::ostringstream os;
                os << "unwrap: step " << i << " is exactly pi/2 away from both candidates; "
                   << "use a finer frequency step";
                throw Error(Errc::unwrap_ambiguity, os.str());
            }
            m = std::round(f);
        } else {
            m = std::ceil(f);
        }
        t[i] = raw[i] + m * pi;
    }
    return t;
}

int estimate_ell(double t1, double t2, double k1, double k2, double h_plateau, int N) {
    const double c2 = std::pow(N * pi / h_plateau, 2);
    if (!(k1 * k1 > c2 && k2 * k2 > c2))
        throw Error(Errc::domain, "estimate_ell: k_N(x_meas) must be real at both frequencies");
    const double a = std::sqrt(k1 * k1 - c2);
    const double b = std::sqrt(k2 * k2 - c2);
    if (a == b) throw Error(Errc::degenerate_grid, "estimate_ell: k_{1,N} equals k_{2,N}");
    const double v = (t2 * a - t1 * b) / (pi * (b - a));
    return std::max(0, static_cast<int>(std::floor(v + 1e-9)));
}

TriangularSystem assemble_system(const std::vector<double>& k, double k0,
                                 const std::vector<double>& d) {
    const auto n = static_cast<Eigen::Index>(k.size());
    if (k.empty() || d.size() != k.size())
        throw Error(Errc::data_integrity, "assemble_system: need matching non-empty k and d");
    for (Eigen::Index i = 1; i < n; ++i) {
        if (!(d[i] > d[i - 1])) {
            std::ostringstream os;
            os << "assemble_system: d not strictly increasing at index " << i << " (" << d[i - 1]
               << " -> " << d[i] << ")";
            throw Error(Errc::data_integrity, os.str());
        }
        if (!(k[i] > k[i - 1])) throw Error(Errc::data_integrity, "assemble_system: k not increasing");
    }
    TriangularSystem s;
    s.p.resize(n, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        s.p(i, 0) = std::sqrt(std::abs(k[i] * k[i] - k0 * k0));
        for (Eigen::Index j = 0; j < n; ++j) s.p(i, j + 1) = std::sqrt(std::abs(k[i] * k[i] - k[j] * k[j]));
    }
    s.T = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s.T(i, 0) = s.p(i, 0);
        // mean of the rectangle bounds, weighted 1:3 toward the left end
        for (Eigen::Index c = 1; c <= i; ++c) s.T(i, c) = (s.p(i, c + 1) + 3.0 * s.p(i, c)) / 4.0;
    }
    s.d = Eigen::Map<const Eigen::VectorXd>(d.data(), n);
    return s;
}

double condition_estimate(const TriangularSystem& sys) {
    const auto n = sys.T.rows();
    const Eigen::MatrixXd inv =
        sys.T.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
    auto norm1 = [](const Eigen::MatrixXd& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); };
    return norm1(sys.T) * norm1(inv);
}

StripSolution solve_strip(const TriangularSystem& sys, double x_meas) {
    const auto n = sys.T.rows();
    StripSolution s;
    s.V.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double diag = sys.T(i, i);
        if (!(diag > 0.0)) throw Error(Errc::data_integrity, "solve_strip: non-positive diagonal");
        double acc = sys.d(i);
        for (Eigen::Index j = 0; j < i; ++j) acc -= sys.T(i, j) * s.V(j);
        s.V(i) = acc / diag;
    }
    double x = x_meas;
    for (Eigen::Index i = 0; i < n; ++i) {
        x -= s.V(i);
        s.x_app.push_back(x);
        if (s.V(i) < 0.0) s.negative_steps.push_back(static_cast<int>(i));
    }
    return s;
}

Reconstruction reconstruct(double h_min, double h_max, int N, const std::vector<double>& k,
                           const std::vector<double>& x_app, const AnchorOverride& anchors) {
    if (k.empty() || k.size() != x_app.size())
        throw Error(Errc::data_integrity, "reconstruct: need matching non-empty k and x_app");
    Reconstruction r;
    r.x_app = x_app;
    for (double kk : k) r.widths.push_back(N * pi / kk);
    const std::size_t n = k.size();

    auto extrapolate = [&](std::size_t a, std::size_t b, double target, const char* side) {
        const double dx = x_app[a] - x_app[b];
        const double dh = r.widths[a] - r.widths[b];
        const double slope = dh / dx;
        if (n < 2 || !(slope > 0.0) || !std::isfinite(slope)) {
            r.warnings.push_back(std::string("cannot extrapolate the ") + side +
                                 " anchor; using the outermost sample position");
            return x_app[a];
        }
        return x_app[a] + (target - r.widths[a]) / slope;
    };
    r.x_right = anchors.has_right ? anchors.right : extrapolate(0, n > 1 ? 1 : 0, h_max, "right");
    r.x_left = anchors.has_left ? anchors.left : extrapolate(n - 1, n > 1 ? n - 2 : 0, h_min, "left");
    const auto [mn, mx] = std::minmax_element(x_app.begin(), x_app.end());
    if (r.x_right < *mx) {
        r.x_right = *mx;
        r.warnings.push_back("right anchor moved to the largest x_app");
    }
    if (r.x_left > *mn) {
        r.x_left = *mn;
        r.warnings.push_back("left anchor moved to the smallest x_app");
    }

    r.samples.emplace_back(r.x_left, h_min);
    for (std::size_t i = 0; i < n; ++i) r.samples.emplace_back(x_app[i], r.widths[i]);
    r.samples.emplace_back(r.x_right, h_max);
    std::stable_sort(r.samples.begin(), r.samples.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < r.samples.size(); ++i) {
        if (r.samples[i].second < r.samples[i - 1].second) {
            r.samples[i].second = r.samples[i - 1].second;
            r.envelope_applied = true;
        }
    }
    if (r.envelope_applied)
        r.warnings.push_back("x_app not monotone: interpolant built on the monotone envelope");
    return r;
}

double eval_reconstruction(const Reconstruction& rec, double x) {
    const auto& s = rec.samples;
    // Anchors can coincide with a sample when they cannot be extrapolated;
    // the sample wins there.
    const auto [lo, hi] = std::equal_range(
        s.begin(), s.end(), std::pair<double, double>{x, 0.0},
        [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = lo; it != hi; ++it)
        if (it != s.begin() && it != s.end() - 1) return it->second;
    if (x <= s.front().first) return s.front().second;
    if (x >= s.back().first) return s.back().second;
    const auto it = std::upper_bound(s.begin(), s.end(), x,
                                     [](double v, const auto& p) { return v < p.first; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    if (b.first == a.first) return b.second;
    const double t = (x - a.first) / (b.first - a.first);
    return a.second + t * (b.second - a.second);
}

std::vector<int> thin_indices(int I, int keep) {
    if (keep < 2) throw Error(Errc::domain, "thin: keep must be at least 2");
    if (keep > I) throw Error(Errc::domain, "thin: keep exceeds the number of frequencies");
    std::vector<int> idx(static_cast<std::size_t>(keep));
    for (int j = 0; j < keep; ++j) idx[j] = (j * (I - 1) + keep - 2) / (keep - 1);
    return idx;
}

double linf_error(const Reconstruction& rec, const WidthProfile& truth) {
    const double lo = std::min(truth.support_lo, rec.samples.front().first);
    const double hi = std::max(truth.support_hi, rec.samples.back().first);
    constexpr int n = 10000;
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        e = std::max(e, std::abs(truth.h(x) - eval_reconstruction(rec, x)));
    }
    return e / truth.h_max;
}

}  // namespace lrs
