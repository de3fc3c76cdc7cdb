#include "lrs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lrs/error.hpp"

namespace lrs {
namespace {

double abs_kn(const WidthProfile& p, int n, double k, double x) {
    return std::sqrt(std::abs(local_wavenumber_sq(p.h(x), n, k)));
}

// Integrates over [a, b] (a < b) split at the kinks strictly inside.
double split_integral(const WidthProfile& p, const std::function<double(double)>& f, double a,
                      double b) {
    std::vector<double> cuts{a};
    for (double c : p.kinks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += integrate(f, cuts[i], cuts[i + 1]);
    return sum;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    // Boost's tolerance is relative to the L1 norm; the acceptance test below
    // is absolute for small integrals, so the requested tolerance is rescaled.
    // Deep recursion on rounding noise inflates the summed error estimate,
    // hence the depth is raised only while the estimate is not acceptable.
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0;
    double l1 = 0.0;
    double v = gk::integrate(f, a, b, 0, 0.0, &err, &l1);
    if (std::isfinite(v) && err <= tol * std::max(1.0, std::abs(v))) return v;
    const double rel = l1 > 0.0 ? 0.1 * tol * std::max(1.0, l1) / l1 : 0.1 * tol;
    for (unsigned depth : {8u, 14u, 20u}) {
        v = gk::integrate(f, a, b, depth, rel, &err);
        if (std::isfinite(v) && err <= tol * std::max(1.0, std::abs(v))) return v;
    }
    std::ostringstream os;
    os.precision(15);
    os << "quadrature did not converge on [" << a << ", " << b << "]: value " << v
       << ", error estimate " << err;
    throw Error(Errc::quadrature, os.str());
}

double phase_integral(const WidthProfile& p, int N, double k, double xs, double x) {
    if (x == xs) return 0.0;
    const double side = x > xs ? 1.0 : -1.0;
    const double len = std::abs(x - xs);
    double w = std::min(0.5, len);
    for (double c : p.kinks) {
        const double d = side * (c - xs);
        if (d > 1e-9 && d < w) w = d;
    }
    auto g = [&](double t) { return abs_kn(p, N, k, xs + side * t * t) * 2.0 * t; };
    double sum = integrate(g, 0.0, std::sqrt(w));
    if (len > w) {
        auto f = [&](double y) { return abs_kn(p, N, k, y); };
        const double a = xs + side * w;
        sum += side > 0 ? split_integral(p, f, a, x) : split_integral(p, f, x, a);
    }
    return sum;
}

double wkb_integral(const WidthProfile& p, int n, double k, double a, double b) {
    if (a > b) std::swap(a, b);
    if (a == b) return 0.0;
    auto f = [&](double y) { return abs_kn(p, n, k, y); };
    return split_integral(p, f, a, b);
}

}  // namespace lrs
