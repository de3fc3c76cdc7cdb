#pragma once

// Closed-form checks for the finite-difference oracle, shared by the unit
// tests and the acceptance run.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "lrs/forward.hpp"
#include "lrs/profile.hpp"

namespace fdcheck {

using lrs::cplx;

// Worst relative gap between the FD solution on a flat guide and the
// free modal Green function i exp(i k_N |x - s|) / (2 k_N), |x - s| <= 5.
inline double uniform_guide_error(double h, int N, double k) {
    const lrs::WidthProfile p = lrs::flat_profile(h);
    const double kn = std::sqrt(k * k - N * N * M_PI * M_PI / (h * h));
    const double s = 0.0;
    const lrs::FdField u = lrs::fd_solve(p, N, k, {{s, 1.0}});
    double worst = 0.0;
    for (int i = -500; i <= 500; ++i) {
        const double x = s + 5.0 * i / 500.0;
        const cplx want = cplx(0.0, 1.0) * std::exp(cplx(0.0, kn * std::abs(x - s))) / (2.0 * kn);
        worst = std::max(worst, std::abs(u.at(x) - want) / std::abs(want));
    }
    return worst;
}

// Reflection coefficient seen on the plateau: least-squares fit of
// A exp(i q x) + B exp(-i q x) to the field right of a source at -5, with q the
// discrete wavenumber of the three-point stencil. Returns |B| / |A|.
inline double pml_reflection(double h, int N, double k, double mesh_step = 1e-3) {
    const lrs::WidthProfile p = lrs::flat_profile(h);
    const double kn2 = k * k - N * N * M_PI * M_PI / (h * h);
    const double q = std::acos(1.0 - 0.5 * kn2 * mesh_step * mesh_step) / mesh_step;
    lrs::FdOptions opt;
    opt.mesh_step = mesh_step;
    const lrs::FdField u = lrs::fd_solve(p, N, k, {{-5.0, 1.0}}, opt);
    const int m = 2001;
    Eigen::MatrixXcd A(m, 2);
    Eigen::VectorXcd b(m);
    for (int i = 0; i < m; ++i) {
        const long j = std::lround((-3.0 + 10.0 * i / (m - 1) - u.x0) / u.dx);
        const double x = u.x0 + static_cast<double>(j) * u.dx;
        A(i, 0) = std::exp(cplx(0.0, q * x));
        A(i, 1) = std::exp(cplx(0.0, -q * x));
        b(i) = u.u[static_cast<std::size_t>(j)];
    }
    const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
    return std::abs(c(1)) / std::abs(c(0));
}

}  // namespace fdcheck
