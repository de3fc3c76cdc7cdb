#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrs/forward.hpp"
#include "lrs/profile.hpp"
#include "lrs/specfun.hpp"

namespace lrs {

// v_k = u_k / q(k). `plateau` supplies the width at x_meas.
[[nodiscard]] std::vector<cplx> normalize(const ModalMeasurementSet& m,
                                          const WidthProfile& plateau, const SourceSpec& src);

enum class UnwrapMode {
    nearest,    // |t_{i+1} - t_i| < pi/2
    increasing  // 0 <= t_{i+1} - t_i < pi, using that zeta increases with k
};

[[nodiscard]] const char* unwrap_mode_name(UnwrapMode m) noexcept;
[[nodiscard]] UnwrapMode parse_unwrap_mode(const std::string& s);

[[nodiscard]] std::vector<double> unwrap(const std::vector<double>& raw,
                                         UnwrapMode mode = UnwrapMode::nearest);

// floor((t2 k1 - t1 k2) / (pi (k2 - k1))) with k_i = k_{i,N}(x_meas) on the
// plateau of width h_plateau. A 1e-9 slack absorbs round-off on exact
// integers and negative values clamp to 0.
[[nodiscard]] int estimate_ell(double t1, double t2, double k1, double k2, double h_plateau, int N);

struct TriangularSystem {
    Eigen::MatrixXd T;
    Eigen::VectorXd d;
    Eigen::MatrixXd p;  // p(i, j) = sqrt|k_i^2 - k_j^2|, column 0 holds k_0
};

[[nodiscard]] TriangularSystem assemble_system(const std::vector<double>& k, double k0,
                                               const std::vector<double>& d);

// ||T||_1 ||T^-1||_1
[[nodiscard]] double condition_estimate(const TriangularSystem& sys);

struct StripSolution {
    Eigen::VectorXd V;
    std::vector<double> x_app;
    std::vector<int> negative_steps;  // indices with V_i < 0 (x_app not decreasing)
};

[[nodiscard]] StripSolution solve_strip(const TriangularSystem& sys, double x_meas);

struct Reconstruction {
    std::vector<double> x_app;
    std::vector<double> widths;             // N pi / k_i
    std::vector<std::pair<double, double>> samples;  // (x, h) sorted by x, anchors included
    double x_right = 0.0;
    double x_left = 0.0;
    bool envelope_applied = false;
    std::vector<std::string> warnings;
};

struct AnchorOverride {
    bool has_right = false;
    double right = 0.0;
    bool has_left = false;
    double left = 0.0;
};

// Right anchor takes h_max and left anchor h_min. Without overrides the
// anchors come from linear extrapolation of the two outermost samples.
[[nodiscard]] Reconstruction reconstruct(double h_min, double h_max, int N,
                                         const std::vector<double>& k,
                                         const std::vector<double>& x_app,
                                         const AnchorOverride& anchors = {});

[[nodiscard]] double eval_reconstruction(const Reconstruction& rec, double x);

// Indices (0-based) of `keep` points spread over 0..I-1; first and last kept.
[[nodiscard]] std::vector<int> thin_indices(int I, int keep);

template <class T>
[[nodiscard]] std::vector<T> thin_frequencies(const std::vector<T>& v, int keep) {
    std::vector<T> out;
    for (int i : thin_indices(static_cast<int>(v.size()), keep)) out.push_back(v[i]);
    return out;
}

[[nodiscard]] double linf_error(const Reconstruction& rec, const WidthProfile& truth);

}  // namespace lrs
