#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace lrs {

inline constexpr double pi = 3.14159265358979323846;

// Top-boundary width h(x) of the guide; the bottom is flat at y = 0.
struct WidthProfile {
    std::string id;
    std::function<double(double)> h;
    std::function<double(double)> h_prime;
    double support_lo = 0.0;  // h is constant outside [support_lo, support_hi]
    double support_hi = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    double eta = 0.0;    // sup |h'|
    double theta = 0.0;  // inf h' / eta over the support interior
    bool monotone = false;
    std::vector<double> kinks;  // points where h' jumps (support ends included)

    [[nodiscard]] double operator()(double x) const { return h(x); }
};

// Piece of a custom profile: h(x) = sum_j coeffs[j] * x^j on [x0, x1].
struct PolyPiece {
    double x0 = 0.0;
    double x1 = 0.0;
    std::vector<double> coeffs;
};

[[nodiscard]] WidthProfile builtin_profile(std::string_view id);

// Builds a profile from callables; bounds, eta, theta and monotonicity come
// from 1e5-point sampling of the support.
[[nodiscard]] WidthProfile custom_profile(std::string id, std::function<double(double)> h,
                                          std::function<double(double)> h_prime, double lo,
                                          double hi);

// Continuous piecewise polynomial, held constant beyond the outer pieces.
[[nodiscard]] WidthProfile piecewise_polynomial_profile(std::string id,
                                                        std::vector<PolyPiece> pieces);

// Uniform guide of width w (support collapsed to the point 0).
[[nodiscard]] WidthProfile flat_profile(double w);

[[nodiscard]] double eval_basis(const WidthProfile& p, int n, double x, double y);

// sqrt(k^2 - n^2 pi^2 / h(x)^2) with Re >= 0 and Im >= 0.
[[nodiscard]] std::complex<double> local_wavenumber(const WidthProfile& p, int n, double k,
                                                    double x);

// k_n(x)^2 as a signed real, written to limit cancellation near a cutoff.
[[nodiscard]] double local_wavenumber_sq(double h, int n, double k);

enum class ModeClass { propagative, evanescent, locally_resonant };

[[nodiscard]] const char* mode_class_name(ModeClass c) noexcept;

[[nodiscard]] ModeClass classify_mode(const WidthProfile& p, int n, double k);

enum class RootPolicy {
    unique,     // monotone profiles: more than one crossing is an error
    rightmost,  // the crossing seen first from a measurement on the right
};

[[nodiscard]] double resonant_point(const WidthProfile& p, int N, double k,
                                    RootPolicy policy = RootPolicy::unique);

[[nodiscard]] double delta_of_k(const WidthProfile& p, double k);

struct FrequencyGrid {
    std::vector<double> values;
    double rho = 0.0;
    int N = 1;
    double k0 = 0.0;       // N pi / h_max
    double k_end = 0.0;    // N pi / h_min, i.e. k_{I+1}
    double delta_k = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

[[nodiscard]] FrequencyGrid make_grid(double a, double b, int I, int N, const WidthProfile& p);

}  // namespace lrs
