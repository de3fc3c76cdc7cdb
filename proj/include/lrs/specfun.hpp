#pragma once

#include <complex>

namespace lrs {

// Ai, Bi and their derivatives at a real argument. Bi saturates at the
// largest double for large positive x, with `overflow` raised.
struct AiryPair {
    double ai = 0.0;
    double bi = 0.0;
    double aip = 0.0;
    double bip = 0.0;
    bool overflow = false;
};

[[nodiscard]] AiryPair airy(double x);

// Seams between the tabulated Taylor region and the asymptotic expansions.
inline constexpr double airy_seam_negative = -9.0;
inline constexpr double airy_seam_positive = 8.0;

// Asymptotic expansions only; exposed so the seams can be checked.
[[nodiscard]] AiryPair airy_asymptotic(double x);

// sin(x + pi/4) exp(i(x + pi/4)), pi-periodic.
[[nodiscard]] std::complex<double> phi(double x);

enum class PhiInverse { exact, paper };

[[nodiscard]] const char* phi_inverse_name(PhiInverse v) noexcept;
[[nodiscard]] PhiInverse parse_phi_inverse(const char* s);

// Left inverse of phi modulo pi, result in [0, pi). Throws off_image for |z| > 1.25.
[[nodiscard]] double phi_left_inverse(std::complex<double> z, PhiInverse variant = PhiInverse::exact);

}  // namespace lrs
