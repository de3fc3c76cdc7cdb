#pragma once

#include <vector>

#include "lrs/forward.hpp"
#include "lrs/profile.hpp"

namespace lrs {

struct SweepResult {
    std::vector<double> k;
    std::vector<double> amp;  // |u_{k,N}(x_meas)|
    std::vector<double> ref;  // |G_N(x_meas, x_meas)| of a uniform guide with the section width
};

// Broadband sweep across the N-th band. Frequencies within 1e-9 (relative)
// of a cutoff are nudged by 1e-9 before evaluation.
[[nodiscard]] SweepResult sweep(const WidthProfile& p, const SourceSpec& src, int N, double k_lo,
                                double k_hi, int count, double x_meas, Backend backend,
                                const SynthOptions& opt = {});

// N pi / k_peak, the peak refined by a parabola through log-amplitudes.
[[nodiscard]] double estimate_hmax(const SweepResult& s, int N);

struct ChangePoint {
    int index = -1;        // first sample past the change
    double k_hat = 0.0;
    double jump = 0.0;
    double threshold = 0.0;
};

// Slope-jump detector on r = log(amp / ref) past the explosion. With L and R
// the mean |slope| over 5 slopes either side of a candidate, the change point
// maximises (L + 1e-3) / (R + 1e-3); it is accepted when L - R exceeds
// max(3 median |L - R|, 1e-3) over all candidates.
[[nodiscard]] ChangePoint detect_change_point(const SweepResult& s);

[[nodiscard]] double estimate_hmin(const SweepResult& s, int N);

}  // namespace lrs
