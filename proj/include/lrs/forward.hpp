#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lrs/profile.hpp"

namespace lrs {

using cplx = std::complex<double>;

// f(x, y) = delta(x - x) * sum_j fy[j] y^j
struct InteriorSource {
    double x = 0.0;
    std::vector<double> fy;
};

struct BoundarySource {
    double x = 0.0;
    double amplitude = 1.0;
};

struct SourceSpec {
    std::vector<InteriorSource> interior;
    std::vector<BoundarySource> top;
    std::vector<BoundarySource> bot;

    [[nodiscard]] SourceSpec scaled(double factor) const;
    [[nodiscard]] double leftmost() const;
};

// f = delta_x(x) y, b_top = delta_x(x), b_bot = 0.
[[nodiscard]] SourceSpec default_sources(double x = 6.0);

struct DeltaAtom {
    double x = 0.0;
    cplx w;
};

struct ModalSourceCoeff {
    int n = 0;
    std::vector<DeltaAtom> atoms;
};

[[nodiscard]] ModalSourceCoeff modal_source(const SourceSpec& src, const WidthProfile& p, int n);

// Langer variable; zero at the turning point, positive on its evanescent side.
[[nodiscard]] double xi_phase(const WidthProfile& p, int N, double k, double x,
                              RootPolicy policy = RootPolicy::unique);

// Mode-diagonal approximate Green function (propagative, evanescent or Airy kernel).
[[nodiscard]] cplx green_app(const WidthProfile& p, int n, double k, double x, double s,
                             RootPolicy policy = RootPolicy::unique);

[[nodiscard]] cplx modal_data_airy(const WidthProfile& p, const SourceSpec& src, int N, double k,
                                   double x_meas, RootPolicy policy = RootPolicy::unique);

[[nodiscard]] cplx q_of_k(const WidthProfile& p, const SourceSpec& src, int N, double k,
                          double x_meas);

// zeta(k): integral of k_N from the turning point to x_meas.
[[nodiscard]] double zeta_of_k(const WidthProfile& p, int N, double k, double x_meas,
                               RootPolicy policy = RootPolicy::unique);

[[nodiscard]] cplx modal_data_simplified(const WidthProfile& p, const SourceSpec& src, int N,
                                         double k, double x_meas,
                                         RootPolicy policy = RootPolicy::unique);

enum class PmlForm {
    stretched,           // complex coordinate stretch s = 1 - i alpha / k
    absorbing_potential  // kappa^2 = k_N^2 + i k alpha
};

struct PmlSpec {
    double outer_lo = -15.0;
    double inner_lo = -8.0;
    double inner_hi = 8.0;
    double outer_hi = 15.0;
    PmlForm form = PmlForm::stretched;
};

struct FdOptions {
    double mesh_step = 1e-3;
    PmlSpec pml;
};

struct FdField {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<cplx> u;

    [[nodiscard]] cplx at(double x) const;
};

// Solves u'' + k_N^2 u = -g on the PML-terminated line for explicit atoms.
[[nodiscard]] FdField fd_solve(const WidthProfile& p, int N, double k,
                               const std::vector<DeltaAtom>& atoms, const FdOptions& opt = {});

[[nodiscard]] cplx fd_oracle(const WidthProfile& p, const SourceSpec& src, int N, double k,
                             double x_meas, const FdOptions& opt = {});

enum class Backend { airy, simplified, fd };

[[nodiscard]] const char* backend_name(Backend b) noexcept;
[[nodiscard]] Backend parse_backend(const std::string& s);

struct Provenance {
    std::string kind;  // airy_model | simplified_model | fd_oracle | noisy
    std::string base;  // backend behind a noisy set
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct ModalMeasurementSet {
    FrequencyGrid grid;
    double x_meas = 0.0;
    std::vector<cplx> values;
    Provenance provenance;
};

struct SynthOptions {
    FdOptions fd;
    RootPolicy policy = RootPolicy::unique;
};

[[nodiscard]] ModalMeasurementSet synth_measurements(const WidthProfile& p,
                                                     const SourceSpec& src, int N,
                                                     const FrequencyGrid& grid, double x_meas,
                                                     Backend backend,
                                                     const SynthOptions& opt = {});

[[nodiscard]] ModalMeasurementSet add_noise(const ModalMeasurementSet& m, double sigma,
                                            std::uint64_t seed);

}  // namespace lrs
