#pragma once

#include <stdexcept>
#include <string>

namespace lrs {

enum class Errc {
    domain,
    ill_posed_frequency,
    ambiguity,
    multiple_resonance,
    out_of_band,
    unknown_profile,
    pole,
    quadrature,
    degenerate_source,
    off_image,
    unwrap_ambiguity,
    degenerate_grid,
    data_integrity,
    solver,
    inconclusive_band,
    inconclusive,
    config,
    io,
};

[[nodiscard]] const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Rethrow `e` with a prefix naming where it happened, keeping the code.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context);

}  // namespace lrs
