#include "lrs/error.hpp"

namespace lrs {

const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::domain: return "domain";
        case Errc::ill_posed_frequency: return "ill_posed_frequency";
        case Errc::ambiguity: return "ambiguity";
        case Errc::multiple_resonance: return "multiple_resonance";
        case Errc::out_of_band: return "out_of_band";
        case Errc::unknown_profile: return "unknown_profile";
        case Errc::pole: return "pole";
        case Errc::quadrature: return "quadrature";
        case Errc::degenerate_source: return "degenerate_source";
        case Errc::off_image: return "off_image";
        case Errc::unwrap_ambiguity: return "unwrap_ambiguity";
        case Errc::degenerate_grid: return "degenerate_grid";
        case Errc::data_integrity: return "data_integrity";
        case Errc::solver: return "solver";
        case Errc::inconclusive_band: return "inconclusive_band";
        case Errc::inconclusive: return "inconclusive";
        case Errc::config: return "config";
        case Errc::io: return "io";
    }
    return "unknown";
}

void rethrow_with_context(const Error& e, const std::string& context) {
    throw Error(e.code(), context + ": " + e.what());
}

}  // namespace lrs
