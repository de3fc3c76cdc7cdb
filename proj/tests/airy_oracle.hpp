#pragma once

// Maclaurin-series Airy oracle in 150-digit decimal arithmetic. Test-only.

#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "lrs/specfun.hpp"

namespace oracle {

using mp = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<150>>;

inline lrs::AiryPair airy_series(double xd) {
    const mp x = xd;
    const mp x3 = x * x * x;
    const mp c1 = 1 / (boost::multiprecision::pow(mp(3), mp(2) / 3) * boost::math::tgamma(mp(2) / 3));
    const mp c2 = 1 / (boost::multiprecision::pow(mp(3), mp(1) / 3) * boost::math::tgamma(mp(1) / 3));
    const mp eps("1e-120");

    // f = sum a_k x^{3k}, g = sum b_k x^{3k+1}, with a_0 = 1, b_0 = 1
    mp f = 0, g = 0, fp = 0, gp = 0;
    mp a = 1, b = 1;   // coefficients
    mp p3 = 1;         // x^{3k}
    for (int k = 0; k < 2000; ++k) {
        const mp tf = a * p3;
        const mp tg = b * p3 * x;
        f += tf;
        g += tg;
        gp += b * (3 * k + 1) * p3;
        if (k > 0) fp += a * (3 * k) * p3 / x;
        if (k > 10 && abs(tf) < eps * (abs(f) + 1) && abs(tg) < eps * (abs(g) + 1)) break;
        a /= mp(3 * k + 2) * (3 * k + 3);
        b /= mp(3 * k + 3) * (3 * k + 4);
        p3 *= x3;
    }
    const mp s3 = boost::multiprecision::sqrt(mp(3));
    lrs::AiryPair r;
    r.ai = static_cast<double>(c1 * f - c2 * g);
    r.bi = static_cast<double>(s3 * (c1 * f + c2 * g));
    r.aip = static_cast<double>(c1 * fp - c2 * gp);
    r.bip = static_cast<double>(s3 * (c1 * fp + c2 * gp));
    return r;
}

// Error scale for a value: its own size where the functions are monotone,
// the oscillation envelope on the negative axis (so zeros do not blow up
// the relative error).
inline double airy_rel_err(double got, double want, double envelope) {
    return std::abs(got - want) / std::max(std::abs(want), envelope);
}

struct AiryErr {
    double ai = 0, bi = 0, aip = 0, bip = 0;
    double max() const { return std::max(std::max(ai, bi), std::max(aip, bip)); }
};

inline AiryErr airy_error(double x) {
    const lrs::AiryPair got = lrs::airy(x);
    const lrs::AiryPair ref = airy_series(x);
    const double env = x < 0 ? std::hypot(ref.ai, ref.bi) : 0.0;
    const double envp = x < 0 ? std::hypot(ref.aip, ref.bip) : 0.0;
    return {airy_rel_err(got.ai, ref.ai, env), airy_rel_err(got.bi, ref.bi, env),
            airy_rel_err(got.aip, ref.aip, envp), airy_rel_err(got.bip, ref.bip, envp)};
}

}  // namespace oracle
