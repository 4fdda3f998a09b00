#pragma once

#include "periodica/cplx.hpp"
#include "periodica/error.hpp"

// Numeric j-invariant from a point in the upper half plane, by SL2(Z)
// reduction to the fundamental domain and the q-expansions of E4 and E6.
// Test oracle only; accuracy is limited by the series cutoff, far below
// 2^-40 for reduced tau.
inline periodica::Cplx j_from_tau(periodica::Cplx tau, mpfr_prec_t prec) {
    using periodica::Cplx;
    using periodica::Real;
    if (!(tau.im > 0)) throw periodica::InternalError("tau not in the upper half plane");

    for (int it = 0;; ++it) {
        if (it > 256) throw periodica::InternalError("tau reduction did not settle");
        Real n = round_nearest(tau.re);
        tau.re -= n;
        if (norm(tau) < 1) {
            tau = Cplx(-1, prec) / tau;
            continue;
        }
        break;
    }

    // q = exp(2 pi i tau)
    Real two_pi = 2 * Real::pi(prec);
    Real r = exp(-two_pi * tau.im);
    Cplx q = unit_circle(two_pi * tau.re) * r;

    Cplx e4(1, prec), e6(1, prec);
    Cplx qn = q;
    const Real cut = Real::pow2(-static_cast<long>(prec) - 16, prec);
    for (long n = 1; n <= 512 && abs(qn) > cut; ++n) {
        Cplx term = qn / (Cplx(1, prec) - qn);
        long n2 = n * n;
        e4 += term * (240 * n2 * n);
        e6 -= term * (504 * n2 * n2 * n);
        qn = qn * q;
    }
    Cplx e43 = e4 * e4 * e4;
    return e43 * 1728 / (e43 - e6 * e6);
}
