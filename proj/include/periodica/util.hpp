#pragma once

#include <gmpxx.h>

#include "periodica/cplx.hpp"
#include "periodica/real.hpp"

namespace periodica {

inline Real to_real(const mpz_class& x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_z(r.get(), x.get_mpz_t(), MPFR_RNDN);
    return r;
}

inline Real to_real(const mpq_class& x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_q(r.get(), x.get_mpq_t(), MPFR_RNDN);
    return r;
}

// Nearest integer to a Real.
inline mpz_class to_mpz_nearest(const Real& x) {
    Real r = round_nearest(x);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), r.get(), MPFR_RNDN);
    return z;
}

// Dyadic rational round(x * 2^bits) / 2^bits as an exact mpq.
inline mpq_class snap_dyadic(const Real& x, long bits) {
    Real scaled = x * Real::pow2(bits, x.prec());
    mpz_class num = to_mpz_nearest(scaled);
    mpq_class q(num);
    q /= mpq_class(mpz_class(1) << static_cast<unsigned long>(bits));
    return q;
}

}  // namespace periodica
