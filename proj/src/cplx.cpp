#include "periodica/cplx.hpp"

namespace periodica {

Cplx sqrt(const Cplx& a) {
    mpfr_prec_t p = a.prec();
    if (a.im.is_zero()) {
        if (a.re.sign() >= 0) return Cplx(sqrt(a.re), Real(p));
        return Cplx(Real(p), sqrt(-a.re));
    }
    // sqrt via r = |a|: re = sqrt((r + a.re)/2), im = a.im / (2 re).
    Real r = abs(a);
    Real x = sqrt((r + a.re) / 2);
    if (x.is_zero()) return Cplx(Real(p), sqrt(r));
    return Cplx(x, a.im / (x * 2));
}

Cplx unit_circle(const Real& theta) {
    Cplx z(theta.prec());
    mpfr_sin_cos(z.im.get(), z.re.get(), theta.get(), MPFR_RNDN);
    return z;
}

std::string Cplx::str(int digits) const {
    std::string s = re.str(digits);
    std::string t = im.str(digits);
    if (!t.empty() && t[0] == '-') return s + " - " + t.substr(1) + "i";
    return s + " + " + t + "i";
}

}  // namespace periodica
