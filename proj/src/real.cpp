#include "periodica/real.hpp"

#include <cstdio>
#include <cstdlib>

#include "periodica/error.hpp"

namespace periodica {

std::string Real::str(int digits) const {
    if (digits <= 0) {
        // ceil(prec * log10(2)) + 2 keeps the decimal form round-trippable.
        digits = static_cast<int>(static_cast<double>(prec()) * 0.30103) + 3;
    }
    char* buf = nullptr;
    if (mpfr_asprintf(&buf, "%.*Rg", digits, v_) < 0) throw InternalError("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

std::string Real::hex() const {
    char* buf = nullptr;
    if (mpfr_asprintf(&buf, "%Ra", v_) < 0) throw InternalError("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

Real Real::from_str(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    char* end = nullptr;
    mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (end == s.c_str()) throw ParseError("cannot parse real literal '" + s + "'");
    return r;
}

Real Real::from_hex(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    char* end = nullptr;
    mpfr_strtofr(r.v_, s.c_str(), &end, 0, MPFR_RNDN);
    if (end == s.c_str()) throw ParseError("cannot parse hex-float literal '" + s + "'");
    return r;
}

}  // namespace periodica
