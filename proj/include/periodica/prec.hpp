#pragma once

#include <mpfr.h>

#include "periodica/error.hpp"

namespace periodica {

// Working-precision policy shared by the whole pipeline.  `working_bits` is
// the user-facing precision B; all internal arithmetic runs at B + guard_bits
// and convergence targets are expressed relative to 2^-(B - guard_bits).
struct PrecisionContext {
    long working_bits = 100;
    long guard_bits = 20;

    PrecisionContext() = default;
    explicit PrecisionContext(long wb, long gb = 20) : working_bits(wb), guard_bits(gb) {
        if (working_bits < 53) throw ParseError("working precision must be at least 53 bits");
        if (guard_bits < 1) throw ParseError("guard bits must be positive");
    }

    // Precision used for mpfr variables.
    mpfr_prec_t prec() const { return static_cast<mpfr_prec_t>(working_bits + guard_bits); }

    // Exponent of the target tolerance: quantities are trusted down to
    // 2^tol_exp2().
    long tol_exp2() const { return -(working_bits - guard_bits); }
};

}  // namespace periodica
