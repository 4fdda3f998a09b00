#pragma once

#include <vector>

#include "periodica/cplx.hpp"
#include "periodica/prec.hpp"

namespace periodica {

// Dense univariate polynomial over Cplx, coeff[i] multiplies x^i.
struct ComplexPoly {
    std::vector<Cplx> coeff;

    int degree() const { return static_cast<int>(coeff.size()) - 1; }
    Cplx eval(const Cplx& z) const;
    // Simultaneous value and derivative at z (one Horner pass).
    void eval2(const Cplx& z, Cplx& p, Cplx& dp) const;
    ComplexPoly derivative() const;
};

// All deg(p) roots of p, Aberth-Ehrlich iteration with Newton-polygon
// starting points, sorted lexicographically by (re, im).  Residuals are
// checked against ||p||_r * 2^(-B+guard) where ||p||_r is the evaluation-scale
// norm sum_i |a_i| max(1,|r|)^i; failure throws NonConvergence.
std::vector<Cplx> roots(const ComplexPoly& p, const PrecisionContext& ctx);

// Newton iteration from start, constrained to the disk |z - start| <= radius.
// Throws DiskEscape when an iterate leaves the disk and SlowConvergence when
// the step size fails to contract within the iteration cap.
Cplx newton_refine(const ComplexPoly& p, const Cplx& start, const Real& radius,
                   const PrecisionContext& ctx);

// Non-throwing core used by path continuation.
enum class NewtonStatus { ok, disk_escape, slow };
NewtonStatus newton_refine_core(const ComplexPoly& p, const Cplx& start, const Real& radius,
                                mpfr_prec_t prec, Cplx& out, int iter_cap = 100);

}  // namespace periodica
