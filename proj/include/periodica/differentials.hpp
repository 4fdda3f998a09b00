#pragma once

#include <string>
#include <vector>

#include "periodica/continuation.hpp"
#include "periodica/curve.hpp"

namespace periodica {

// Working basis of regular differentials h_i dx / (df/dy), numerators exact
// over the curve's base field.
struct DifferentialBasis {
    enum class Source { baker, user };

    FieldPtr field;
    std::vector<std::vector<KPoly>> numerators;  // bivariate, indexed by y power
    Source source = Source::baker;

    int count() const { return static_cast<int>(numerators.size()); }
};

// User numerator strings when given (parsed over the curve's field and checked
// for linear independence), Baker monomials otherwise.  The count-vs-genus
// cross-check happens in the pipeline, where the genus is known.
DifferentialBasis differential_basis(const PlaneCurve& curve,
                                     const std::vector<std::string>& user_numerators = {});

// Numerators embedded at fixed precision for complex evaluation.
struct EmbeddedDifferentials {
    mpfr_prec_t prec = 53;
    std::vector<std::vector<ComplexPoly>> hs;  // hs[i][j]: x-polynomial on y^j

    EmbeddedDifferentials() = default;
    EmbeddedDifferentials(const DifferentialBasis& basis, mpfr_prec_t prec);

    int count() const { return static_cast<int>(hs.size()); }
    Cplx eval(int i, const Cplx& x, const Cplx& y) const;
};

// Integrand values h_i(x,y)/f_y(x,y) along the tracked sheets of the edge
// u -> v at parameters ts: out[k][s][i] for node k, sheet s, differential i.
// Sheets are labeled by the sorted fiber over u.
std::vector<std::vector<std::vector<Cplx>>> integrand_on_edge(EdgeLifter& lift,
                                                              const EmbeddedDifferentials& eh,
                                                              int u, int v,
                                                              const std::vector<Real>& ts);

}  // namespace periodica
