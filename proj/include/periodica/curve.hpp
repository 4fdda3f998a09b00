#pragma once

#include <string>
#include <vector>

#include "periodica/numberfield.hpp"
#include "periodica/numerics.hpp"
#include "periodica/prec.hpp"

namespace periodica {

// Plane affine curve f(x, y) = 0 over Q or a number field, stored as
// y-coefficients: f = sum_j ycoeff[j](x) * y^j.
struct PlaneCurve {
    FieldPtr field;
    std::vector<KPoly> ycoeff;
    std::string source;

    int degy() const { return static_cast<int>(ycoeff.size()) - 1; }
    int degx() const;
    const KPoly& lead() const { return ycoeff.back(); }
    bool coeff_is_zero(int i, int j) const;  // coefficient of x^i y^j
};

// Parse the curve grammar: optional "field t: <poly>; embedding <a+bi>;"
// prefix followed by a polynomial in x and y (an '=' splits two sides).
PlaneCurve parse_curve(const std::string& text);

// Bivariate helpers shared by differentials (numerators use the same shape).
std::vector<KPoly> parse_bivariate(const std::string& text, const FieldPtr& field);
std::string bivariate_str(const NumberField& K, const std::vector<KPoly>& p);

// disc_y(f) = Res_y(f, df/dy) / lc_y(f); throws ParseError when identically
// zero (f not squarefree in y).
KPoly y_discriminant(const PlaneCurve& c);

// Res_y(f, df/dy), by evaluation and Lagrange interpolation.
KPoly y_resultant(const PlaneCurve& c);

struct CriticalLocus {
    std::vector<Cplx> points;       // finite critical x-values, sorted by (re, im)
    int squarefree_degree = 0;      // degree of the exact squarefree part
    KPoly squarefree;               // exact squarefree part of lc * disc
};

// Finite critical x-values: numeric roots of the exact squarefree part of
// lc_y(f) * disc_y(f), clusters within 2^(-B/4) merged.
CriticalLocus critical_locus(const PlaneCurve& c, const PrecisionContext& ctx);

struct NewtonPolygonData {
    std::vector<std::pair<int, int>> support;   // exponent pairs (i, j), lex sorted
    std::vector<std::pair<int, int>> hull;      // ccw convex hull vertices
    std::vector<std::pair<int, int>> interior;  // strictly interior lattice points
};

NewtonPolygonData newton_polygon(const PlaneCurve& c);

// Numerator monomials x^(a-1) y^(b-1) for interior points (a, b); candidates
// for a basis of holomorphic differentials h dx / (df/dy).
std::vector<std::vector<KPoly>> baker_numerators(const PlaneCurve& c);

// Numeric view of a curve at fixed precision: embedded y-coefficients and
// their y-derivative, ready for fiber evaluation.
struct EmbeddedCurve {
    mpfr_prec_t prec = 53;
    std::vector<ComplexPoly> ycx;   // coefficient polys in x
    std::vector<ComplexPoly> dycx;  // same for df/dy

    EmbeddedCurve() = default;
    EmbeddedCurve(const PlaneCurve& c, mpfr_prec_t prec);

    int degy() const { return static_cast<int>(ycx.size()) - 1; }
    // Polynomial in y at fixed x; reuses out's storage.
    void fiber(const Cplx& x, ComplexPoly& out) const;
    void fiber_dy(const Cplx& x, ComplexPoly& out) const;
    Cplx eval_fy(const Cplx& x, const Cplx& y) const;
};

}  // namespace periodica
