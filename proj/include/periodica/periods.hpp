#pragma once

#include "periodica/continuation.hpp"
#include "periodica/differentials.hpp"
#include "periodica/homology.hpp"
#include "periodica/linalg.hpp"

namespace periodica {

// Integrals of every differential along the tracked sheets of the base edge
// u -> v, scaled by x(v) - x(u): entry (i, s) is differential i on the sheet
// starting at sorted position s over u.  Gauss-Legendre order adapts from 32
// upward until two successive estimates agree to the context tolerance.
CMat edge_periods(EdgeLifter& lift, const EmbeddedDifferentials& eh, int u, int v);

struct PeriodMatrix {
    int genus = 0;
    long precision_bits = 0;
    CMat omega;                 // g x 2g, alpha columns then beta columns
    bool beta_negated = false;  // orientation fix was applied during validation
};

struct RiemannMatrix {
    CMat tau;  // g x g
    Real symmetry_defect;
    Real min_imag_eigenvalue;
};

// Assemble Omega over the symplectic basis.  Per-edge integrals are computed
// once per base edge (in parallel) and combined by chain multiplicity; the
// Riemann relations are validated, with the beta block negated first when the
// intersection orientation came out reversed.
PeriodMatrix period_matrix(EdgeLifter& lift, const EmbeddedDifferentials& eh,
                           const SymplecticBasis& sym, int threads = 1);

// tau = Omega_alpha^{-1} Omega_beta plus defect metrics.
RiemannMatrix riemann_matrix(const PeriodMatrix& P);

}  // namespace periodica
