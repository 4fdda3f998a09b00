#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "periodica/lattice.hpp"
#include "periodica/periods.hpp"
#include "periodica/prec.hpp"
#include "periodica/zmat.hpp"

namespace periodica {

// Gram matrix [[0, I], [-I, 0]] of the intersection pairing on a symplectic
// homology basis of a genus g surface.
ZMat std_symplectic_form(long g);

// A homomorphism Jac(X1) -> Jac(X2) between polarized Jacobians: R acts on
// H_1 (2g2 x 2g1 integer), T on tangent spaces (g2 x g1 complex), coupled by
// T Omega1 = Omega2 R.  In the normalized bases Omega_i = (1 | tau_i) the
// homology action splits into blocks R = [[D, B], [C, A]] with
// T = D + tau2 C and B + tau2 A = T tau1.
struct HomEntry {
    ZMat R;
    CMat T;
    Real residual;  // max entry of T*Omega1 - Omega2*R

    ZMat block_d() const;
    ZMat block_b() const;
    ZMat block_c() const;
    ZMat block_a() const;
};

// Z-basis of Hom(Jac1, Jac2), entries in Hermite-canonical order.
struct HomBasis {
    std::vector<HomEntry> entries;
    long rank = 0;
    long genus1 = 0, genus2 = 0;
};

// Tangent matrix of a rational homology action: solve T Omega1 = Omega2 R on
// the alpha columns, where both first blocks are invertible.
CMat tangent_of(const PeriodMatrix& P1, const PeriodMatrix& P2, const QMat& R);

// max entry of T*Omega1 - Omega2*R over the full period matrices.
Real hom_residual(const PeriodMatrix& P1, const PeriodMatrix& P2, const ZMat& R,
                  const CMat& T);

// Rebuild the homology action from a tangent matrix by solving the stacked
// system (Omega2; conj Omega2) R = (T Omega1; conj(T Omega1)) and rounding.
// When defect is non-null it receives the largest distance to an integer
// before rounding.
ZMat homology_from_tangent(const PeriodMatrix& P1, const PeriodMatrix& P2,
                           const CMat& T, Real* defect = nullptr);

// Integer relation search for homomorphisms of Jacobians.  Both period
// matrices must carry the same working precision.  Self-Hom always contains
// the identity.  Throws PrecisionTooLow when a candidate lands in the
// ambiguous residual band [2^-(B/2), 2^-(B/4)); candidates above the band are
// discarded as numerical junk.
HomBasis homomorphisms(const PeriodMatrix& P1, const PeriodMatrix& P2,
                       const PrecisionContext& ctx);

// Rosati adjoint of an endomorphism: on homology R' = -E R^T E for the
// standard symplectic E; an involutive anti-automorphism with positive
// definite trace form q(R) = tr(R' R).
HomEntry rosati(const HomEntry& h, const PeriodMatrix& P);

// Exact structure of End(Jac) as a Q-algebra with its Rosati involution.
struct EndStructure {
    HomBasis hom;
    // mult_table[i].at(j, k): coefficient of basis element k in B_i * B_j.
    std::vector<QMat> mult_table;
    long rosati_fixed_dim = 0;
    // Primitive symmetric idempotents of the center, pairwise orthogonal,
    // summing to the identity; sorted by homology rank then entries.
    std::vector<QMat> idempotents;
    std::vector<long> idempotent_rank;  // rank of each on H_1
    // Matrix-block multiplicity of the corner algebra at each idempotent:
    // k when the block is M_k over its center, detected through a minimal
    // nonzero homology rank in the corner (1 when nothing smaller is found).
    std::vector<long> multiplicity;
    // |det| of the coordinates of the computed order in the standard basis
    // of Z^a x M_k(Z)^b, present when every block is recognized as Q or as a
    // split matrix algebra over Q.
    std::optional<ZZ> order_index;
};

EndStructure endomorphism_structure(const PeriodMatrix& P, const PrecisionContext& ctx);

// One isogeny factor cut out by a primitive symmetric idempotent e.
struct IsogenyFactor {
    long dimension = 0;     // rank(e)/2 divided by the block multiplicity
    long multiplicity = 1;
    ZMat sublattice;        // rows: saturated image of e on H_1
    CMat periods;           // T_e * Omega on the sublattice basis
    bool field_known = false;
    std::vector<ZZ> field_poly;  // largest-degree minimal polynomial among
                                 // algebraized entries of T_e
};

std::vector<IsogenyFactor> decompose(const PeriodMatrix& P, const EndStructure& endo,
                                     const PrecisionContext& ctx);

// Isomorphisms of polarized Jacobians, or degree-d isogenies for
// fixed_degree_maps: complete list of R with R^T E2 R = (d) E1 found by
// Fincke-Pohst enumeration of the Rosati trace form on the Hom lattice.
struct SymplecticMapSet {
    std::vector<HomEntry> maps;  // sorted by homology matrix entries
    // Group data, filled by automorphism_group only.
    long group_order = 0;
    long quotient_order = 0;  // |G / <-1>|, the automorphism count of the curve
    long center_size = 0;
    std::vector<std::pair<long, long>> order_histogram;  // (element order, count)
    bool hurwitz_ok = true;  // quotient_order <= 84(g-1) for g >= 2
};

SymplecticMapSet symplectic_isomorphisms(const PeriodMatrix& P1, const PeriodMatrix& P2,
                                         const PrecisionContext& ctx);

SymplecticMapSet fixed_degree_maps(const PeriodMatrix& P1, const PeriodMatrix& P2,
                                   long degree, const PrecisionContext& ctx);

// Symplectic automorphism group of one Jacobian: the isomorphism set checked
// for closure under composition and inverses (ClosureFailure otherwise),
// with order statistics and the quotient by -1.
SymplecticMapSet automorphism_group(const PeriodMatrix& P, const PrecisionContext& ctx);

}  // namespace periodica
