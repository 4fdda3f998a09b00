#pragma once

#include <optional>
#include <vector>

#include "periodica/cplx.hpp"
#include "periodica/prec.hpp"
#include "periodica/zmat.hpp"

namespace periodica {

// Basis of a sublattice of Z^dim, one generator per column.  `dim` stays
// meaningful even when `columns` is empty (the zero lattice).
struct IntegerLatticeBasis {
    long dim = 0;
    std::vector<std::vector<ZZ>> columns;

    long count() const { return static_cast<long>(columns.size()); }
    // dim x count matrix whose j-th column is columns[j].
    ZMat as_matrix() const;
    static IntegerLatticeBasis from_matrix(const ZMat& m);
};

struct LLLResult {
    IntegerLatticeBasis basis;
    // Unimodular, input * transform = basis in the column convention.
    ZMat transform;
};

// LLL reduction of the given columns.  Basis vectors must be linearly
// independent; the reduction parameter defaults to delta = 0.99.
LLLResult lll_reduce(const IntegerLatticeBasis& basis, double delta = 0.99);

// Heuristic integer kernel of a real m x n matrix: LLL applied to the columns
// of (I over inv(eps)*M), where eps is chosen so that inv(eps)*M rounds to
// integers with quantization error at most 0.5 given the context's trusted
// accuracy.  Reduced vectors survive when their integer part has bit-size at
// most keep_bits (default working_bits/4) and their M-residual is at most
// n*eps; survivors are HNF-canonicalized.  An empty basis is a valid result.
IntegerLatticeBasis approximate_kernel(const std::vector<std::vector<Real>>& M,
                                       const PrecisionContext& ctx, long keep_bits = -1);

struct ShortVector {
    std::vector<ZZ> v;
    QQ value;  // v^T G v
};

// Complete Fincke-Pohst enumeration of {v : v^T G v <= bound}, zero vector
// and both members of each +-v pair included, sorted lexicographically.
// Throws NotPositiveDefinite when the exact rational Cholesky of G fails.
std::vector<ShortVector> fincke_pohst(const QMat& gram, const QQ& bound);
std::vector<ShortVector> fincke_pohst(const ZMat& gram, long bound);

struct AlgebraicCandidate {
    std::vector<ZZ> min_poly;  // primitive, positive leading coefficient
    int root_index = 0;        // position of the matching root in roots() order
    Real residual;             // |min_poly(z)|
};

// Integer-relation search over (1, z, ..., z^d) for d <= max_degree, lowest
// degree first.  A candidate is accepted when its residual is below
// 2^(-residual_factor*B) and its coefficient height below 2^(height_factor*B);
// the reported minimal polynomial is the irreducible factor matching z.
// Returns nullopt when nothing qualifies.
std::optional<AlgebraicCandidate> algebraize(const Cplx& z, int max_degree,
                                             const PrecisionContext& ctx,
                                             double residual_factor = 0.6,
                                             double height_factor = 0.2);

}  // namespace periodica
