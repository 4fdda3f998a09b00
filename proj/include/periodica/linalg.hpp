#pragma once

#include <vector>

#include "periodica/cplx.hpp"

namespace periodica {

// Dense complex matrix with uniform entry precision.
struct CMat {
    long rows = 0, cols = 0;
    std::vector<Cplx> a;

    CMat() = default;
    CMat(long r, long c, mpfr_prec_t prec)
        : rows(r), cols(c), a(static_cast<size_t>(r * c), Cplx(prec)) {}

    Cplx& at(long i, long j) { return a[static_cast<size_t>(i * cols + j)]; }
    const Cplx& at(long i, long j) const { return a[static_cast<size_t>(i * cols + j)]; }

    static CMat identity(long n, mpfr_prec_t prec);
    CMat transpose() const;
    CMat conj() const;

    friend CMat operator*(const CMat& x, const CMat& y);
    friend CMat operator+(const CMat& x, const CMat& y);
    friend CMat operator-(const CMat& x, const CMat& y);
};

// max_ij |at(i,j)|
Real max_abs(const CMat& m);

// Solve A X = B by LU with partial pivoting; A square.  Throws InternalError
// when a pivot falls below the numeric noise floor of A's entries.
CMat lu_solve(const CMat& A, const CMat& B);
CMat inverse(const CMat& A);

// Eigenvalues of a real symmetric matrix, ascending, by cyclic Jacobi
// rotations; the strict upper triangle is read from the lower one.
std::vector<Real> symmetric_eigenvalues(std::vector<std::vector<Real>> S, mpfr_prec_t prec);

}  // namespace periodica
