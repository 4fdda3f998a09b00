#pragma once

#include <gmpxx.h>

#include <vector>

namespace periodica {

using ZZ = mpz_class;
using QQ = mpq_class;

// Dense integer matrix, row major.  Rows usually play the role of lattice
// generators.
struct ZMat {
    long rows = 0, cols = 0;
    std::vector<ZZ> a;

    ZMat() = default;
    ZMat(long r, long c) : rows(r), cols(c), a(static_cast<size_t>(r * c)) {}
    ZZ& at(long i, long j) { return a[static_cast<size_t>(i * cols + j)]; }
    const ZZ& at(long i, long j) const { return a[static_cast<size_t>(i * cols + j)]; }

    static ZMat identity(long n);
    ZMat transpose() const;
    bool is_zero() const;
    friend ZMat operator*(const ZMat& x, const ZMat& y);
    friend ZMat operator+(const ZMat& x, const ZMat& y);
    friend ZMat operator-(const ZMat& x, const ZMat& y);
    friend bool operator==(const ZMat& x, const ZMat& y);
};

// Rational matrix, used for exact linear algebra on endomorphism data.
struct QMat {
    long rows = 0, cols = 0;
    std::vector<QQ> a;

    QMat() = default;
    QMat(long r, long c) : rows(r), cols(c), a(static_cast<size_t>(r * c)) {}
    explicit QMat(const ZMat& m);
    QQ& at(long i, long j) { return a[static_cast<size_t>(i * cols + j)]; }
    const QQ& at(long i, long j) const { return a[static_cast<size_t>(i * cols + j)]; }

    static QMat identity(long n);
    QMat transpose() const;
    bool is_zero() const;
    bool is_integral() const;
    friend QMat operator*(const QMat& x, const QMat& y);
    friend QMat operator+(const QMat& x, const QMat& y);
    friend QMat operator-(const QMat& x, const QMat& y);
    friend bool operator==(const QMat& x, const QMat& y);
};

// Row-style Hermite normal form: returns H with the same row lattice as A,
// pivots positive, entries above each pivot reduced into [0, pivot).  Zero
// rows are dropped.  If U is non-null it receives a unimodular matrix with
// U*A = H_full (H including zero rows).
ZMat hnf(const ZMat& A, ZMat* U = nullptr);

// Basis of the right kernel {x : A x = 0} over Z, rows of the result; the
// returned lattice is saturated.
ZMat kernel_z(const ZMat& A);

// Saturation of the row lattice of A inside Z^cols.
ZMat saturate_rows(const ZMat& A);

long rank_q(const ZMat& A);
ZZ det_z(const ZMat& A);  // Bareiss, square A

// Diagonal of the Smith normal form (nonzero entries only, divisibility
// chain d1 | d2 | ...).
std::vector<ZZ> smith_divisors(ZMat A);

// Solve x * A = b over Q (row-vector convention); returns false when
// inconsistent.  A may be rectangular of full row rank or not.
bool solve_left_q(const QMat& A, const std::vector<QQ>& b, std::vector<QQ>& x);

long rank_q(const QMat& A);
QMat inverse_q(const QMat& A);  // throws InternalError when singular
QQ det_q(const QMat& A);

}  // namespace periodica
