#include "periodica/linalg.hpp"

#include <algorithm>
#include <utility>

#include "periodica/error.hpp"

namespace periodica {

CMat CMat::identity(long n, mpfr_prec_t prec) {
    CMat m(n, n, prec);
    for (long i = 0; i < n; ++i) m.at(i, i) = Cplx(1, prec);
    return m;
}

CMat CMat::transpose() const {
    CMat m(cols, rows, 53);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m.at(j, i) = at(i, j);
    return m;
}

CMat CMat::conj() const {
    CMat m(rows, cols, 53);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m.at(i, j) = at(i, j).conj();
    return m;
}

CMat operator*(const CMat& x, const CMat& y) {
    if (x.cols != y.rows) throw InternalError("matrix product shape mismatch");
    mpfr_prec_t prec = x.rows && x.cols ? x.at(0, 0).prec() : 53;
    CMat m(x.rows, y.cols, prec);
    for (long i = 0; i < x.rows; ++i)
        for (long k = 0; k < x.cols; ++k) {
            const Cplx& v = x.at(i, k);
            if (v.is_zero()) continue;
            for (long j = 0; j < y.cols; ++j) m.at(i, j) += v * y.at(k, j);
        }
    return m;
}

CMat operator+(const CMat& x, const CMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw InternalError("matrix sum shape mismatch");
    CMat m = x;
    for (size_t i = 0; i < m.a.size(); ++i) m.a[i] += y.a[i];
    return m;
}

CMat operator-(const CMat& x, const CMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw InternalError("matrix sum shape mismatch");
    CMat m = x;
    for (size_t i = 0; i < m.a.size(); ++i) m.a[i] -= y.a[i];
    return m;
}

Real max_abs(const CMat& m) {
    Real best(0.0, 53);
    for (const Cplx& v : m.a) best = max(best, abs(v));
    return best;
}

CMat lu_solve(const CMat& A, const CMat& B) {
    if (A.rows != A.cols || A.rows != B.rows) throw InternalError("linear solve shape mismatch");
    const long n = A.rows;
    if (n == 0) return B;
    const mpfr_prec_t prec = A.at(0, 0).prec();
    CMat lu = A, x = B;

    Real scale(0.0, prec);
    for (const Cplx& v : lu.a) scale = max(scale, norm(v));
    // Entries carry ~prec good bits; anything this far down is noise.
    Real floor = scale * Real::pow2(-2 * static_cast<long>(prec) + 8, prec);

    for (long k = 0; k < n; ++k) {
        long piv = k;
        Real best = norm(lu.at(k, k));
        for (long i = k + 1; i < n; ++i) {
            Real cand = norm(lu.at(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (!(best > floor) || !best.is_finite()) throw InternalError("singular linear system");
        if (piv != k) {
            for (long j = 0; j < n; ++j) std::swap(lu.at(k, j), lu.at(piv, j));
            for (long j = 0; j < x.cols; ++j) std::swap(x.at(k, j), x.at(piv, j));
        }
        for (long i = k + 1; i < n; ++i) {
            Cplx f = lu.at(i, k) / lu.at(k, k);
            if (f.is_zero()) continue;
            for (long j = k + 1; j < n; ++j) lu.at(i, j) -= f * lu.at(k, j);
            for (long j = 0; j < x.cols; ++j) x.at(i, j) -= f * x.at(k, j);
        }
    }
    for (long k = n; k-- > 0;) {
        for (long j = 0; j < x.cols; ++j) {
            for (long i = k + 1; i < n; ++i) x.at(k, j) -= lu.at(k, i) * x.at(i, j);
            x.at(k, j) = x.at(k, j) / lu.at(k, k);
        }
    }
    return x;
}

CMat inverse(const CMat& A) {
    mpfr_prec_t prec = A.rows ? A.at(0, 0).prec() : 53;
    return lu_solve(A, CMat::identity(A.rows, prec));
}

std::vector<Real> symmetric_eigenvalues(std::vector<std::vector<Real>> S, mpfr_prec_t prec) {
    const long n = static_cast<long>(S.size());
    auto& A = S;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) A[i][j] = A[j][i];

    Real frob(0.0, prec);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) frob += A[i][j] * A[i][j];
    frob = sqrt(frob);
    Real eps = frob * Real::pow2(-static_cast<long>(prec) + 8, prec);

    for (int sweep = 0; sweep < 64; ++sweep) {
        Real off(0.0, prec);
        for (long p = 0; p < n; ++p)
            for (long q = p + 1; q < n; ++q) off += A[p][q] * A[p][q];
        if (!(sqrt(off) > eps)) break;
        if (sweep == 63) throw NonConvergence("jacobi eigenvalue sweep cap");
        for (long p = 0; p < n; ++p)
            for (long q = p + 1; q < n; ++q) {
                if (abs(A[p][q]) <= eps / (n * n)) continue;
                Real theta = (A[q][q] - A[p][p]) / (2 * A[p][q]);
                Real t = 1 / (abs(theta) + sqrt(theta * theta + 1));
                if (theta.sign() < 0) t = -t;
                Real c = 1 / sqrt(t * t + 1);
                Real s = t * c;
                for (long k = 0; k < n; ++k) {
                    Real akp = A[k][p], akq = A[k][q];
                    A[k][p] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (long k = 0; k < n; ++k) {
                    Real apk = A[p][k], aqk = A[q][k];
                    A[p][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<Real> ev;
    ev.reserve(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) ev.push_back(A[i][i]);
    std::sort(ev.begin(), ev.end(), [](const Real& a, const Real& b) { return a < b; });
    return ev;
}

}  // namespace periodica
