#include "periodica/zmat.hpp"

#include "periodica/error.hpp"

namespace periodica {

ZMat ZMat::identity(long n) {
    ZMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

ZMat ZMat::transpose() const {
    ZMat t(cols, rows);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

bool ZMat::is_zero() const {
    for (const ZZ& x : a)
        if (x != 0) return false;
    return true;
}

ZMat operator*(const ZMat& x, const ZMat& y) {
    if (x.cols != y.rows) throw InternalError("ZMat product shape mismatch");
    ZMat r(x.rows, y.cols);
    ZZ t;
    for (long i = 0; i < x.rows; ++i)
        for (long k = 0; k < x.cols; ++k) {
            const ZZ& xik = x.at(i, k);
            if (xik == 0) continue;
            for (long j = 0; j < y.cols; ++j) {
                t = xik * y.at(k, j);
                r.at(i, j) += t;
            }
        }
    return r;
}

ZMat operator+(const ZMat& x, const ZMat& y) {
    ZMat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

ZMat operator-(const ZMat& x, const ZMat& y) {
    ZMat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

bool operator==(const ZMat& x, const ZMat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
}

QMat::QMat(const ZMat& m) : rows(m.rows), cols(m.cols), a(m.a.size()) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = QQ(m.a[i]);
}

QMat QMat::identity(long n) {
    QMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMat QMat::transpose() const {
    QMat t(cols, rows);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

bool QMat::is_zero() const {
    for (const QQ& x : a)
        if (x != 0) return false;
    return true;
}

bool QMat::is_integral() const {
    for (const QQ& x : a)
        if (x.get_den() != 1) return false;
    return true;
}

QMat operator*(const QMat& x, const QMat& y) {
    if (x.cols != y.rows) throw InternalError("QMat product shape mismatch");
    QMat r(x.rows, y.cols);
    QQ t;
    for (long i = 0; i < x.rows; ++i)
        for (long k = 0; k < x.cols; ++k) {
            const QQ& xik = x.at(i, k);
            if (xik == 0) continue;
            for (long j = 0; j < y.cols; ++j) {
                t = xik * y.at(k, j);
                r.at(i, j) += t;
            }
        }
    return r;
}

QMat operator+(const QMat& x, const QMat& y) {
    QMat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

QMat operator-(const QMat& x, const QMat& y) {
    QMat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

bool operator==(const QMat& x, const QMat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
}

ZMat hnf(const ZMat& A, ZMat* U) {
    ZMat H = A;
    ZMat T = ZMat::identity(A.rows);
    long row = 0;
    ZZ q, g, s, t, u, v;
    for (long col = 0; col < H.cols && row < H.rows; ++col) {
        // Gather a pivot via extended gcd of the column below `row`.
        long pivot = -1;
        for (long i = row; i < H.rows; ++i)
            if (H.at(i, col) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != row) {
            for (long j = 0; j < H.cols; ++j) H.at(pivot, j).swap(H.at(row, j));
            for (long j = 0; j < T.cols; ++j) T.at(pivot, j).swap(T.at(row, j));
        }
        for (long i = row + 1; i < H.rows; ++i) {
            if (H.at(i, col) == 0) continue;
            // Replace (row, i) rows so that H(row,col) = gcd, H(i,col) = 0.
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), H.at(row, col).get_mpz_t(),
                       H.at(i, col).get_mpz_t());
            u = H.at(row, col) / g;
            v = H.at(i, col) / g;
            for (long j = 0; j < H.cols; ++j) {
                ZZ hr = H.at(row, j), hi = H.at(i, j);
                H.at(row, j) = s * hr + t * hi;
                H.at(i, j) = u * hi - v * hr;
            }
            for (long j = 0; j < T.cols; ++j) {
                ZZ tr = T.at(row, j), ti = T.at(i, j);
                T.at(row, j) = s * tr + t * ti;
                T.at(i, j) = u * ti - v * tr;
            }
        }
        if (H.at(row, col) < 0) {
            for (long j = 0; j < H.cols; ++j) H.at(row, j) = -H.at(row, j);
            for (long j = 0; j < T.cols; ++j) T.at(row, j) = -T.at(row, j);
        }
        // Reduce entries above the pivot into [0, pivot).
        for (long i = 0; i < row; ++i) {
            if (H.at(i, col) == 0) continue;
            mpz_fdiv_q(q.get_mpz_t(), H.at(i, col).get_mpz_t(), H.at(row, col).get_mpz_t());
            if (q == 0) continue;
            for (long j = 0; j < H.cols; ++j) H.at(i, j) -= q * H.at(row, j);
            for (long j = 0; j < T.cols; ++j) T.at(i, j) -= q * T.at(row, j);
        }
        ++row;
    }
    if (U) *U = T;
    // Drop zero rows.
    ZMat out(row, H.cols);
    for (long i = 0; i < row; ++i)
        for (long j = 0; j < H.cols; ++j) out.at(i, j) = H.at(i, j);
    return out;
}

ZMat kernel_z(const ZMat& A) {
    // Row-reduce A^T; transform rows that map to zero span the kernel of x -> A x.
    ZMat At = A.transpose();
    ZMat U;
    ZMat H = hnf(At, &U);
    long nz = H.rows;  // nonzero rows kept by hnf
    long n = At.rows;
    ZMat K(n - nz, n);
    for (long i = nz; i < n; ++i)
        for (long j = 0; j < n; ++j) K.at(i - nz, j) = U.at(i, j);
    // A second HNF gives a canonical, reduced basis.
    return hnf(K);
}

ZMat saturate_rows(const ZMat& A) {
    // rowspace_Q(A)^perp is the right kernel; the saturation is the set of
    // integer vectors orthogonal to that kernel.
    ZMat K = kernel_z(A);
    ZMat sat = kernel_z(K);
    if (sat.cols == 0 && A.cols > 0) return ZMat(0, A.cols);
    return sat;
}

long rank_q(const ZMat& A) { return rank_q(QMat(A)); }

ZZ det_z(const ZMat& A) {
    if (A.rows != A.cols) throw InternalError("det_z: square matrix required");
    long n = A.rows;
    if (n == 0) return ZZ(1);
    ZMat M = A;
    ZZ prev(1);
    int sign = 1;
    for (long k = 0; k < n - 1; ++k) {
        if (M.at(k, k) == 0) {
            long p = -1;
            for (long i = k + 1; i < n; ++i)
                if (M.at(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return ZZ(0);
            for (long j = 0; j < n; ++j) M.at(p, j).swap(M.at(k, j));
            sign = -sign;
        }
        for (long i = k + 1; i < n; ++i) {
            for (long j = k + 1; j < n; ++j) {
                M.at(i, j) = (M.at(i, j) * M.at(k, k) - M.at(i, k) * M.at(k, j)) / prev;
            }
            M.at(i, k) = 0;
        }
        prev = M.at(k, k);
    }
    ZZ d = M.at(n - 1, n - 1);
    return sign > 0 ? d : ZZ(-d);
}

std::vector<ZZ> smith_divisors(ZMat A) {
    std::vector<ZZ> out;
    long top = 0;
    ZZ q;
    while (true) {
        // Find the nonzero entry of smallest absolute value in the remaining block.
        long bi = -1, bj = -1;
        ZZ best;
        for (long i = top; i < A.rows; ++i)
            for (long j = top; j < A.cols; ++j) {
                if (A.at(i, j) == 0) continue;
                ZZ v = abs(A.at(i, j));
                if (bi < 0 || v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        for (long j = 0; j < A.cols; ++j) A.at(bi, j).swap(A.at(top, j));
        for (long i = 0; i < A.rows; ++i) A.at(i, bj).swap(A.at(i, top));
        bool clean = true;
        for (long i = top + 1; i < A.rows; ++i) {
            if (A.at(i, top) == 0) continue;
            mpz_fdiv_q(q.get_mpz_t(), A.at(i, top).get_mpz_t(), A.at(top, top).get_mpz_t());
            for (long j = top; j < A.cols; ++j) A.at(i, j) -= q * A.at(top, j);
            if (A.at(i, top) != 0) clean = false;
        }
        for (long j = top + 1; j < A.cols; ++j) {
            if (A.at(top, j) == 0) continue;
            mpz_fdiv_q(q.get_mpz_t(), A.at(top, j).get_mpz_t(), A.at(top, top).get_mpz_t());
            for (long i = top; i < A.rows; ++i) A.at(i, j) -= q * A.at(i, top);
            if (A.at(top, j) != 0) clean = false;
        }
        if (!clean) continue;
        // Enforce divisibility of the remaining block by the pivot.
        bool divides_all = true;
        for (long i = top + 1; i < A.rows && divides_all; ++i)
            for (long j = top + 1; j < A.cols; ++j)
                if (A.at(i, j) % A.at(top, top) != 0) {
                    for (long jj = top; jj < A.cols; ++jj) A.at(top, jj) += A.at(i, jj);
                    divides_all = false;
                    break;
                }
        if (!divides_all) continue;
        out.push_back(abs(A.at(top, top)));
        ++top;
        if (top >= A.rows || top >= A.cols) break;
    }
    return out;
}

bool solve_left_q(const QMat& A, const std::vector<QQ>& b, std::vector<QQ>& x) {
    // Solve x A = b: transpose to A^T x^T = b^T and run Gauss.
    long n = A.rows, m = A.cols;
    if (static_cast<long>(b.size()) != m) throw InternalError("solve_left_q shape mismatch");
    QMat M(m, n + 1);
    for (long i = 0; i < m; ++i) {
        for (long j = 0; j < n; ++j) M.at(i, j) = A.at(j, i);
        M.at(i, n) = b[static_cast<size_t>(i)];
    }
    long row = 0;
    std::vector<long> pivot_col;
    for (long col = 0; col < n && row < m; ++col) {
        long p = -1;
        for (long i = row; i < m; ++i)
            if (M.at(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (long j = 0; j <= n; ++j) M.at(p, j).swap(M.at(row, j));
        QQ inv = 1 / M.at(row, col);
        for (long j = col; j <= n; ++j) M.at(row, j) *= inv;
        for (long i = 0; i < m; ++i) {
            if (i == row || M.at(i, col) == 0) continue;
            QQ f = M.at(i, col);
            for (long j = col; j <= n; ++j) M.at(i, j) -= f * M.at(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (long i = row; i < m; ++i)
        if (M.at(i, n) != 0) return false;
    x.assign(static_cast<size_t>(n), QQ(0));
    for (long i = 0; i < row; ++i) x[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] = M.at(i, n);
    return true;
}

long rank_q(const QMat& A) {
    QMat M = A;
    long row = 0;
    for (long col = 0; col < M.cols && row < M.rows; ++col) {
        long p = -1;
        for (long i = row; i < M.rows; ++i)
            if (M.at(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (long j = 0; j < M.cols; ++j) M.at(p, j).swap(M.at(row, j));
        for (long i = row + 1; i < M.rows; ++i) {
            if (M.at(i, col) == 0) continue;
            QQ f = M.at(i, col) / M.at(row, col);
            for (long j = col; j < M.cols; ++j) M.at(i, j) -= f * M.at(row, j);
        }
        ++row;
    }
    return row;
}

QMat inverse_q(const QMat& A) {
    if (A.rows != A.cols) throw InternalError("inverse_q: square matrix required");
    long n = A.rows;
    QMat M = A;
    QMat I = QMat::identity(n);
    for (long col = 0; col < n; ++col) {
        long p = -1;
        for (long i = col; i < n; ++i)
            if (M.at(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) throw InternalError("inverse_q: singular matrix");
        if (p != col)
            for (long j = 0; j < n; ++j) {
                M.at(p, j).swap(M.at(col, j));
                I.at(p, j).swap(I.at(col, j));
            }
        QQ inv = 1 / M.at(col, col);
        for (long j = 0; j < n; ++j) {
            M.at(col, j) *= inv;
            I.at(col, j) *= inv;
        }
        for (long i = 0; i < n; ++i) {
            if (i == col || M.at(i, col) == 0) continue;
            QQ f = M.at(i, col);
            for (long j = 0; j < n; ++j) {
                M.at(i, j) -= f * M.at(col, j);
                I.at(i, j) -= f * I.at(col, j);
            }
        }
    }
    return I;
}

QQ det_q(const QMat& A) {
    if (A.rows != A.cols) throw InternalError("det_q: square matrix required");
    long n = A.rows;
    QMat M = A;
    QQ det(1);
    for (long col = 0; col < n; ++col) {
        long p = -1;
        for (long i = col; i < n; ++i)
            if (M.at(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) return QQ(0);
        if (p != col) {
            for (long j = 0; j < n; ++j) M.at(p, j).swap(M.at(col, j));
            det = -det;
        }
        det *= M.at(col, col);
        QQ inv = 1 / M.at(col, col);
        for (long i = col + 1; i < n; ++i) {
            if (M.at(i, col) == 0) continue;
            QQ f = M.at(i, col) * inv;
            for (long j = col; j < n; ++j) M.at(i, j) -= f * M.at(col, j);
        }
    }
    return det;
}

}  // namespace periodica
