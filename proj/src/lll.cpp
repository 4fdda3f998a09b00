#include "periodica/lattice.hpp"

#include <mpfr.h>

#include <algorithm>
#include <utility>

#include "periodica/error.hpp"
#include "periodica/real.hpp"

namespace periodica {

ZMat IntegerLatticeBasis::as_matrix() const {
    ZMat m(dim, count());
    for (long j = 0; j < count(); ++j)
        for (long i = 0; i < dim; ++i) m.at(i, j) = columns[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return m;
}

IntegerLatticeBasis IntegerLatticeBasis::from_matrix(const ZMat& m) {
    IntegerLatticeBasis b;
    b.dim = m.rows;
    b.columns.assign(static_cast<size_t>(m.cols), std::vector<ZZ>(static_cast<size_t>(m.rows)));
    for (long j = 0; j < m.cols; ++j)
        for (long i = 0; i < m.rows; ++i) b.columns[static_cast<size_t>(j)][static_cast<size_t>(i)] = m.at(i, j);
    return b;
}

namespace {

ZZ dot_z(const std::vector<ZZ>& x, const std::vector<ZZ>& y) {
    ZZ acc = 0;
    for (size_t i = 0; i < x.size(); ++i) mpz_addmul(acc.get_mpz_t(), x[i].get_mpz_t(), y[i].get_mpz_t());
    return acc;
}

Real to_real(const ZZ& z, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_z(r.get(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

// v -= x * w
void submul(std::vector<ZZ>& v, const std::vector<ZZ>& w, const ZZ& x) {
    for (size_t i = 0; i < v.size(); ++i) mpz_submul(v[i].get_mpz_t(), x.get_mpz_t(), w[i].get_mpz_t());
}

// Floating Gram-Schmidt layer over an exact integer basis.  Rows 0..kmax
// carry valid mu/bstar2 data; updates follow the classical LLL bookkeeping
// and a full row can always be recomputed from exact inner products.
struct GsoState {
    mpfr_prec_t P;
    std::vector<std::vector<ZZ>>* cols;
    std::vector<std::vector<Real>> mu;  // mu[i][j], j < i
    std::vector<Real> bstar2;
    long kmax = -1;

    GsoState(std::vector<std::vector<ZZ>>* c, mpfr_prec_t prec) : P(prec), cols(c) {
        const size_t n = c->size();
        mu.resize(n);
        for (size_t i = 0; i < n; ++i) mu[i].assign(i, Real(P));
        bstar2.assign(n, Real(P));
    }

    // False when the projected norm is not clearly positive, which at
    // sufficient precision only happens for dependent columns.
    bool row(long i) {
        auto& b = *cols;
        std::vector<Real> r(static_cast<size_t>(i), Real(P));
        for (long j = 0; j < i; ++j) {
            Real rij = to_real(dot_z(b[static_cast<size_t>(i)], b[static_cast<size_t>(j)]), P);
            for (long l = 0; l < j; ++l)
                rij -= mu[static_cast<size_t>(j)][static_cast<size_t>(l)] * r[static_cast<size_t>(l)];
            r[static_cast<size_t>(j)] = rij;
            mu[static_cast<size_t>(i)][static_cast<size_t>(j)] = rij / bstar2[static_cast<size_t>(j)];
        }
        Real bi = to_real(dot_z(b[static_cast<size_t>(i)], b[static_cast<size_t>(i)]), P);
        for (long l = 0; l < i; ++l)
            bi -= mu[static_cast<size_t>(i)][static_cast<size_t>(l)] * r[static_cast<size_t>(l)];
        bstar2[static_cast<size_t>(i)] = bi;
        return bi.is_finite() && bi > 0;
    }
};

struct Reducer {
    double delta;
    mpfr_prec_t P;
    std::vector<std::vector<ZZ>>& b;
    std::vector<std::vector<ZZ>>& u;
    GsoState g;

    Reducer(double d, mpfr_prec_t prec, std::vector<std::vector<ZZ>>& basis,
            std::vector<std::vector<ZZ>>& trans)
        : delta(d), P(prec), b(basis), u(trans), g(&basis, prec) {}

    void size_reduce(long k, long j) {
        Real& m = g.mu[static_cast<size_t>(k)][static_cast<size_t>(j)];
        Real half(0.5, P);
        if (!(abs(m) > half)) return;
        ZZ x;
        mpfr_get_z(x.get_mpz_t(), m.get(), MPFR_RNDN);
        if (x == 0) return;
        submul(b[static_cast<size_t>(k)], b[static_cast<size_t>(j)], x);
        submul(u[static_cast<size_t>(k)], u[static_cast<size_t>(j)], x);
        Real xr = to_real(x, P);
        for (long l = 0; l < j; ++l)
            g.mu[static_cast<size_t>(k)][static_cast<size_t>(l)] -=
                xr * g.mu[static_cast<size_t>(j)][static_cast<size_t>(l)];
        m -= xr;
    }

    void swap_step(long k) {
        const long p = k - 1;
        std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(p)]);
        std::swap(u[static_cast<size_t>(k)], u[static_cast<size_t>(p)]);
        for (long j = 0; j < p; ++j)
            std::swap(g.mu[static_cast<size_t>(k)][static_cast<size_t>(j)],
                      g.mu[static_cast<size_t>(p)][static_cast<size_t>(j)]);
        Real m = g.mu[static_cast<size_t>(k)][static_cast<size_t>(p)];
        Real Bp = g.bstar2[static_cast<size_t>(p)];
        Real Bk = g.bstar2[static_cast<size_t>(k)];
        Real Bnew = Bk + m * m * Bp;
        Real mnew = m * Bp / Bnew;
        g.mu[static_cast<size_t>(k)][static_cast<size_t>(p)] = mnew;
        g.bstar2[static_cast<size_t>(k)] = Bp * Bk / Bnew;
        g.bstar2[static_cast<size_t>(p)] = Bnew;
        for (long i = k + 1; i <= g.kmax; ++i) {
            Real t = g.mu[static_cast<size_t>(i)][static_cast<size_t>(k)];
            g.mu[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                g.mu[static_cast<size_t>(i)][static_cast<size_t>(p)] - m * t;
            g.mu[static_cast<size_t>(i)][static_cast<size_t>(p)] =
                t + mnew * g.mu[static_cast<size_t>(i)][static_cast<size_t>(k)];
        }
    }

    // False when the iteration budget runs out (retry at higher precision).
    bool run() {
        const long n = static_cast<long>(b.size());
        if (n == 0) return true;
        g.kmax = 0;
        if (!g.row(0)) return false;
        Real deltar(delta, P);
        long budget = 5000 + 64 * n * n;
        for (long k = 1; k < n;) {
            if (--budget < 0) return false;
            if (k > g.kmax) {
                g.kmax = k;
                if (!g.row(k)) return false;
            }
            size_reduce(k, k - 1);
            const Real& m = g.mu[static_cast<size_t>(k)][static_cast<size_t>(k - 1)];
            if (g.bstar2[static_cast<size_t>(k)] <
                (deltar - m * m) * g.bstar2[static_cast<size_t>(k - 1)]) {
                swap_step(k);
                k = std::max(k - 1, 1L);
            } else {
                for (long j = k - 2; j >= 0; --j) size_reduce(k, j);
                ++k;
            }
        }
        return true;
    }

    // Recomputes the GSO from exact inner products and checks delta-reducedness
    // with a small slack for the floating layer.
    bool verify() {
        const long n = static_cast<long>(b.size());
        GsoState f(&b, P);
        Real slack = Real::pow2(-20, P);
        Real half = Real(0.5, P) + slack;
        Real deltar = Real(delta, P);
        for (long i = 0; i < n; ++i) {
            if (!f.row(i)) return false;
            for (long j = 0; j < i; ++j)
                if (abs(f.mu[static_cast<size_t>(i)][static_cast<size_t>(j)]) > half) return false;
            if (i > 0) {
                const Real& m = f.mu[static_cast<size_t>(i)][static_cast<size_t>(i - 1)];
                Real lhs = f.bstar2[static_cast<size_t>(i)] + slack * f.bstar2[static_cast<size_t>(i - 1)];
                if (lhs < (deltar - m * m) * f.bstar2[static_cast<size_t>(i - 1)]) return false;
            }
        }
        return true;
    }
};

}  // namespace

LLLResult lll_reduce(const IntegerLatticeBasis& basis, double delta) {
    const long n = basis.count();
    LLLResult out;
    out.basis = basis;
    out.transform = ZMat::identity(n);
    if (n == 0) return out;

    long maxbits = 1;
    for (const auto& col : basis.columns)
        for (const ZZ& e : col)
            if (e != 0) maxbits = std::max(maxbits, static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)));

    std::vector<std::vector<ZZ>> u(static_cast<size_t>(n), std::vector<ZZ>(static_cast<size_t>(n)));
    for (long j = 0; j < n; ++j) u[static_cast<size_t>(j)][static_cast<size_t>(j)] = 1;

    // Columns of size 2^b can have Gram-Schmidt norms near 1, so the floating
    // layer needs headroom for the full squared magnitude.
    mpfr_prec_t P = static_cast<mpfr_prec_t>(std::max<long>(192, 2 * maxbits + 96));
    for (int attempt = 0; attempt < 6; ++attempt, P *= 2) {
        Reducer red(delta, P, out.basis.columns, u);
        if (red.run() && red.verify()) {
            ZMat t(n, n);
            for (long j = 0; j < n; ++j)
                for (long i = 0; i < n; ++i) t.at(i, j) = u[static_cast<size_t>(j)][static_cast<size_t>(i)];
            out.transform = t;
            return out;
        }
    }
    throw InternalError("lattice reduction failed to stabilize");
}

}  // namespace periodica
