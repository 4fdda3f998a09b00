#include "periodica/abelian.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "periodica/error.hpp"
#include "periodica/intfactor.hpp"

namespace periodica {

namespace {

Real real_of_q(const QQ& q, mpfr_prec_t P) {
    Real r(P);
    mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

CMat cmat_of_q(const QMat& m, mpfr_prec_t P) {
    CMat out(m.rows, m.cols, P);
    for (long i = 0; i < m.rows; ++i)
        for (long j = 0; j < m.cols; ++j)
            out.at(i, j) = Cplx(real_of_q(m.at(i, j), P), Real(0L, P));
    return out;
}

CMat alpha_block(const CMat& omega) {
    long g = omega.rows;
    CMat out(g, g, omega.at(0, 0).prec());
    for (long i = 0; i < g; ++i)
        for (long j = 0; j < g; ++j) out.at(i, j) = omega.at(i, j);
    return out;
}

mpfr_prec_t prec_of(const PeriodMatrix& P) { return P.omega.at(0, 0).prec(); }

std::vector<QQ> vec_of(const QMat& m) {
    std::vector<QQ> v(m.a.begin(), m.a.end());
    return v;
}

ZMat neg(const ZMat& m) {
    ZMat out(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) out.a[i] = -m.a[i];
    return out;
}

QMat scale(const QMat& m, const QQ& s) {
    QMat out(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) out.a[i] = m.a[i] * s;
    return out;
}

// Rosati adjoint on homology coordinates: x -> -E x^T E.
QMat adjoint_q(const QMat& x, const ZMat& E) {
    QMat e(E);
    return scale(e * x.transpose() * e, QQ(-1));
}

ZMat adjoint_z(const ZMat& x, const ZMat& E) { return neg(E * x.transpose() * E); }

// Reduced row echelon form of A with repeated left-solves x*A = b.  The
// transform U satisfies U*A = R.
struct RowSolver {
    QMat R, U;
    std::vector<long> pivot;

    explicit RowSolver(const QMat& A) : R(A), U(QMat::identity(A.rows)) {
        long r = 0;
        for (long c = 0; c < R.cols && r < R.rows; ++c) {
            long p = -1;
            for (long i = r; i < R.rows; ++i)
                if (R.at(i, c) != 0) { p = i; break; }
            if (p < 0) continue;
            if (p != r)
                for (long j = 0; j < R.cols; ++j) {
                    std::swap(R.at(p, j), R.at(r, j));
                    if (j < U.cols) std::swap(U.at(p, j), U.at(r, j));
                }
            QQ inv = 1 / R.at(r, c);
            for (long j = 0; j < R.cols; ++j) R.at(r, j) *= inv;
            for (long j = 0; j < U.cols; ++j) U.at(r, j) *= inv;
            for (long i = 0; i < R.rows; ++i) {
                if (i == r || R.at(i, c) == 0) continue;
                QQ f = R.at(i, c);
                for (long j = 0; j < R.cols; ++j) R.at(i, j) -= f * R.at(r, j);
                for (long j = 0; j < U.cols; ++j) U.at(i, j) -= f * U.at(r, j);
            }
            pivot.push_back(c);
            ++r;
        }
    }

    long rank() const { return static_cast<long>(pivot.size()); }

    bool solve(const std::vector<QQ>& b, std::vector<QQ>& x) const {
        long d = rank();
        std::vector<QQ> y(static_cast<size_t>(R.rows));
        for (long i = 0; i < d; ++i) y[static_cast<size_t>(i)] = b[static_cast<size_t>(pivot[i])];
        for (long j = 0; j < R.cols; ++j) {
            QQ s;
            for (long i = 0; i < d; ++i) s += y[static_cast<size_t>(i)] * R.at(i, j);
            if (s != b[static_cast<size_t>(j)]) return false;
        }
        x.assign(static_cast<size_t>(U.cols), QQ());
        for (long j = 0; j < U.cols; ++j) {
            QQ s;
            for (long i = 0; i < R.rows; ++i) s += y[static_cast<size_t>(i)] * U.at(i, j);
            x[static_cast<size_t>(j)] = s;
        }
        return true;
    }
};

// Monic extended gcd over Q: g = u*a + v*b.
QPoly poly_xgcd(const QPoly& a, const QPoly& b, QPoly& u, QPoly& v) {
    QPoly r0 = a, r1 = b;
    QPoly u0 = QPoly::constant(1), u1;
    QPoly v0, v1 = QPoly::constant(1);
    while (!r1.is_zero()) {
        QPoly q, r;
        divmod(r0, r1, q, r);
        QPoly un = u0 - q * u1, vn = v0 - q * v1;
        r0 = r1; r1 = r;
        u0 = u1; u1 = un;
        v0 = v1; v1 = vn;
    }
    QQ lead = r0.lead();
    QQ il = 1 / lead;
    u = u0 * il;
    v = v0 * il;
    return r0 * il;
}

QMat eval_poly(const QPoly& p, const QMat& y) {
    long n = y.rows;
    QMat acc(n, n);
    for (int k = p.degree(); k >= 0; --k) {
        acc = acc * y;
        for (long i = 0; i < n; ++i) acc.at(i, i) += p.c[static_cast<size_t>(k)];
    }
    return acc;
}

bool lex_less_q(const QMat& a, const QMat& b) {
    for (size_t i = 0; i < a.a.size(); ++i) {
        int c = cmp(a.a[i], b.a[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

struct Rng {
    unsigned long long s = 0xb5ad4eceda1ce2a9ull;
    unsigned long long next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    // uniform in [-h, h]
    long pick(long h) { return static_cast<long>(next() % (2 * h + 1)) - h; }
};

}  // namespace

ZMat std_symplectic_form(long g) {
    ZMat E(2 * g, 2 * g);
    for (long i = 0; i < g; ++i) {
        E.at(i, g + i) = 1;
        E.at(g + i, i) = -1;
    }
    return E;
}

static ZMat take_block(const ZMat& R, long r0, long c0, long nr, long nc) {
    ZMat out(nr, nc);
    for (long i = 0; i < nr; ++i)
        for (long j = 0; j < nc; ++j) out.at(i, j) = R.at(r0 + i, c0 + j);
    return out;
}

ZMat HomEntry::block_d() const { return take_block(R, 0, 0, R.rows / 2, R.cols / 2); }
ZMat HomEntry::block_b() const { return take_block(R, 0, R.cols / 2, R.rows / 2, R.cols / 2); }
ZMat HomEntry::block_c() const { return take_block(R, R.rows / 2, 0, R.rows / 2, R.cols / 2); }
ZMat HomEntry::block_a() const {
    return take_block(R, R.rows / 2, R.cols / 2, R.rows / 2, R.cols / 2);
}

CMat tangent_of(const PeriodMatrix& P1, const PeriodMatrix& P2, const QMat& R) {
    mpfr_prec_t P = prec_of(P1);
    CMat prod = P2.omega * cmat_of_q(R, P);  // g2 x 2g1
    long g1 = P1.genus, g2 = P2.genus;
    CMat rhs(g1, g2, P);  // (omega2 R)_alpha transposed
    for (long i = 0; i < g2; ++i)
        for (long j = 0; j < g1; ++j) rhs.at(j, i) = prod.at(i, j);
    CMat xt = lu_solve(alpha_block(P1.omega).transpose(), rhs);
    return xt.transpose();
}

Real hom_residual(const PeriodMatrix& P1, const PeriodMatrix& P2, const ZMat& R,
                  const CMat& T) {
    mpfr_prec_t P = prec_of(P1);
    return max_abs(T * P1.omega - P2.omega * cmat_of_q(QMat(R), P));
}

ZMat homology_from_tangent(const PeriodMatrix& P1, const PeriodMatrix& P2, const CMat& T,
                           Real* defect) {
    mpfr_prec_t P = prec_of(P1);
    long g1 = P1.genus, g2 = P2.genus;
    CMat S(2 * g2, 2 * g2, P), rhs(2 * g2, 2 * g1, P);
    CMat top = T * P1.omega;
    for (long i = 0; i < g2; ++i) {
        for (long j = 0; j < 2 * g2; ++j) {
            S.at(i, j) = P2.omega.at(i, j);
            S.at(g2 + i, j) = P2.omega.at(i, j).conj();
        }
        for (long j = 0; j < 2 * g1; ++j) {
            rhs.at(i, j) = top.at(i, j);
            rhs.at(g2 + i, j) = top.at(i, j).conj();
        }
    }
    CMat X = lu_solve(S, rhs);
    ZMat R(2 * g2, 2 * g1);
    Real worst(0L, P);
    Real t(P);
    for (long i = 0; i < 2 * g2; ++i)
        for (long j = 0; j < 2 * g1; ++j) {
            mpfr_get_z(R.at(i, j).get_mpz_t(), X.at(i, j).re.get(), MPFR_RNDN);
            mpfr_sub_z(t.get(), X.at(i, j).re.get(), R.at(i, j).get_mpz_t(), MPFR_RNDN);
            mpfr_abs(t.get(), t.get(), MPFR_RNDN);
            if (t > worst) worst = t;
            mpfr_abs(t.get(), X.at(i, j).im.get(), MPFR_RNDN);
            if (t > worst) worst = t;
        }
    if (defect) *defect = worst;
    return R;
}

// Real linear system on the normalized picture Omega_i = (1 | tau_i): with
// R = [[D, B], [C, A]] the relation T Omega1 = Omega2 R reduces to
// (D + tau2 C) tau1 - B - tau2 A = 0, one complex equation per (i, j).
// Unknowns are ordered (D, B, C, A), each block row major.
static std::vector<std::vector<Real>> hom_system(const CMat& tau1, const CMat& tau2,
                                                 mpfr_prec_t P) {
    long g1 = tau1.rows, g2 = tau2.rows;
    long s = g1 * g2, n = 4 * s;
    auto col = [&](long which, long r, long c) { return which * s + r * g1 + c; };
    std::vector<std::vector<Real>> M(static_cast<size_t>(2 * s));
    for (auto& row : M) row.assign(static_cast<size_t>(n), Real(0L, P));
    std::vector<Cplx> coef(static_cast<size_t>(n), Cplx(P));
    for (long i = 0; i < g2; ++i)
        for (long j = 0; j < g1; ++j) {
            for (auto& z : coef) z = Cplx(P);
            for (long l = 0; l < g1; ++l) coef[static_cast<size_t>(col(0, i, l))] = tau1.at(l, j);
            coef[static_cast<size_t>(col(1, i, j))] = Cplx(-1, P);
            for (long k = 0; k < g2; ++k) {
                for (long l = 0; l < g1; ++l)
                    coef[static_cast<size_t>(col(2, k, l))] = tau2.at(i, k) * tau1.at(l, j);
                coef[static_cast<size_t>(col(3, k, j))] = -tau2.at(i, k);
            }
            auto& re = M[static_cast<size_t>(2 * (i * g1 + j))];
            auto& im = M[static_cast<size_t>(2 * (i * g1 + j) + 1)];
            for (long c = 0; c < n; ++c) {
                re[static_cast<size_t>(c)] = coef[static_cast<size_t>(c)].re;
                im[static_cast<size_t>(c)] = coef[static_cast<size_t>(c)].im;
            }
        }
    return M;
}

HomBasis homomorphisms(const PeriodMatrix& P1, const PeriodMatrix& P2,
                       const PrecisionContext& ctx) {
    if (P1.precision_bits != P2.precision_bits)
        throw InternalError("homomorphism search needs both period matrices at one precision");
    long g1 = P1.genus, g2 = P2.genus;
    HomBasis out;
    out.genus1 = g1;
    out.genus2 = g2;
    if (g1 == 0 || g2 == 0) return out;
    mpfr_prec_t P = ctx.prec();
    CMat tau1 = riemann_matrix(P1).tau, tau2 = riemann_matrix(P2).tau;
    IntegerLatticeBasis kern = approximate_kernel(hom_system(tau1, tau2, P), ctx);
    long s = g1 * g2;
    Real accept = Real::pow2(-(ctx.working_bits / 2), P);
    Real band_hi = Real::pow2(-(ctx.working_bits / 4), P);
    for (const auto& v : kern.columns) {
        ZMat R(2 * g2, 2 * g1);
        for (long i = 0; i < g2; ++i)
            for (long j = 0; j < g1; ++j) {
                R.at(i, j) = v[static_cast<size_t>(i * g1 + j)];
                R.at(i, g1 + j) = v[static_cast<size_t>(s + i * g1 + j)];
                R.at(g2 + i, j) = v[static_cast<size_t>(2 * s + i * g1 + j)];
                R.at(g2 + i, g1 + j) = v[static_cast<size_t>(3 * s + i * g1 + j)];
            }
        CMat T = tangent_of(P1, P2, QMat(R));
        Real res = hom_residual(P1, P2, R, T);
        if (res < accept) {
            out.entries.push_back({std::move(R), std::move(T), std::move(res)});
        } else if (res < band_hi) {
            throw PrecisionTooLow(
                "homomorphism candidate residual sits between 2^-(B/2) and 2^-(B/4)");
        }
    }
    out.rank = static_cast<long>(out.entries.size());
    return out;
}

HomEntry rosati(const HomEntry& h, const PeriodMatrix& P) {
    if (h.R.rows != h.R.cols) throw InternalError("rosati adjoint needs an endomorphism");
    ZMat E = std_symplectic_form(P.genus);
    ZMat Rd = adjoint_z(h.R, E);
    CMat T = tangent_of(P, P, QMat(Rd));
    Real res = hom_residual(P, P, Rd, T);
    return {std::move(Rd), std::move(T), std::move(res)};
}

namespace {

// Central block of End tensor Q at one primitive symmetric idempotent.
struct Block {
    QMat e;
    QPoly center_poly;           // irreducible factor cutting the block out
    long rank = 0;               // homology rank of e
    long dim = 0;                // Q-dimension of the corner e*A
    long mult = 1;               // matrix size k when a rank rank/k element exists
    std::vector<QMat> corner;    // Q-basis of the corner
    std::vector<QMat> units;     // e, or matrix units when recognized as M_2(Q)
    bool recognized = false;
};

// Greedy row-independent subset keeping its own echelon accumulator.
struct SpanTracker {
    std::vector<std::vector<QQ>> rows;
    std::vector<long> pivots;

    bool add(std::vector<QQ> v) {
        for (size_t r = 0; r < rows.size(); ++r) {
            long p = pivots[r];
            if (v[static_cast<size_t>(p)] == 0) continue;
            QQ f = v[static_cast<size_t>(p)] / rows[r][static_cast<size_t>(p)];
            for (size_t j = 0; j < v.size(); ++j) v[j] -= f * rows[r][j];
        }
        long p = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) { p = static_cast<long>(j); break; }
        if (p < 0) return false;
        rows.push_back(std::move(v));
        pivots.push_back(p);
        return true;
    }
};

std::vector<QMat> corner_basis(const QMat& e, const std::vector<ZMat>& basis) {
    std::vector<QMat> out;
    SpanTracker span;
    for (const auto& b : basis) {
        QMat c = e * QMat(b);
        if (c.is_zero()) continue;
        if (span.add(vec_of(c))) out.push_back(std::move(c));
    }
    return out;
}

// Minimal homology rank over small corner combinations; returns the witness.
long minimal_corner_rank(const std::vector<QMat>& corner, QMat& witness) {
    long best = -1;
    auto consider = [&](const QMat& x) {
        if (x.is_zero()) return;
        long r = rank_q(x);
        if (best < 0 || r < best) {
            best = r;
            witness = x;
        }
    };
    for (const auto& c : corner) consider(c);
    for (size_t i = 0; i < corner.size(); ++i)
        for (size_t j = i + 1; j < corner.size(); ++j) {
            consider(corner[i] + corner[j]);
            consider(corner[i] - corner[j]);
        }
    return best;
}

// Matrix units of a corner recognized as M_2(Q), from a block-rank-one
// element z: z' z is symmetric of block rank one with positive trace, so it
// rescales to the first diagonal unit.
bool split_m2(const Block& blk, const QMat& z, const ZMat& E, std::vector<QMat>& units) {
    QMat s = adjoint_q(z, E) * z;
    if (s.is_zero()) return false;
    QMat s2 = s * s;
    QQ t;
    for (size_t i = 0; i < s.a.size(); ++i)
        if (s.a[i] != 0) { t = s2.a[i] / s.a[i]; break; }
    if (t == 0 || !(s2 == scale(s, t))) return false;
    QMat f11 = scale(s, 1 / t);
    QMat f22 = blk.e - f11;
    if (f22.is_zero()) return false;
    for (const auto& u : blk.corner) {
        QMat f12 = f11 * u * f22;
        if (f12.is_zero()) continue;
        for (const auto& w : blk.corner) {
            QMat f21 = f22 * w * f11;
            QMat p = f12 * f21;
            if (p.is_zero()) continue;
            QQ lam;
            for (size_t i = 0; i < p.a.size(); ++i)
                if (f11.a[i] != 0) { lam = p.a[i] / f11.a[i]; break; }
            if (lam == 0 || !(p == scale(f11, lam))) continue;
            f21 = scale(f21, 1 / lam);
            if (!(f12 * f21 == f11) || !(f21 * f12 == f22)) continue;
            units = {f11, f12, f21, f22};
            return true;
        }
    }
    return false;
}

}  // namespace

EndStructure endomorphism_structure(const PeriodMatrix& P, const PrecisionContext& ctx) {
    EndStructure out;
    out.hom = homomorphisms(P, P, ctx);
    long d = out.hom.rank;
    long g = P.genus;
    long n2 = 4 * g * g;
    if (d == 0) throw InternalError("endomorphism lattice came back empty");

    std::vector<ZMat> basis;
    basis.reserve(static_cast<size_t>(d));
    for (const auto& h : out.hom.entries) basis.push_back(h.R);

    QMat bmat(d, n2);
    for (long i = 0; i < d; ++i)
        for (long p = 0; p < n2; ++p) bmat.at(i, p) = QQ(basis[static_cast<size_t>(i)].a[static_cast<size_t>(p)]);
    RowSolver solver(bmat);
    if (solver.rank() != d)
        throw InternalError("homomorphism basis is linearly dependent");

    // Structure constants: each product of basis elements must come back as a
    // rational combination of the basis.
    out.mult_table.assign(static_cast<size_t>(d), QMat(d, d));
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            ZMat prod = basis[static_cast<size_t>(i)] * basis[static_cast<size_t>(j)];
            std::vector<QQ> b(static_cast<size_t>(n2)), x;
            for (long p = 0; p < n2; ++p) b[static_cast<size_t>(p)] = QQ(prod.a[static_cast<size_t>(p)]);
            if (!solver.solve(b, x))
                throw StructureConstantsNotRational(
                    "basis product leaves the endomorphism lattice span");
            for (long k = 0; k < d; ++k) out.mult_table[static_cast<size_t>(i)].at(j, k) = x[static_cast<size_t>(k)];
        }

    // Rosati action in basis coordinates and its fixed subspace.
    ZMat E = std_symplectic_form(g);
    QMat rs(d, d);
    for (long i = 0; i < d; ++i) {
        ZMat adj = adjoint_z(basis[static_cast<size_t>(i)], E);
        std::vector<QQ> b(static_cast<size_t>(n2)), x;
        for (long p = 0; p < n2; ++p) b[static_cast<size_t>(p)] = QQ(adj.a[static_cast<size_t>(p)]);
        if (!solver.solve(b, x))
            throw StructureConstantsNotRational("Rosati adjoint leaves the lattice span");
        for (long k = 0; k < d; ++k) rs.at(i, k) = x[static_cast<size_t>(k)];
    }
    out.rosati_fixed_dim = d - rank_q(rs - QMat::identity(d));

    // Center of the algebra, as integer coordinate vectors in the basis.
    ZMat comm(d * d, d);
    {
        // scale each structure row to integers first
        for (long j = 0; j < d; ++j)
            for (long k = 0; k < d; ++k) {
                ZZ den(1);
                for (long i = 0; i < d; ++i) {
                    const QQ& a = out.mult_table[static_cast<size_t>(i)].at(j, k);
                    const QQ& b = out.mult_table[static_cast<size_t>(j)].at(i, k);
                    den = lcm(den, a.get_den());
                    den = lcm(den, b.get_den());
                }
                for (long i = 0; i < d; ++i) {
                    QQ dif = (out.mult_table[static_cast<size_t>(i)].at(j, k) -
                              out.mult_table[static_cast<size_t>(j)].at(i, k)) *
                             QQ(den);
                    comm.at(j * d + k, i) = dif.get_num();
                }
            }
    }
    ZMat zc = kernel_z(comm);
    std::vector<ZMat> center;
    for (long t = 0; t < zc.rows; ++t) {
        ZMat z(2 * g, 2 * g);
        for (long i = 0; i < d; ++i)
            for (long p = 0; p < n2; ++p) {
                ZZ term = zc.at(t, i) * basis[static_cast<size_t>(i)].a[static_cast<size_t>(p)];
                z.a[static_cast<size_t>(p)] += term;
            }
        center.push_back(std::move(z));
    }

    // Rosati-fixed part of the center.
    ZMat fixsys(n2, static_cast<long>(center.size()));
    for (size_t t = 0; t < center.size(); ++t) {
        ZMat dif = adjoint_z(center[t], E) - center[t];
        for (long p = 0; p < n2; ++p) fixsys.at(p, static_cast<long>(t)) = dif.a[static_cast<size_t>(p)];
    }
    ZMat fw = kernel_z(fixsys);
    std::vector<ZMat> fixed;
    for (long u = 0; u < fw.rows; ++u) {
        ZMat w(2 * g, 2 * g);
        for (size_t t = 0; t < center.size(); ++t)
            for (long p = 0; p < n2; ++p) w.a[static_cast<size_t>(p)] += fw.at(u, static_cast<long>(t)) * center[t].a[static_cast<size_t>(p)];
        fixed.push_back(std::move(w));
    }
    long f = static_cast<long>(fixed.size());
    if (f == 0) throw InternalError("identity endomorphism missing from the fixed center");

    // A generic element of the fixed center splits it completely: its minimal
    // polynomial is squarefree of full degree, and the partial-fraction
    // idempotents of the factors are the primitive symmetric central ones.
    std::vector<ZMat> candidates;
    for (long u = 0; u < f; ++u) candidates.push_back(fixed[static_cast<size_t>(u)]);
    for (long u = 0; u < f && candidates.size() < 40; ++u)
        for (long v = u + 1; v < f && candidates.size() < 40; ++v)
            candidates.push_back(fixed[static_cast<size_t>(u)] + fixed[static_cast<size_t>(v)]);
    Rng rng;
    for (int t = 0; t < 20; ++t) {
        ZMat y(2 * g, 2 * g);
        for (long u = 0; u < f; ++u) {
            long c = rng.pick(10);
            if (c == 0) continue;
            for (long p = 0; p < n2; ++p) y.a[static_cast<size_t>(p)] += c * fixed[static_cast<size_t>(u)].a[static_cast<size_t>(p)];
        }
        candidates.push_back(std::move(y));
    }

    std::vector<Block> blocks;
    for (const auto& y : candidates) {
        if (y.is_zero()) continue;
        // Krylov minimal polynomial of y over Q.
        QMat pows(f + 1, n2);
        QPoly mp;
        {
            ZMat acc = ZMat::identity(2 * g);
            long deg = -1;
            std::vector<QQ> coef;
            for (long k = 0; k <= f; ++k) {
                for (long p = 0; p < n2; ++p) pows.at(k, p) = QQ(acc.a[static_cast<size_t>(p)]);
                if (k > 0) {
                    QMat sub(k, n2);
                    for (long i = 0; i < k; ++i)
                        for (long p = 0; p < n2; ++p) sub.at(i, p) = pows.at(i, p);
                    std::vector<QQ> b(static_cast<size_t>(n2)), x;
                    for (long p = 0; p < n2; ++p) b[static_cast<size_t>(p)] = pows.at(k, p);
                    if (solve_left_q(sub, b, x)) {
                        deg = k;
                        coef = std::move(x);
                        break;
                    }
                }
                acc = acc * y;
            }
            if (deg < 0) continue;  // cannot happen: degree <= f
            std::vector<QQ> c(static_cast<size_t>(deg + 1));
            for (long k = 0; k < deg; ++k) c[static_cast<size_t>(k)] = -coef[static_cast<size_t>(k)];
            c[static_cast<size_t>(deg)] = 1;
            mp = QPoly(std::move(c));
        }
        if (mp.degree() != static_cast<int>(f)) continue;
        if (gcd(mp, mp.derivative()).degree() != 0) continue;
        auto factors = factor_q(mp);
        QMat ysq(2 * g, 2 * g);
        for (long p = 0; p < n2; ++p) ysq.a[static_cast<size_t>(p)] = QQ(y.a[static_cast<size_t>(p)]);
        std::vector<Block> found;
        QMat total(2 * g, 2 * g);
        bool ok = true;
        for (const auto& fac : factors) {
            QPoly rest, rem;
            divmod(mp, fac.poly, rest, rem);
            QPoly u, v;
            poly_xgcd(rest, fac.poly, u, v);
            QPoly q = u * rest;  // 1 mod fac, 0 mod the others
            QMat e = eval_poly(q, ysq);
            if (!(e * e == e)) { ok = false; break; }
            Block blk;
            blk.e = std::move(e);
            blk.center_poly = fac.poly;
            total = total + blk.e;
            found.push_back(std::move(blk));
        }
        if (!ok || !(total == QMat::identity(2 * g))) continue;
        bool orth = true;
        for (size_t i = 0; i < found.size() && orth; ++i)
            for (size_t j = i + 1; j < found.size() && orth; ++j)
                if (!(found[i].e * found[j].e).is_zero()) orth = false;
        bool sym = true;
        for (const auto& blk : found)
            if (!(adjoint_q(blk.e, E) == blk.e)) { sym = false; break; }
        if (!orth || !sym) continue;
        blocks = std::move(found);
        break;
    }
    if (blocks.empty())
        throw IdempotentSearchFailed(
            "no generic central element after the sweep and 20 random draws");

    for (auto& blk : blocks) {
        blk.rank = rank_q(blk.e);
        blk.corner = corner_basis(blk.e, basis);
        blk.dim = static_cast<long>(blk.corner.size());
        long cdeg = blk.center_poly.degree();
        if (blk.dim == cdeg) {
            // commutative block: a field
            blk.mult = 1;
            blk.recognized = (blk.dim == 1);
            if (blk.recognized) blk.units = {blk.e};
            continue;
        }
        QMat witness;
        long rmin = minimal_corner_rank(blk.corner, witness);
        if (rmin > 0 && rmin < blk.rank && blk.rank % rmin == 0) blk.mult = blk.rank / rmin;
        if (cdeg == 1 && blk.dim == 4 && blk.mult == 2)
            blk.recognized = split_m2(blk, witness, E, blk.units);
    }

    std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
        if (a.rank != b.rank) return a.rank < b.rank;
        return lex_less_q(a.e, b.e);
    });

    bool all_recognized = true;
    std::vector<QMat> std_basis;
    for (const auto& blk : blocks) {
        out.idempotents.push_back(blk.e);
        out.idempotent_rank.push_back(blk.rank);
        out.multiplicity.push_back(blk.mult);
        if (blk.recognized)
            std_basis.insert(std_basis.end(), blk.units.begin(), blk.units.end());
        else
            all_recognized = false;
    }

    if (all_recognized && static_cast<long>(std_basis.size()) == d) {
        QMat smat(d, n2);
        for (long i = 0; i < d; ++i) {
            auto v = vec_of(std_basis[static_cast<size_t>(i)]);
            for (long p = 0; p < n2; ++p) smat.at(i, p) = v[static_cast<size_t>(p)];
        }
        RowSolver ssol(smat);
        if (ssol.rank() == d) {
            QMat lam(d, d);
            bool okc = true;
            for (long i = 0; i < d && okc; ++i) {
                std::vector<QQ> b(static_cast<size_t>(n2)), x;
                for (long p = 0; p < n2; ++p) b[static_cast<size_t>(p)] = QQ(basis[static_cast<size_t>(i)].a[static_cast<size_t>(p)]);
                okc = ssol.solve(b, x);
                if (okc)
                    for (long k = 0; k < d; ++k) lam.at(i, k) = x[static_cast<size_t>(k)];
            }
            if (okc) {
                QQ det = det_q(lam);
                if (det != 0 && det.get_den() == 1) {
                    ZZ idx = det.get_num();
                    out.order_index = abs(idx);
                }
            }
        }
    }
    return out;
}

std::vector<IsogenyFactor> decompose(const PeriodMatrix& P, const EndStructure& endo,
                                     const PrecisionContext& ctx) {
    std::vector<IsogenyFactor> out;
    long g = P.genus;
    mpfr_prec_t prec = prec_of(P);
    for (size_t bi = 0; bi < endo.idempotents.size(); ++bi) {
        const QMat& e = endo.idempotents[bi];
        IsogenyFactor fac;
        fac.multiplicity = endo.multiplicity[bi];
        long r = endo.idempotent_rank[bi];
        fac.dimension = (r % (2 * fac.multiplicity) == 0) ? r / (2 * fac.multiplicity) : r / 2;

        // saturated homology image of e
        ZZ den(1);
        for (const auto& q : e.a) den = lcm(den, q.get_den());
        ZMat N(2 * g, 2 * g);
        for (long i = 0; i < 2 * g; ++i)
            for (long j = 0; j < 2 * g; ++j) {
                QQ v = e.at(i, j) * QQ(den);
                N.at(j, i) = v.get_num();  // rows of N = columns of e
            }
        fac.sublattice = saturate_rows(N);

        CMat T = tangent_of(P, P, e);
        CMat lat(2 * g, fac.sublattice.rows, prec);
        for (long i = 0; i < 2 * g; ++i)
            for (long j = 0; j < fac.sublattice.rows; ++j) {
                Real v(prec);
                mpfr_set_z(v.get(), fac.sublattice.at(j, i).get_mpz_t(), MPFR_RNDN);
                lat.at(i, j) = Cplx(std::move(v), Real(0L, prec));
            }
        fac.periods = T * P.omega * lat;

        // field of definition candidate from the tangent entries
        fac.field_known = true;
        std::vector<ZZ> best;
        for (long i = 0; i < g && fac.field_known; ++i)
            for (long j = 0; j < g; ++j) {
                auto cand = algebraize(T.at(i, j), static_cast<int>(2 * g), ctx);
                if (!cand) {
                    fac.field_known = false;
                    break;
                }
                bool better = cand->min_poly.size() > best.size();
                if (!better && cand->min_poly.size() == best.size() && !best.empty()) {
                    for (size_t k = cand->min_poly.size(); k-- > 0;) {
                        int c = cmp(cand->min_poly[k], best[k]);
                        if (c != 0) { better = c < 0; break; }
                    }
                }
                if (better) best = cand->min_poly;
            }
        if (fac.field_known) fac.field_poly = std::move(best);
        out.push_back(std::move(fac));
    }
    return out;
}

namespace {

SymplecticMapSet enumerate_maps(const PeriodMatrix& P1, const PeriodMatrix& P2,
                                const PrecisionContext& ctx, long degree) {
    if (P1.genus != P2.genus)
        throw GenusMismatch("isomorphism search needs equal genus on both sides");
    long g = P1.genus;
    SymplecticMapSet out;
    HomBasis hom = homomorphisms(P1, P2, ctx);
    long d = hom.rank;
    if (d == 0) return out;

    ZMat E = std_symplectic_form(g);
    // Rosati trace form on the Hom lattice: q(R) = tr(E1^{-1} R^T E2 R), and
    // E^{-1} = -E.
    std::vector<ZMat> adj;
    for (const auto& h : hom.entries) adj.push_back(neg(E * h.R.transpose() * E));
    ZMat gram(d, d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            ZMat prod = adj[static_cast<size_t>(i)] * hom.entries[static_cast<size_t>(j)].R;
            ZZ t;
            for (long k = 0; k < 2 * g; ++k) t += prod.at(k, k);
            gram.at(i, j) = t;
        }

    ZMat target(2 * g, 2 * g);
    for (long i = 0; i < 2 * g; ++i)
        for (long j = 0; j < 2 * g; ++j) target.at(i, j) = degree * E.at(i, j);

    QQ bound(2 * degree * g);
    for (const auto& sv : fincke_pohst(gram, 2 * degree * g)) {
        if (sv.value != bound) continue;
        ZMat R(2 * g, 2 * g);
        for (long i = 0; i < d; ++i) {
            if (sv.v[static_cast<size_t>(i)] == 0) continue;
            for (long p = 0; p < 4 * g * g; ++p)
                R.a[static_cast<size_t>(p)] += sv.v[static_cast<size_t>(i)] * hom.entries[static_cast<size_t>(i)].R.a[static_cast<size_t>(p)];
        }
        if (!(R.transpose() * E * R == target)) continue;
        CMat T = tangent_of(P1, P2, QMat(R));
        Real res = hom_residual(P1, P2, R, T);
        out.maps.push_back({std::move(R), std::move(T), std::move(res)});
    }
    std::sort(out.maps.begin(), out.maps.end(), [](const HomEntry& a, const HomEntry& b) {
        for (size_t p = 0; p < a.R.a.size(); ++p) {
            int c = cmp(a.R.a[p], b.R.a[p]);
            if (c != 0) return c < 0;
        }
        return false;
    });
    return out;
}

}  // namespace

SymplecticMapSet symplectic_isomorphisms(const PeriodMatrix& P1, const PeriodMatrix& P2,
                                         const PrecisionContext& ctx) {
    return enumerate_maps(P1, P2, ctx, 1);
}

SymplecticMapSet fixed_degree_maps(const PeriodMatrix& P1, const PeriodMatrix& P2,
                                   long degree, const PrecisionContext& ctx) {
    if (degree < 1) throw InternalError("isogeny degree must be positive");
    return enumerate_maps(P1, P2, ctx, degree);
}

SymplecticMapSet automorphism_group(const PeriodMatrix& P, const PrecisionContext& ctx) {
    SymplecticMapSet s = symplectic_isomorphisms(P, P, ctx);
    long n = static_cast<long>(s.maps.size());
    long g = P.genus;
    if (n == 0) throw ClosureFailure("empty symplectic isomorphism set");

    auto key_of = [&](const ZMat& R) {
        std::vector<long> k(R.a.size());
        for (size_t p = 0; p < R.a.size(); ++p) {
            if (!R.a[p].fits_slong_p() || abs(R.a[p]) > ZZ(1) << 20)
                throw InternalError("automorphism entry unexpectedly large");
            k[p] = R.a[p].get_si();
        }
        return k;
    };
    std::map<std::vector<long>, long> index;
    for (long i = 0; i < n; ++i) index[key_of(s.maps[static_cast<size_t>(i)].R)] = i;

    std::vector<long> id_key(static_cast<size_t>(4 * g * g), 0), minus_key(id_key);
    for (long i = 0; i < 2 * g; ++i) {
        id_key[static_cast<size_t>(i * 2 * g + i)] = 1;
        minus_key[static_cast<size_t>(i * 2 * g + i)] = -1;
    }
    if (!index.count(id_key) || !index.count(minus_key))
        throw ClosureFailure("isomorphism set is missing the identity or its negative");

    // Cayley table, checking closure pair by pair.
    std::vector<long> table(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            ZMat prod = s.maps[static_cast<size_t>(i)].R * s.maps[static_cast<size_t>(j)].R;
            auto it = index.find(key_of(prod));
            if (it == index.end())
                throw ClosureFailure("isomorphism set is not closed under composition");
            table[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] = it->second;
        }

    ZMat E = std_symplectic_form(g);
    for (long i = 0; i < n; ++i) {
        ZMat inv = neg(E * s.maps[static_cast<size_t>(i)].R.transpose() * E);
        if (!index.count(key_of(inv)))
            throw ClosureFailure("isomorphism set is not closed under inverses");
    }

    long idid = index[id_key];
    std::map<long, long> hist;
    for (long i = 0; i < n; ++i) {
        long ord = 1, cur = i;
        while (cur != idid) {
            cur = table[static_cast<size_t>(cur) * static_cast<size_t>(n) + static_cast<size_t>(i)];
            ++ord;
            if (ord > 2 * n) throw ClosureFailure("element order exceeded the group size");
        }
        ++hist[ord];
    }
    for (const auto& kv : hist) s.order_histogram.push_back(kv);

    long center = 0;
    for (long i = 0; i < n; ++i) {
        bool central = true;
        for (long j = 0; j < n && central; ++j)
            central = table[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] ==
                      table[static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(i)];
        if (central) ++center;
    }
    s.center_size = center;
    s.group_order = n;
    s.quotient_order = n / 2;
    s.hurwitz_ok = g < 2 || s.quotient_order <= 84 * (g - 1);
    return s;
}

}  // namespace periodica
