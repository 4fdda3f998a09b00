#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "periodica/continuation.hpp"
#include "periodica/curve.hpp"
#include "periodica/differentials.hpp"
#include "periodica/error.hpp"
#include "periodica/homology.hpp"
#include "periodica/lattice.hpp"
#include "periodica/periods.hpp"
#include "periodica/skeleton.hpp"
#include "periodica/zmat.hpp"

using namespace periodica;

namespace {

struct Rng {
    unsigned long long s = 0x9e3779b97f4a7c15ull;
    unsigned long long next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    long uniform(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<unsigned long long>(hi - lo + 1)); }
};

IntegerLatticeBasis make_basis(const std::vector<std::vector<long>>& cols) {
    IntegerLatticeBasis b;
    b.dim = cols.empty() ? 0 : static_cast<long>(cols[0].size());
    for (const auto& c : cols) b.columns.emplace_back(c.begin(), c.end());
    return b;
}

// Row-lattice HNF of the columns, used as a lattice-equality oracle.
ZMat column_lattice_hnf(const IntegerLatticeBasis& b) { return hnf(b.as_matrix().transpose()); }

// Exact rational Gram-Schmidt over the columns.
struct QGso {
    std::vector<std::vector<QQ>> mu;
    std::vector<QQ> bstar2;
};

QGso exact_gso(const IntegerLatticeBasis& b) {
    const long n = b.count();
    QGso g;
    g.mu.assign(static_cast<size_t>(n), std::vector<QQ>(static_cast<size_t>(n)));
    g.bstar2.assign(static_cast<size_t>(n), QQ());
    std::vector<std::vector<QQ>> r(static_cast<size_t>(n), std::vector<QQ>(static_cast<size_t>(n)));
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j <= i; ++j) {
            QQ rij;
            for (long t = 0; t < b.dim; ++t)
                rij += QQ(b.columns[static_cast<size_t>(i)][static_cast<size_t>(t)]) *
                       QQ(b.columns[static_cast<size_t>(j)][static_cast<size_t>(t)]);
            for (long l = 0; l < j; ++l) rij -= g.mu[static_cast<size_t>(j)][static_cast<size_t>(l)] * r[static_cast<size_t>(i)][static_cast<size_t>(l)];
            r[static_cast<size_t>(i)][static_cast<size_t>(j)] = rij;
            if (j < i)
                g.mu[static_cast<size_t>(i)][static_cast<size_t>(j)] = rij / g.bstar2[static_cast<size_t>(j)];
            else
                g.bstar2[static_cast<size_t>(i)] = rij;
        }
    }
    return g;
}

void check_reduced(const IntegerLatticeBasis& b, double delta) {
    QGso g = exact_gso(b);
    const QQ half(1, 2);
    const QQ slack(1, 1 << 20);
    const QQ dq(static_cast<long>(delta * 100), 100);
    for (long i = 0; i < b.count(); ++i) {
        CHECK(g.bstar2[static_cast<size_t>(i)] > 0);
        for (long j = 0; j < i; ++j) {
            QQ m = g.mu[static_cast<size_t>(i)][static_cast<size_t>(j)];
            CHECK(abs(m) <= half + slack);
        }
        if (i > 0) {
            QQ m = g.mu[static_cast<size_t>(i)][static_cast<size_t>(i - 1)];
            QQ lhs = g.bstar2[static_cast<size_t>(i)] + slack * g.bstar2[static_cast<size_t>(i - 1)];
            CHECK(lhs >= (dq - m * m) * g.bstar2[static_cast<size_t>(i - 1)]);
        }
    }
}

void check_transform(const IntegerLatticeBasis& input, const LLLResult& r) {
    ZZ det = det_z(r.transform);
    CHECK((det == 1 || det == -1));
    CHECK(input.as_matrix() * r.transform == r.basis.as_matrix());
}

// Membership of v in the row lattice of an HNF matrix.
bool in_row_lattice(std::vector<ZZ> v, const ZMat& h) {
    for (long r = 0; r < h.rows; ++r) {
        long p = 0;
        while (p < h.cols && h.at(r, p) == 0) ++p;
        if (p == h.cols) continue;
        ZZ q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), v[static_cast<size_t>(p)].get_mpz_t(), h.at(r, p).get_mpz_t());
        if (rem != 0) return false;
        for (long c = p; c < h.cols; ++c) v[static_cast<size_t>(c)] -= q * h.at(r, c);
    }
    for (const ZZ& e : v)
        if (e != 0) return false;
    return true;
}

struct Setup {
    PlaneCurve curve;
    PrecisionContext ctx;
    CriticalLocus cl;
    VoronoiSkeleton sk;
    EdgeLifter lift;

    explicit Setup(const std::string& text, long bits = 100)
        : curve(parse_curve(text)),
          ctx(bits),
          cl(critical_locus(curve, ctx)),
          sk(build_skeleton(cl.points, ctx)),
          lift(curve, sk, ctx) {}
};

Cplx tau_of_curve(const std::string& text, long bits) {
    Setup s(text, bits);
    EmbeddedDifferentials eh(differential_basis(s.curve), s.ctx.prec());
    SymplecticBasis sym = build_symplectic_basis(s.lift);
    PeriodMatrix P = period_matrix(s.lift, eh, sym);
    RiemannMatrix rm = riemann_matrix(P);
    REQUIRE(rm.tau.rows == 1);
    return rm.tau.at(0, 0);
}

// Rows of the real linear system B + tau2*A = (D + tau2*C)*tau1 in the
// unknown blocks (D, B, C, A) of R, each block row-major.
std::vector<std::vector<Real>> hom_system(const CMat& tau1, const CMat& tau2, mpfr_prec_t prec) {
    const long g1 = tau1.rows, g2 = tau2.rows;
    const long n = 4 * g1 * g2;
    std::vector<std::vector<Real>> M;
    auto block = [&](int which, long r, long c) { return which * g1 * g2 + r * g1 + c; };
    for (long i = 0; i < g2; ++i)
        for (long j = 0; j < g1; ++j) {
            std::vector<Cplx> row(static_cast<size_t>(n), Cplx(prec));
            for (long k = 0; k < g1; ++k) row[static_cast<size_t>(block(0, i, k))] = -tau1.at(k, j);
            row[static_cast<size_t>(block(1, i, j))] = Cplx(1, prec);
            for (long k = 0; k < g2; ++k)
                for (long l = 0; l < g1; ++l) {
                    Cplx& e = row[static_cast<size_t>(block(2, k, l))];
                    e = e - tau2.at(i, k) * tau1.at(l, j);
                }
            for (long k = 0; k < g2; ++k) row[static_cast<size_t>(block(3, k, j))] = tau2.at(i, k);
            std::vector<Real> re, im;
            for (const Cplx& e : row) {
                re.push_back(e.re);
                im.push_back(e.im);
            }
            M.push_back(std::move(re));
            M.push_back(std::move(im));
        }
    return M;
}

}  // namespace

TEST_CASE("lll keeps an already reduced basis") {
    IntegerLatticeBasis id = make_basis({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    LLLResult r = lll_reduce(id);
    CHECK(r.basis.as_matrix() == ZMat::identity(3));
    CHECK(r.transform == ZMat::identity(3));
}

TEST_CASE("lll recovers the short second generator") {
    const long K = 1L << 40;
    IntegerLatticeBasis b = make_basis({{1, 0}, {K, 1}});
    LLLResult r = lll_reduce(b);
    check_transform(b, r);
    bool found = false;
    for (const auto& col : r.basis.columns) {
        if (col[0] == 0 && (col[1] == 1 || col[1] == -1)) found = true;
    }
    CHECK(found);
    check_reduced(r.basis, 0.99);
}

TEST_CASE("lll on scrambles of an orthogonal basis recovers the norm profile") {
    Rng rng;
    IntegerLatticeBasis base = make_basis({{1, 0, 0}, {0, 3, 0}, {0, 0, 10}});
    ZMat expect = column_lattice_hnf(base);
    for (int trial = 0; trial < 10; ++trial) {
        // random unimodular column operations
        IntegerLatticeBasis b = base;
        for (int op = 0; op < 24; ++op) {
            long i = rng.uniform(0, 2), j = rng.uniform(0, 2);
            switch (rng.uniform(0, 2)) {
                case 0:
                    if (i != j) {
                        ZZ c(rng.uniform(-3, 3));
                        for (size_t t = 0; t < 3; ++t)
                            b.columns[static_cast<size_t>(i)][t] += c * b.columns[static_cast<size_t>(j)][t];
                    }
                    break;
                case 1:
                    std::swap(b.columns[static_cast<size_t>(i)], b.columns[static_cast<size_t>(j)]);
                    break;
                default:
                    for (size_t t = 0; t < 3; ++t) b.columns[static_cast<size_t>(i)][t] = -b.columns[static_cast<size_t>(i)][t];
            }
        }
        LLLResult r = lll_reduce(b);
        check_transform(b, r);
        check_reduced(r.basis, 0.99);
        CHECK(column_lattice_hnf(r.basis) == expect);
        QGso g = exact_gso(r.basis);
        std::multiset<QQ> profile(g.bstar2.begin(), g.bstar2.end());
        CHECK(profile == std::multiset<QQ>({QQ(1), QQ(9), QQ(100)}));
    }
}

TEST_CASE("lll preserves the lattice on random bases") {
    Rng rng;
    rng.s = 0x2545f4914f6cdd1dull;
    for (int trial = 0; trial < 25; ++trial) {
        const long n = rng.uniform(2, 5);
        IntegerLatticeBasis b;
        b.dim = n;
        do {
            b.columns.assign(static_cast<size_t>(n), {});
            for (long j = 0; j < n; ++j) {
                std::vector<ZZ> col(static_cast<size_t>(n));
                for (long i = 0; i < n; ++i) col[static_cast<size_t>(i)] = rng.uniform(-9, 9);
                b.columns[static_cast<size_t>(j)] = col;
            }
        } while (det_z(b.as_matrix()) == 0);
        ZMat before = column_lattice_hnf(b);
        LLLResult r = lll_reduce(b);
        check_transform(b, r);
        check_reduced(r.basis, 0.99);
        CHECK(column_lattice_hnf(r.basis) == before);
    }
}

TEST_CASE("lll handles rectangular column sets") {
    IntegerLatticeBasis b = make_basis({{3, 1, 4, 1}, {5, 9, 2, 6}});
    LLLResult r = lll_reduce(b);
    check_transform(b, r);
    check_reduced(r.basis, 0.99);
    CHECK(column_lattice_hnf(r.basis) == column_lattice_hnf(b));
}

TEST_CASE("approximate kernel of a difference row") {
    PrecisionContext ctx(100);
    std::vector<std::vector<Real>> M{{Real(1, ctx.prec()), Real(-1, ctx.prec())}};
    IntegerLatticeBasis k = approximate_kernel(M, ctx);
    REQUIRE(k.count() == 1);
    CHECK(k.columns[0][0] == 1);
    CHECK(k.columns[0][1] == 1);
}

TEST_CASE("approximate kernel finds complex multiplication for the fermat cubic") {
    Cplx tau = tau_of_curve("x^3 + y^3 + 1", 100);
    PrecisionContext ctx(100);
    CMat t1(1, 1, ctx.prec());
    t1.at(0, 0) = tau;
    std::vector<std::vector<Real>> M = hom_system(t1, t1, ctx.prec());
    IntegerLatticeBasis k = approximate_kernel(M, ctx);
    CHECK(k.count() == 2);

    // every kernel vector satisfies B + tau*A = (D + tau*C)*tau numerically
    for (const auto& c : k.columns) {
        Cplx d(c[0].get_si(), ctx.prec()), b(c[1].get_si(), ctx.prec());
        Cplx cc(c[2].get_si(), ctx.prec()), a(c[3].get_si(), ctx.prec());
        Cplx lhs = b + tau * a;
        Cplx rhs = (d + tau * cc) * tau;
        CHECK(abs(lhs - rhs) < Real::pow2(-50, ctx.prec()));
    }

    // the identity endomorphism lies in the recovered lattice
    ZMat rows = k.as_matrix().transpose();
    ZMat h = hnf(rows);
    std::vector<ZZ> ident{ZZ(1), ZZ(0), ZZ(0), ZZ(1)};
    CHECK(in_row_lattice(ident, h));
}

TEST_CASE("approximate kernel of an unrelated pair is empty") {
    PrecisionContext ctx(100);
    const mpfr_prec_t p = ctx.prec();
    auto mk = [&](double a) { return Real(a, p); };
    Real r2 = sqrt(Real(2, p)), r3 = sqrt(Real(3, p)), r5 = sqrt(Real(5, p));
    Real pi = Real::pi(p), e1 = exp(Real(1, p)), l2 = log(Real(2, p));

    CMat t1(2, 2, p), t2(2, 2, p);
    t1.at(0, 0) = Cplx(r2 - 1, r3 - mk(0.5));
    t1.at(0, 1) = Cplx(1 / pi, e1 / 10);
    t1.at(1, 0) = t1.at(0, 1);
    t1.at(1, 1) = Cplx(r5 - 2, pi - mk(2.9));
    t2.at(0, 0) = Cplx(r3 - 1, l2 + mk(0.4));
    t2.at(0, 1) = Cplx(e1 - mk(2.7), r2 / 3);
    t2.at(1, 0) = t2.at(0, 1);
    t2.at(1, 1) = Cplx(l2 - mk(0.2), r5 - mk(1.9));

    std::vector<std::vector<Real>> M = hom_system(t1, t2, p);
    IntegerLatticeBasis k = approximate_kernel(M, ctx);
    CHECK(k.count() == 0);
}

TEST_CASE("approximate kernel grows monotonically with precision") {
    Cplx tau100 = tau_of_curve("x^3 + y^3 + 1", 100);
    Cplx tau200 = tau_of_curve("x^3 + y^3 + 1", 200);
    PrecisionContext c100(100), c200(200);
    CMat a(1, 1, c100.prec()), b(1, 1, c200.prec());
    a.at(0, 0) = tau100;
    b.at(0, 0) = tau200;
    IntegerLatticeBasis k100 = approximate_kernel(hom_system(a, a, c100.prec()), c100);
    IntegerLatticeBasis k200 = approximate_kernel(hom_system(b, b, c200.prec()), c200);
    CHECK(k100.count() == 2);
    CHECK(k200.count() == 2);
    ZMat h = hnf(k200.as_matrix().transpose());
    for (const auto& col : k100.columns) CHECK(in_row_lattice(col, h));
}

TEST_CASE("fincke pohst on the standard and stretched grams") {
    ZMat g2 = ZMat::identity(2);
    auto r = fincke_pohst(g2, 1);
    REQUIRE(r.size() == 5);
    for (const auto& s : r) CHECK(s.value <= 1);

    ZMat gd(2, 2);
    gd.at(0, 0) = 1;
    gd.at(1, 1) = 3;
    auto rd = fincke_pohst(gd, 2);
    REQUIRE(rd.size() == 3);
    std::set<std::pair<long, long>> got;
    for (const auto& s : rd) got.insert({s.v[0].get_si(), s.v[1].get_si()});
    CHECK(got == std::set<std::pair<long, long>>({{-1, 0}, {0, 0}, {1, 0}}));
}

TEST_CASE("fincke pohst counts hexagonal minimal vectors") {
    ZMat g(2, 2);
    g.at(0, 0) = 2;
    g.at(0, 1) = 1;
    g.at(1, 0) = 1;
    g.at(1, 1) = 2;
    auto r = fincke_pohst(g, 2);
    long minimal = 0;
    for (const auto& s : r)
        if (s.value == 2) ++minimal;
    CHECK(minimal == 6);
    CHECK(r.size() == 7);
}

TEST_CASE("fincke pohst rejects indefinite grams") {
    ZMat g(2, 2);
    g.at(0, 0) = 1;
    g.at(0, 1) = 2;
    g.at(1, 0) = 2;
    g.at(1, 1) = 1;
    CHECK_THROWS_AS(fincke_pohst(g, 4), NotPositiveDefinite);
}

TEST_CASE("fincke pohst matches brute force box search") {
    Rng rng;
    rng.s = 0x853c49e6748fea9bull;
    for (int trial = 0; trial < 40; ++trial) {
        const long n = rng.uniform(2, 3);
        ZMat A(n, n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) A.at(i, j) = rng.uniform(-3, 3);
        // A^T A + I is positive definite and >= identity, so |v|^2 <= bound
        ZMat G = A.transpose() * A + ZMat::identity(n);
        const long bound = rng.uniform(1, 10);

        std::set<std::vector<long>> brute;
        const long R = 3;  // bound <= 10 < 16 = (R+1)^2, box is exhaustive
        std::vector<long> v(static_cast<size_t>(n), -R);
        while (true) {
            ZZ q = 0;
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j) q += G.at(i, j) * v[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
            if (q <= bound) brute.insert(v);
            long k = 0;
            while (k < n && v[static_cast<size_t>(k)] == R) v[static_cast<size_t>(k++)] = -R;
            if (k == n) break;
            ++v[static_cast<size_t>(k)];
        }

        std::set<std::vector<long>> got;
        for (const auto& s : fincke_pohst(G, bound)) {
            std::vector<long> w;
            for (const ZZ& e : s.v) w.push_back(e.get_si());
            got.insert(w);
            // reported value agrees with direct evaluation
            ZZ q = 0;
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j) q += G.at(i, j) * s.v[static_cast<size_t>(i)] * s.v[static_cast<size_t>(j)];
            CHECK(QQ(q) == s.value);
        }
        CHECK(got == brute);
    }
}

TEST_CASE("algebraize recognizes rationals and quadratic irrationals") {
    PrecisionContext ctx(100);
    const mpfr_prec_t p = ctx.prec();

    auto half = algebraize(Cplx(Real(1, p) / 2, Real(0, p)), 4, ctx);
    REQUIRE(half.has_value());
    CHECK(half->min_poly == std::vector<ZZ>({ZZ(-1), ZZ(2)}));

    auto imag = algebraize(Cplx(Real(0, p), Real(1, p)), 4, ctx);
    REQUIRE(imag.has_value());
    CHECK(imag->min_poly == std::vector<ZZ>({ZZ(1), ZZ(0), ZZ(1)}));
    CHECK(imag->root_index == 1);  // roots sort as -i, +i

    auto golden = algebraize(Cplx((1 + sqrt(Real(5, p))) / 2, Real(0, p)), 4, ctx);
    REQUIRE(golden.has_value());
    CHECK(golden->min_poly == std::vector<ZZ>({ZZ(-1), ZZ(-1), ZZ(1)}));
}

TEST_CASE("algebraize finds the seventh cyclotomic polynomial") {
    PrecisionContext ctx(100);
    const mpfr_prec_t p = ctx.prec();
    Real theta = 2 * Real::pi(p) / 7;
    Cplx z = unit_circle(theta);
    auto cand = algebraize(z, 8, ctx);
    REQUIRE(cand.has_value());
    CHECK(cand->min_poly == std::vector<ZZ>(7, ZZ(1)));
    CHECK(cand->residual < Real::pow2(-60, p));

    // independent check: the cyclotomic value at z is tiny
    Cplx acc(p);
    for (int k = 0; k < 7; ++k) acc = acc * z + Cplx(1, p);
    CHECK(abs(acc) < Real::pow2(-80, p));
}

TEST_CASE("algebraize declines transcendental input") {
    PrecisionContext ctx(100);
    const mpfr_prec_t p = ctx.prec();
    auto cand = algebraize(Cplx(Real::pi(p), Real(0, p)), 4, ctx);
    CHECK(!cand.has_value());
}
