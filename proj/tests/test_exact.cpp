#include <doctest.h>

#include <vector>

#include "periodica/intfactor.hpp"
#include "periodica/numberfield.hpp"
#include "periodica/qpoly.hpp"
#include "periodica/zmat.hpp"

using namespace periodica;

namespace {

ZMat zmat(int r, int c, std::vector<long> v) {
    ZMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = v[static_cast<size_t>(i * c + j)];
    return m;
}

QPoly qpoly(std::vector<long> coeffs) {
    std::vector<mpq_class> c;
    for (long x : coeffs) c.emplace_back(x);
    return QPoly(c);
}

// Deterministic small-value generator for property checks.
struct Rng {
    unsigned long long s = 0x243f6a8885a308d3ull;
    long next(long lo, long hi) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return lo + static_cast<long>(s % static_cast<unsigned long long>(hi - lo + 1));
    }
};

}  // namespace

TEST_CASE("hnf matches hand-computed forms") {
    ZMat h1 = hnf(zmat(2, 2, {1, 2, 3, 4}));
    CHECK(h1 == zmat(2, 2, {1, 0, 0, 2}));

    ZMat h2 = hnf(zmat(2, 2, {4, 6, 2, 2}));
    CHECK(h2 == zmat(2, 2, {2, 0, 0, 2}));

    // Zero rows are dropped.
    ZMat h3 = hnf(zmat(3, 2, {1, 2, 2, 4, 3, 6}));
    CHECK(h3.rows == 1);
    CHECK(h3 == zmat(1, 2, {1, 2}));

    // Identity is a fixed point.
    CHECK(hnf(ZMat::identity(4)) == ZMat::identity(4));
}

TEST_CASE("hnf transform is unimodular and reproduces the form") {
    Rng rng;
    for (int trial = 0; trial < 50; ++trial) {
        int r = static_cast<int>(rng.next(1, 4));
        int c = static_cast<int>(rng.next(1, 4));
        ZMat a(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) a.at(i, j) = rng.next(-9, 9);
        ZMat u;
        ZMat h = hnf(a, &u);
        REQUIRE(u.rows == r);
        REQUIRE(u.cols == r);
        mpz_class du = det_z(u);
        CHECK((du == 1 || du == -1));
        // u * a equals h padded with the dropped zero rows.
        ZMat ua = u * a;
        for (int i = 0; i < h.rows; ++i)
            for (int j = 0; j < c; ++j) CHECK(ua.at(i, j) == h.at(i, j));
        for (int i = h.rows; i < r; ++i)
            for (int j = 0; j < c; ++j) CHECK(ua.at(i, j) == 0);
    }
}

TEST_CASE("integer kernel is saturated and annihilates") {
    ZMat k1 = kernel_z(zmat(1, 2, {2, 4}));
    REQUIRE(k1.rows == 1);
    CHECK(k1 == zmat(1, 2, {2, -1}));

    ZMat a = zmat(2, 4, {1, 2, 3, 4, 0, 1, 1, 1});
    ZMat k = kernel_z(a);
    REQUIRE(k.rows == 2);
    for (int i = 0; i < k.rows; ++i)
        for (int r = 0; r < a.rows; ++r) {
            mpz_class dot = 0;
            for (int j = 0; j < 4; ++j) dot += a.at(r, j) * k.at(i, j);
            CHECK(dot == 0);
        }
    // Saturation: elementary divisors of the kernel basis are all 1.
    for (const mpz_class& d : smith_divisors(k)) CHECK(d == 1);

    // Full-rank matrix has trivial kernel.
    CHECK(kernel_z(zmat(2, 2, {1, 2, 3, 4})).rows == 0);
}

TEST_CASE("smith divisors match known normal forms") {
    auto d1 = smith_divisors(zmat(2, 2, {2, 0, 0, 3}));
    REQUIRE(d1.size() == 2);
    CHECK(d1[0] == 1);
    CHECK(d1[1] == 6);

    auto d2 = smith_divisors(zmat(2, 2, {4, 6, 2, 2}));
    REQUIRE(d2.size() == 2);
    CHECK(d2[0] == 2);
    CHECK(d2[1] == 2);

    auto d3 = smith_divisors(zmat(2, 2, {1, 2, 3, 4}));
    REQUIRE(d3.size() == 2);
    CHECK(d3[0] == 1);
    CHECK(d3[1] == 2);

    auto d4 = smith_divisors(zmat(1, 3, {2, 4, 4}));
    REQUIRE(d4.size() == 1);
    CHECK(d4[0] == 2);

    CHECK(smith_divisors(zmat(2, 2, {0, 0, 0, 0})).empty());

    // Divisibility chain holds on random matrices and the product of the
    // divisors of a square nonsingular matrix equals |det|.
    Rng rng;
    for (int trial = 0; trial < 30; ++trial) {
        int n = static_cast<int>(rng.next(2, 4));
        ZMat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a.at(i, j) = rng.next(-6, 6);
        mpz_class det = det_z(a);
        auto ds = smith_divisors(a);
        for (size_t i = 1; i < ds.size(); ++i) CHECK(ds[i] % ds[i - 1] == 0);
        if (det != 0) {
            REQUIRE(static_cast<int>(ds.size()) == n);
            mpz_class prod = 1;
            for (const auto& d : ds) prod *= d;
            CHECK(prod == abs(det));
        }
    }
}

TEST_CASE("bareiss determinant") {
    CHECK(det_z(zmat(2, 2, {1, 2, 3, 4})) == -2);
    CHECK(det_z(zmat(3, 3, {2, 0, 1, 1, 1, 0, 0, 3, 1})) == 5);
    CHECK(det_z(ZMat::identity(5)) == 1);
    CHECK(det_z(zmat(2, 2, {2, 4, 1, 2})) == 0);
}

TEST_CASE("rational solve and inverse") {
    QMat a(2, 2);
    a.at(0, 0) = 1;
    a.at(0, 1) = 2;
    a.at(1, 0) = 3;
    a.at(1, 1) = 4;
    QMat inv = inverse_q(a);
    QMat prod = a * inv;
    CHECK(prod == QMat::identity(2));
    CHECK(det_q(a) == -2);

    // x * a = b with known x = (1, 1)
    std::vector<QQ> b{4, 6};
    std::vector<QQ> x;
    REQUIRE(solve_left_q(a, b, x));
    REQUIRE(x.size() == 2);
    for (long j = 0; j < 2; ++j) {
        QQ acc = 0;
        for (long i = 0; i < 2; ++i) acc += x[static_cast<size_t>(i)] * a.at(i, j);
        CHECK(acc == b[static_cast<size_t>(j)]);
    }

    // Inconsistent system is reported.
    QMat sing(2, 2);
    sing.at(0, 0) = 1;
    sing.at(0, 1) = 2;
    sing.at(1, 0) = 2;
    sing.at(1, 1) = 4;
    std::vector<QQ> bad{1, 0};
    std::vector<QQ> y;
    CHECK(!solve_left_q(sing, bad, y));

    CHECK(rank_q(sing) == 1);
}

TEST_CASE("qpoly division gcd and squarefree part") {
    QPoly a = qpoly({1, 2, 0, 1});  // x^3 + 2x + 1
    QPoly b = qpoly({1, 0, 1});     // x^2 + 1
    QPoly q, r;
    divmod(a, b, q, r);
    CHECK(q == qpoly({0, 1}));
    CHECK(r == qpoly({1, 1}));
    CHECK(b * q + r == a);

    // gcd(x^2-1, x^3-1) = x-1, monic.
    CHECK(gcd(qpoly({-1, 0, 1}), qpoly({-1, 0, 0, 1})) == qpoly({-1, 1}));
    // Coprime pair.
    CHECK(gcd(qpoly({1, 0, 1}), qpoly({-2, 0, 1})) == qpoly({1}));

    // (x-1)^2 (x+2) -> (x-1)(x+2)
    QPoly p = qpoly({-1, 1}) * qpoly({-1, 1}) * qpoly({2, 1});
    CHECK(squarefree_part(p) == qpoly({-1, 1}) * qpoly({2, 1}));
    // Squarefree input is returned monic.
    CHECK(squarefree_part(qpoly({-2, 0, 2})) == qpoly({-1, 0, 1}));

    // Primitive integer scaling: 3/2 x^2 + 9/4 -> (6x^2 + 9)/content -> 2x^2 + 3.
    std::vector<mpq_class> cs{mpq_class(9, 4), 0, mpq_class(3, 2)};
    auto prim = primitive_z(QPoly(cs));
    REQUIRE(prim.size() == 3);
    CHECK(prim[0] == 3);
    CHECK(prim[1] == 0);
    CHECK(prim[2] == 2);
}

TEST_CASE("rational factorization") {
    // x^2 - 1
    auto f1 = factor_q(qpoly({-1, 0, 1}));
    REQUIRE(f1.size() == 2);
    CHECK(f1[0].multiplicity == 1);
    CHECK(f1[1].multiplicity == 1);
    CHECK(((f1[0].poly == qpoly({-1, 1}) && f1[1].poly == qpoly({1, 1})) ||
           (f1[0].poly == qpoly({1, 1}) && f1[1].poly == qpoly({-1, 1}))));

    // x^2 + 1 irreducible over Q.
    auto f2 = factor_q(qpoly({1, 0, 1}));
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].poly == qpoly({1, 0, 1}));
    CHECK(f2[0].multiplicity == 1);

    // (x^2+1)^2 (x-3)
    QPoly p3 = qpoly({1, 0, 1}) * qpoly({1, 0, 1}) * qpoly({-3, 1});
    auto f3 = factor_q(p3);
    REQUIRE(f3.size() == 2);
    int seen = 0;
    for (const auto& f : f3) {
        if (f.poly == qpoly({1, 0, 1})) {
            CHECK(f.multiplicity == 2);
            ++seen;
        }
        if (f.poly == qpoly({-3, 1})) {
            CHECK(f.multiplicity == 1);
            ++seen;
        }
    }
    CHECK(seen == 2);

    // x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
    auto f4 = factor_q(qpoly({-1, 0, 0, 0, 0, 0, 1}));
    CHECK(f4.size() == 4);
    QPoly prod = qpoly({1});
    for (const auto& f : f4) {
        CHECK(f.multiplicity == 1);
        prod = prod * f.poly;
    }
    CHECK(prod == qpoly({-1, 0, 0, 0, 0, 0, 1}));

    // Cyclotomic polynomial for 7 stays irreducible.
    auto f5 = factor_q(qpoly({1, 1, 1, 1, 1, 1, 1}));
    REQUIRE(f5.size() == 1);
    CHECK(f5[0].poly.degree() == 6);

    // Non-monic input: factors are monic, product recovers p up to lead.
    auto f6 = factor_q(qpoly({-2, 0, 2}));
    CHECK(f6.size() == 2);
    QPoly prod6 = qpoly({1});
    for (const auto& f : f6) prod6 = prod6 * f.poly;
    CHECK(prod6 * mpq_class(2) == qpoly({-2, 0, 2}));
}

TEST_CASE("number field arithmetic in Q(i)") {
    auto K = NumberField::make(qpoly({1, 0, 1}), "t", 0.0, 1.0);
    KElem i = K->gen();
    KElem one = K->one();

    // i^2 = -1
    CHECK(K->mul(i, i) == K->from_q(-1));
    // (1+i)(1-i) = 2
    KElem a = K->add(one, i);
    KElem b = K->sub(one, i);
    CHECK(K->mul(a, b) == K->from_q(2));
    // inverse round trip
    CHECK(K->mul(a, K->inv(a)) == one);

    // Embedding picks the root near the hint.
    PrecisionContext ctx;
    Cplx e = K->embed(a, ctx.prec());
    CHECK(abs(e - Cplx(Real(1.0, ctx.prec()), Real(1.0, ctx.prec()))).exp2() < -90);

    // Conjugate hint picks the other root.
    auto Kbar = NumberField::make(qpoly({1, 0, 1}), "t", 0.0, -1.0);
    Cplx ebar = Kbar->embed(Kbar->gen(), ctx.prec());
    CHECK(abs(ebar + Cplx(Real(0.0, ctx.prec()), Real(1.0, ctx.prec()))).exp2() < -90);
}

TEST_CASE("number field inverse round trip in a degree six field") {
    // Cyclotomic field of order 7.
    auto K = NumberField::make(qpoly({1, 1, 1, 1, 1, 1, 1}), "t", 0.6234898, 0.7818315);
    Rng rng;
    for (int trial = 0; trial < 20; ++trial) {
        KElem a = K->zero();
        bool nz = false;
        for (auto& c : a) {
            c = rng.next(-5, 5);
            if (c != 0) nz = true;
        }
        if (!nz) continue;
        CHECK(K->mul(a, K->inv(a)) == K->one());
    }
    // Generator satisfies its minimal polynomial: 1 + t + ... + t^6 = 0.
    KElem s = K->zero();
    KElem p = K->one();
    for (int k = 0; k <= 6; ++k) {
        s = K->add(s, p);
        p = K->mul(p, K->gen());
    }
    CHECK(K->is_zero(s));
}

TEST_CASE("rationals field is degree one") {
    auto Q = NumberField::rationals();
    CHECK(Q->is_rational());
    CHECK(Q->degree() == 1);
    KElem h = Q->from_q(mpq_class(1, 2));
    CHECK(Q->mul(h, Q->from_q(2)) == Q->one());
    PrecisionContext ctx;
    Cplx e = Q->embed(h, ctx.prec());
    CHECK(e.im.is_zero());
    CHECK(abs(e.re - Real(0.5, ctx.prec())).exp2() < -90);
}
