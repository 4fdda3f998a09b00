#include <string>
#include <vector>

#include "doctest.h"
#include "j_oracle.hpp"
#include "periodica/continuation.hpp"
#include "periodica/curve.hpp"
#include "periodica/differentials.hpp"
#include "periodica/error.hpp"
#include "periodica/homology.hpp"
#include "periodica/linalg.hpp"
#include "periodica/periods.hpp"
#include "periodica/skeleton.hpp"

using namespace periodica;

namespace {

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

RiemannMatrix full_riemann(Setup& s, int threads = 1) {
    EmbeddedDifferentials eh(differential_basis(s.curve), s.ctx.prec());
    SymplecticBasis sym = build_symplectic_basis(s.lift);
    PeriodMatrix P = period_matrix(s.lift, eh, sym, threads);
    return riemann_matrix(P);
}

}  // namespace

TEST_CASE("complex linear algebra basics") {
    const mpfr_prec_t prec = 120;
    CMat a(2, 2, prec);
    a.at(0, 0) = Cplx(2, prec);
    a.at(0, 1) = Cplx(0, 1, prec);
    a.at(1, 0) = Cplx(0, -1, prec);
    a.at(1, 1) = Cplx(1, prec);
    CMat inv = inverse(a);
    CMat id = a * inv - CMat::identity(2, prec);
    CHECK(max_abs(id) < Real::pow2(-100, prec));

    CMat sing(2, 2, prec);
    sing.at(0, 0) = Cplx(1, prec);
    sing.at(0, 1) = Cplx(2, prec);
    sing.at(1, 0) = Cplx(2, prec);
    sing.at(1, 1) = Cplx(4, prec);
    CHECK_THROWS_AS(inverse(sing), InternalError);

    std::vector<std::vector<Real>> s{{Real(2, prec), Real(0, prec)},
                                     {Real(1, prec), Real(2, prec)}};
    auto ev = symmetric_eigenvalues(s, prec);
    REQUIRE(ev.size() == 2);
    CHECK(abs(ev[0] - Real(1, prec)) < Real::pow2(-100, prec));
    CHECK(abs(ev[1] - Real(3, prec)) < Real::pow2(-100, prec));

    // random-ish 5x5 inverse residual
    CMat r(5, 5, prec);
    for (long i = 0; i < 5; ++i)
        for (long j = 0; j < 5; ++j)
            r.at(i, j) = Cplx(((7 * i + 3 * j) % 11) - 5.0, ((i * j + 2) % 7) - 3.0, prec);
    CHECK(max_abs(r * inverse(r) - CMat::identity(5, prec)) < Real::pow2(-90, prec));
}

TEST_CASE("edge periods match the exact antiderivative on the square root curve") {
    // On y^2 = x the differential dx/(2y) integrates to y itself, so every
    // tracked edge integral must equal y(end) - y(start) exactly.
    Setup s("y^2 - x");
    EmbeddedDifferentials eh(differential_basis(s.curve, {"1"}), s.ctx.prec());
    const Real tol = Real::pow2(-72, s.ctx.prec());
    for (const SkelEdge& e : s.sk.edges) {
        CMat P = edge_periods(s.lift, eh, e.u, e.v);
        const Perm& p = s.lift.edge_perm(e.u, e.v);
        const auto& fu = s.lift.vertex_fiber(e.u);
        const auto& fv = s.lift.vertex_fiber(e.v);
        for (int sh = 0; sh < 2; ++sh) {
            Cplx want = fv[p[sh]] - fu[sh];
            CHECK(abs(P.at(0, sh) - want) < tol);
        }
        // sheet symmetry
        CHECK(abs(P.at(0, 0) + P.at(0, 1)) < tol);
    }
}

TEST_CASE("loop around the branch point closes only after two turns") {
    Setup s("y^2 - x");
    EmbeddedDifferentials eh(differential_basis(s.curve, {"1"}), s.ctx.prec());
    const Real tol = Real::pow2(-70, s.ctx.prec());
    std::vector<int> loop = s.sk.loop_path(0);
    REQUIRE(loop.front() == loop.back());

    auto travel = [&](int sheet, int turns) {
        Cplx total(s.ctx.prec());
        int cur = sheet;
        for (int rep = 0; rep < turns; ++rep)
            for (size_t i = 0; i + 1 < loop.size(); ++i) {
                CMat P = edge_periods(s.lift, eh, loop[i], loop[i + 1]);
                total += P.at(0, cur);
                cur = s.lift.edge_perm(loop[i], loop[i + 1])[cur];
            }
        return std::make_pair(total, cur);
    };

    const auto& base_fiber = s.lift.vertex_fiber(loop.front());
    auto [one_turn, sheet_after] = travel(0, 1);
    CHECK(sheet_after == 1);  // the loop swaps the two sheets
    CHECK(abs(one_turn - (base_fiber[1] - base_fiber[0])) < tol);
    auto [two_turns, sheet_back] = travel(0, 2);
    CHECK(sheet_back == 0);
    CHECK(abs(two_turns) < tol);
}

TEST_CASE("riemann matrix of a given period matrix") {
    const mpfr_prec_t prec = 120;
    PeriodMatrix P;
    P.genus = 1;
    P.precision_bits = 100;
    P.omega = CMat(1, 2, prec);
    P.omega.at(0, 0) = Cplx(1, prec);
    P.omega.at(0, 1) = Cplx(0, 1, prec);
    RiemannMatrix rm = riemann_matrix(P);
    CHECK(abs(rm.tau.at(0, 0) - Cplx(0, 1, prec)) < Real::pow2(-110, prec));
    CHECK(rm.symmetry_defect.is_zero());
    CHECK(abs(rm.min_imag_eigenvalue - Real(1, prec)) < Real::pow2(-110, prec));

    // swapped blocks: the defect is visible as a negative eigenvalue
    std::swap(P.omega.at(0, 0), P.omega.at(0, 1));
    CHECK(riemann_matrix(P).min_imag_eigenvalue < 0);

    P.omega.at(0, 1) = Cplx(prec);
    P.omega.at(0, 0) = Cplx(prec);
    CHECK_THROWS_AS(riemann_matrix(P), SingularAlphaBlock);
}

TEST_CASE("lemniscatic curve has j = 1728") {
    Setup s("y^2 = x^3 - x");
    RiemannMatrix rm = full_riemann(s);
    CHECK(rm.symmetry_defect < Real::pow2(-50, s.ctx.prec()));
    CHECK(rm.min_imag_eigenvalue > 0);
    Cplx j = j_from_tau(rm.tau.at(0, 0), s.ctx.prec());
    CHECK(abs(j - Cplx(1728, s.ctx.prec())) < Real::pow2(-40, s.ctx.prec()));
}

TEST_CASE("fermat cubic has j = 0") {
    Setup s("x^3 + y^3 + 1");
    RiemannMatrix rm = full_riemann(s);
    Cplx j = j_from_tau(rm.tau.at(0, 0), s.ctx.prec());
    CHECK(abs(j) < Real::pow2(-40, s.ctx.prec()));
}

TEST_CASE("genus two riemann matrix is valid and stable under precision doubling") {
    Setup lo("y^2 = x^6 - x^5 + 1", 100);
    Setup hi("y^2 = x^6 - x^5 + 1", 200);
    EmbeddedDifferentials eh_lo(differential_basis(lo.curve), lo.ctx.prec());
    EmbeddedDifferentials eh_hi(differential_basis(hi.curve), hi.ctx.prec());
    SymplecticBasis sym_lo = build_symplectic_basis(lo.lift);
    SymplecticBasis sym_hi = build_symplectic_basis(hi.lift);
    CHECK(sym_lo.change_of_basis == sym_hi.change_of_basis);  // exact layer agrees

    PeriodMatrix P_lo = period_matrix(lo.lift, eh_lo, sym_lo);
    PeriodMatrix P_hi = period_matrix(hi.lift, eh_hi, sym_hi);
    CHECK(P_lo.beta_negated == P_hi.beta_negated);
    Real diff(0.0, 256);
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 4; ++j)
            diff = max(diff, abs(P_lo.omega.at(i, j) - P_hi.omega.at(i, j)));
    CHECK(diff < Real::pow2(-84, 256));

    RiemannMatrix rm = riemann_matrix(P_lo);
    CHECK(rm.symmetry_defect < Real::pow2(-50, 256));
    CHECK(rm.min_imag_eigenvalue > 0);
}

TEST_CASE("period assembly is schedule independent") {
    Setup a("y^2 = x^3 - x - 1");
    Setup b("y^2 = x^3 - x - 1");
    EmbeddedDifferentials eh_a(differential_basis(a.curve), a.ctx.prec());
    EmbeddedDifferentials eh_b(differential_basis(b.curve), b.ctx.prec());
    SymplecticBasis sym_a = build_symplectic_basis(a.lift);
    SymplecticBasis sym_b = build_symplectic_basis(b.lift);
    PeriodMatrix P1 = period_matrix(a.lift, eh_a, sym_a, 1);
    PeriodMatrix P4 = period_matrix(b.lift, eh_b, sym_b, 4);
    REQUIRE(P1.omega.a.size() == P4.omega.a.size());
    for (size_t k = 0; k < P1.omega.a.size(); ++k) CHECK(P1.omega.a[k] == P4.omega.a[k]);
}
