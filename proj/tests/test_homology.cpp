#include <algorithm>
#include <deque>
#include <string>
#include <vector>

#include "doctest.h"
#include "periodica/continuation.hpp"
#include "periodica/curve.hpp"
#include "periodica/error.hpp"
#include "periodica/homology.hpp"
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

struct Rng {
    unsigned long long s = 0x6a09e667f3bcc909ull;
    unsigned long long next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    int below(int n) { return static_cast<int>(next() % static_cast<unsigned long long>(n)); }
};

ZMat zmat(long r, long c, std::vector<long> v) {
    ZMat m(r, c);
    for (long i = 0; i < r * c; ++i) m.a[i] = v[i];
    return m;
}

// random closed walk from v back to v: a stroll plus the breadth-first return
Walk random_cycle_at(const LiftedGraph& G, Rng& rng, int v) {
    Walk w{v};
    int cur = v;
    int steps = 4 + rng.below(12);
    for (int i = 0; i < steps; ++i) {
        const auto& a = G.adj[cur];
        cur = a[rng.below(static_cast<int>(a.size()))].first;
        w.push_back(cur);
    }
    if (cur != v) {
        std::vector<int> parent(G.size(), -2);
        std::deque<int> q{cur};
        parent[cur] = -1;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            if (u == v) break;
            for (const auto& nb : G.adj[u])
                if (parent[nb.first] == -2) {
                    parent[nb.first] = u;
                    q.push_back(nb.first);
                }
        }
        std::vector<int> back;
        for (int u = v; u != cur; u = parent[u]) back.push_back(u);
        for (auto it = back.rbegin(); it != back.rend(); ++it) w.push_back(*it);
    }
    return w;
}

Walk random_cycle(const LiftedGraph& G, Rng& rng) {
    for (int tries = 0; tries < 50; ++tries) {
        Walk w = normalize_walk(random_cycle_at(G, rng, rng.below(G.size())));
        if (w.size() > 3) return w;
    }
    return {G.root()};
}

// lift a closed base walk starting on the given sheet, repeated `reps` times
Walk lift_loop(EdgeLifter& lift, const LiftedGraph& G, const std::vector<int>& base_walk,
               int sheet, int reps) {
    Walk w{G.lifted(base_walk[0], sheet)};
    int s = sheet;
    for (int rep = 0; rep < reps; ++rep)
        for (size_t i = 0; i + 1 < base_walk.size(); ++i) {
            s = lift.edge_perm(base_walk[i], base_walk[i + 1])[s];
            w.push_back(G.lifted(base_walk[i + 1], s));
        }
    return w;
}

void check_symplectic(const SymplecticBasis& sb) {
    const long r = sb.gram.rows;
    const long g = sb.genus;
    ZZ det = det_z(sb.change_of_basis);
    CHECK((det == 1 || det == -1));
    ZMat J = sb.change_of_basis * sb.gram * sb.change_of_basis.transpose();
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j) {
            ZZ want = 0;
            if (i < g && j == g + i) want = 1;
            if (j < g && i == g + j) want = -1;
            CHECK(J.at(i, j) == want);
        }
    REQUIRE(static_cast<long>(sb.alpha.size()) == g);
    REQUIRE(static_cast<long>(sb.beta.size()) == g);
    for (const Chain& c : sb.alpha) {
        CHECK(!c.empty());
        CHECK(has_zero_boundary(c));
    }
    for (const Chain& c : sb.beta) {
        CHECK(!c.empty());
        CHECK(has_zero_boundary(c));
    }
}

}  // namespace

TEST_CASE("local pairing rule on the reference configurations") {
    // first configuration: b enters along a's exit edge
    {
        Dir d1{QQ(-3, 5), QQ(-1)}, d2{QQ(-3, 10), QQ(7, 5)}, d4{QQ(1), QQ(-1, 2)};
        auto [in2, out2] = local_intersection2(1, 2, 2, 4, d1, d2, d2, d4);
        CHECK(in2 == 0);
        CHECK(out2 == -1);
    }
    // second configuration: all four edges distinct
    {
        Dir d1{QQ(-3, 5), QQ(-1)}, d2{QQ(3, 10), QQ(7, 5)};
        Dir d3{QQ(-7, 10), QQ(1)}, d4{QQ(1), QQ(-1, 2)};
        auto [in2, out2] = local_intersection2(1, 2, 3, 4, d1, d2, d3, d4);
        CHECK(in2 == -1);
        CHECK(out2 == -1);
    }
    // b leaving along a's entry edge contributes nothing on the out side
    {
        Dir d1{QQ(1), QQ(0)}, d2{QQ(0), QQ(1)}, d3{QQ(-1), QQ(-1)};
        auto [in2, out2] = local_intersection2(1, 2, 3, 1, d1, d2, d3, d1);
        CHECK(out2 == 0);
        CHECK(in2 == -1);  // (d1, d3, d2) clockwise
    }
}

TEST_CASE("walk normalization removes spikes") {
    CHECK(normalize_walk({7}) == Walk{7});
    CHECK(normalize_walk({1, 2, 1}) == Walk{1});
    CHECK(normalize_walk({1, 2, 3, 2, 1}) == Walk{1});
    CHECK(normalize_walk({1, 2, 3, 1}) == Walk{1, 2, 3, 1});
    // spike across the closure point
    Walk w{2, 3, 4, 3, 2, 5, 6, 5, 2};
    CHECK(normalize_walk(w) == Walk{2});
    CHECK_THROWS_AS(normalize_walk({1, 2, 3}), InternalError);
}

TEST_CASE("chains cancel orientation") {
    Walk w{1, 2, 3, 1};
    Chain c = chain_of(w);
    CHECK(has_zero_boundary(c));
    CHECK(c.mult.size() == 3);
    Walk rev(w.rbegin(), w.rend());
    Chain sum = c;
    for (size_t i = 0; i + 1 < rev.size(); ++i) sum.add(rev[i], rev[i + 1], 1);
    CHECK(sum.empty());
    // open walk boundary is nonzero
    Chain open;
    open.add(1, 2, 1);
    CHECK_FALSE(has_zero_boundary(open));
}

TEST_CASE("frobenius reduction normal forms") {
    {
        auto [B, d] = frobenius_reduce(zmat(2, 2, {0, 1, -1, 0}));
        CHECK(B == ZMat::identity(2));
        REQUIRE(d.size() == 1);
        CHECK(d[0] == 1);
    }
    {
        auto [B, d] = frobenius_reduce(zmat(2, 2, {0, 2, -2, 0}));
        REQUIRE(d.size() == 1);
        CHECK(d[0] == 2);
    }
    {
        ZMat G = zmat(2, 2, {0, -3, 3, 0});
        auto [B, d] = frobenius_reduce(G);
        REQUIRE(d.size() == 1);
        CHECK(d[0] == 3);
        ZMat N = B * G * B.transpose();
        CHECK(N.at(0, 1) == 3);
        CHECK(N.at(1, 0) == -3);
    }
    {
        auto [B, d] = frobenius_reduce(ZMat(3, 3));
        CHECK(B == ZMat::identity(3));
        CHECK(d.empty());
    }
    {
        ZMat G = zmat(4, 4, {0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 2, 0, 0, -2, 0});
        auto [B, d] = frobenius_reduce(G);
        REQUIRE(d.size() == 2);
        CHECK(d[0] == 1);
        CHECK(d[1] == 2);
    }
    CHECK_THROWS_AS(frobenius_reduce(zmat(2, 2, {0, 1, 1, 0})), InternalError);
    CHECK_THROWS_AS(frobenius_reduce(ZMat(2, 3)), InternalError);
}

TEST_CASE("frobenius reduction against the smith form oracle") {
    Rng rng;
    for (int trial = 0; trial < 40; ++trial) {
        long n = 2 + rng.below(11);
        ZMat A(n, n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) A.at(i, j) = rng.below(19) - 9;
        ZMat G = A - A.transpose();
        auto [B, d] = frobenius_reduce(G);
        ZZ det = det_z(B);
        CHECK((det == 1 || det == -1));
        ZMat N = B * G * B.transpose();
        const long g = static_cast<long>(d.size());
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                ZZ want = 0;
                if (i < 2 * g && j == i + 1 && i % 2 == 0) want = d[i / 2];
                if (j < 2 * g && i == j + 1 && j % 2 == 0) want = -d[j / 2];
                CHECK(N.at(i, j) == want);
            }
        for (long i = 0; i + 1 < g; ++i) CHECK(d[i + 1] % d[i] == 0);
        std::vector<ZZ> smith = smith_divisors(G);
        REQUIRE(smith.size() == static_cast<size_t>(2 * g));
        for (long i = 0; i < g; ++i) {
            CHECK(smith[2 * i] == d[i]);
            CHECK(smith[2 * i + 1] == d[i]);
        }
    }
}

TEST_CASE("lifted graph structure and fundamental cycles") {
    Setup s("y^2 = x^3 - x - 1");
    LiftedGraph G = lifted_graph(s.lift);
    CHECK(G.size() == 2 * static_cast<int>(s.sk.vertices.size()));
    CHECK(G.edge_count() == 2 * static_cast<long>(s.sk.edges.size()));

    auto cycles = fundamental_cycles(G);
    CHECK(static_cast<long>(cycles.size()) == G.edge_count() - G.size() + 1);
    for (const Walk& w : cycles) {
        REQUIRE(w.size() >= 4);
        CHECK(w.front() == w.back());
        CHECK(normalize_walk(w) == w);  // LCA routing leaves nothing to cancel
        CHECK(has_zero_boundary(chain_of(w)));
        CHECK(intersection_number(w, w, G) == 0);
    }
}

TEST_CASE("reducible curve fails lifted graph connectivity") {
    Setup s("y^2 - x^2");
    CHECK_THROWS_AS(lifted_graph(s.lift), NotIrreducible);
}

TEST_CASE("pairing is antisymmetric and concatenation-additive") {
    Setup s("y^2 = x^3 - x - 1");
    LiftedGraph G = lifted_graph(s.lift);
    Rng rng;
    for (int trial = 0; trial < 120; ++trial) {
        Walk a = random_cycle(G, rng), b = random_cycle(G, rng);
        int ab = intersection_number(a, b, G);
        int ba = intersection_number(b, a, G);
        CHECK(ab == -ba);
        CHECK(intersection_number(a, a, G) == 0);
    }
    for (int trial = 0; trial < 60; ++trial) {
        int v = rng.below(G.size());
        Walk a = random_cycle_at(G, rng, v);
        Walk b = random_cycle_at(G, rng, v);
        Walk c = random_cycle(G, rng);
        Walk ab = a;
        ab.insert(ab.end(), b.begin() + 1, b.end());
        CHECK(intersection_number(ab, c, G) ==
              intersection_number(a, c, G) + intersection_number(b, c, G));
    }
}

TEST_CASE("cell loops to the power of their monodromy order are null-homotopic") {
    for (const char* text : {"y^2 = x^3 - x - 1", "x^3 + y^3 + 1"}) {
        Setup s(text);
        LiftedGraph G = lifted_graph(s.lift);
        auto cycles = fundamental_cycles(G);
        for (int k = 0; k < s.sk.finite_sites; ++k) {
            std::vector<int> base = s.sk.loop_path(k);
            Perm sigma = s.lift.walk_perm(base);
            for (int sheet = 0; sheet < s.lift.degree(); ++sheet) {
                int reps = 1;
                for (int t = sigma[sheet]; t != sheet; t = sigma[t]) ++reps;
                Walk w = lift_loop(s.lift, G, base, sheet, reps);
                REQUIRE(w.front() == w.back());
                for (const Walk& c : cycles) CHECK(intersection_number(w, c, G) == 0);
            }
        }
    }
}

TEST_CASE("symplectic basis on curves matches the monodromy genus") {
    struct Case {
        const char* text;
        int genus;
    };
    for (const Case& tc : {Case{"y^2 = x^3 - x - 1", 1}, Case{"x^3 + y^3 + 1", 1},
                           Case{"y^2 = x^6 - x^5 + 1", 2}, Case{"y^2 = x^5 - 1", 2}}) {
        Setup s(tc.text);
        SymplecticBasis sb = build_symplectic_basis(s.lift);
        CHECK(sb.genus == tc.genus);
        check_symplectic(sb);
        MonodromyRep rep = monodromy_rep(s.lift);
        CHECK(rep.genus == sb.genus);
    }
}

TEST_CASE("quartic symplectic genus agrees with branch data") {
    Setup s(
        "5x^4 + 28x^3y + 28x^3 + 47x^2y^2 + 76x^2y + 44x^2 + 34xy^3 + 82xy^2 + 66xy + 18x +"
        " 16y^4 + 34y^3 + 32y^2 + 18y + 1");
    SymplecticBasis sb = build_symplectic_basis(s.lift);
    CHECK(sb.genus == 3);
    check_symplectic(sb);
    CHECK(monodromy_rep(s.lift).genus == 3);
}

TEST_CASE("gram assembly is schedule independent") {
    Setup s("x^3 + y^3 + 1");
    LiftedGraph G = lifted_graph(s.lift);
    auto cycles = fundamental_cycles(G);
    CHECK(intersection_gram(cycles, G, 1) == intersection_gram(cycles, G, 4));
}
