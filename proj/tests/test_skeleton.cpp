#include <doctest.h>

#include <map>
#include <set>
#include <vector>

#include "periodica/curve.hpp"
#include "periodica/error.hpp"
#include "periodica/skeleton.hpp"

using namespace periodica;

namespace {

using Pt = std::pair<ZZ, ZZ>;

ZZ tri_cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
}

struct Rng {
    unsigned long long s = 0x9e3779b97f4a7c15ull;
    long next(long lo, long hi) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return lo + static_cast<long>(s % static_cast<unsigned long long>(hi - lo + 1));
    }
};

// Full Delaunay verification: ccw triangles, empty circumcircles, and the
// right combinatorics (every interior edge shared by two triangles and
// T = 2n - hull - 2).
void verify_delaunay(const std::vector<Pt>& pts, const std::vector<Triangle>& tris) {
    std::map<std::pair<int, int>, int> dir_edges;
    for (const Triangle& t : tris) {
        const Pt &a = pts[static_cast<size_t>(t.a)], &b = pts[static_cast<size_t>(t.b)],
                 &c = pts[static_cast<size_t>(t.c)];
        REQUIRE(tri_cross(a, b, c) > 0);
        for (size_t d = 0; d < pts.size(); ++d) {
            int di = static_cast<int>(d);
            if (di == t.a || di == t.b || di == t.c) continue;
            CHECK(incircle_sign(a, b, c, pts[d]) <= 0);
        }
        for (auto e : {std::pair<int, int>{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}) {
            CHECK(dir_edges.count(e) == 0);
            dir_edges[e] = 1;
        }
    }
    long boundary = 0;
    for (const auto& [e, cnt] : dir_edges) {
        (void)cnt;
        if (!dir_edges.count({e.second, e.first})) ++boundary;
    }
    CHECK(static_cast<long>(tris.size()) ==
          2 * static_cast<long>(pts.size()) - boundary - 2);
}

bool point_in_polygon(const ExactPoint& p, const std::vector<int>& loop,
                      const std::vector<ExactPoint>& vs) {
    // ray cast toward +x with exact arithmetic; p must not lie on the boundary
    bool inside = false;
    for (size_t i = 0; i < loop.size(); ++i) {
        const ExactPoint& a = vs[static_cast<size_t>(loop[i])];
        const ExactPoint& b = vs[static_cast<size_t>(loop[(i + 1) % loop.size()])];
        if ((a.y > p.y) == (b.y > p.y)) continue;
        // x coordinate of the crossing at height p.y
        QQ t = (p.y - a.y) / (b.y - a.y);
        QQ xc = a.x + t * (b.x - a.x);
        if (xc > p.x) inside = !inside;
    }
    return inside;
}

void verify_skeleton(const VoronoiSkeleton& sk) {
    REQUIRE(sk.finite_sites >= 1);
    REQUIRE(static_cast<int>(sk.sites.size()) == sk.finite_sites + 6);
    REQUIRE(static_cast<int>(sk.cell.size()) == sk.finite_sites);
    REQUIRE(sk.base_vertex >= 0);

    for (double c : sk.clearance) CHECK(c > 0.0);
    for (size_t v = 0; v < sk.vertices.size(); ++v)
        CHECK(sk.clearance[static_cast<size_t>(sk.base_vertex)] >= sk.clearance[v]);

    // cells: convex ccw loops whose edges exist and whose site is inside
    for (int s = 0; s < sk.finite_sites; ++s) {
        const auto& loop = sk.cell[static_cast<size_t>(s)];
        REQUIRE(loop.size() >= 3);
        for (size_t i = 0; i < loop.size(); ++i) {
            int u = loop[i], v = loop[(i + 1) % loop.size()];
            int e = sk.edge_index(u, v);
            REQUIRE(e >= 0);
            const SkelEdge& ed = sk.edges[static_cast<size_t>(e)];
            CHECK((ed.site_a == s || ed.site_b == s));
            CHECK(ed.clearance > 0.0);
            // the site lies strictly left of every ccw cell edge
            const ExactPoint& a = sk.vertices[static_cast<size_t>(u)];
            const ExactPoint& b = sk.vertices[static_cast<size_t>(v)];
            const ExactPoint& p = sk.sites[static_cast<size_t>(s)];
            QQ cr = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            CHECK(cr > 0);
        }
    }

    // infinity loop: closed, made of mixed edges, containing every finite site
    REQUIRE(sk.inf_loop.size() >= 3);
    for (size_t i = 0; i < sk.inf_loop.size(); ++i) {
        int u = sk.inf_loop[i], v = sk.inf_loop[(i + 1) % sk.inf_loop.size()];
        int e = sk.edge_index(u, v);
        REQUIRE(e >= 0);
        const SkelEdge& ed = sk.edges[static_cast<size_t>(e)];
        CHECK(((ed.site_a < sk.finite_sites) != (ed.site_b < sk.finite_sites)));
    }
    for (int s = 0; s < sk.finite_sites; ++s)
        CHECK(point_in_polygon(sk.sites[static_cast<size_t>(s)], sk.inf_loop, sk.vertices));
    // hexagon sites are outside
    for (size_t s = static_cast<size_t>(sk.finite_sites); s < sk.sites.size(); ++s)
        CHECK(!point_in_polygon(sk.sites[s], sk.inf_loop, sk.vertices));

    // bfs tree is rooted at base and uses graph edges
    CHECK(sk.bfs_parent[static_cast<size_t>(sk.base_vertex)] == -1);
    for (size_t v = 0; v < sk.vertices.size(); ++v) {
        CHECK(sk.bfs_depth[v] >= 0);
        if (static_cast<int>(v) != sk.base_vertex)
            CHECK(sk.edge_index(static_cast<int>(v), sk.bfs_parent[v]) >= 0);
    }

    // loop paths are closed base walks along edges
    for (int s = 0; s < sk.finite_sites; ++s) {
        auto walk = sk.loop_path(s);
        REQUIRE(walk.size() >= 2);
        CHECK(walk.front() == sk.base_vertex);
        CHECK(walk.back() == sk.base_vertex);
        for (size_t i = 0; i + 1 < walk.size(); ++i)
            CHECK(sk.edge_index(walk[i], walk[i + 1]) >= 0);
    }
    auto iwalk = sk.inf_loop_path();
    CHECK(iwalk.front() == sk.base_vertex);
    CHECK(iwalk.back() == sk.base_vertex);
    for (size_t i = 0; i + 1 < iwalk.size(); ++i)
        CHECK(sk.edge_index(iwalk[i], iwalk[i + 1]) >= 0);
}

VoronoiSkeleton skeleton_of(const std::string& curve, const PrecisionContext& ctx) {
    PlaneCurve c = parse_curve(curve);
    CriticalLocus cl = critical_locus(c, ctx);
    return build_skeleton(cl.points, ctx);
}

}  // namespace

TEST_CASE("delaunay of a square splits into two triangles") {
    std::vector<Pt> pts{{ZZ(0), ZZ(0)}, {ZZ(2), ZZ(0)}, {ZZ(0), ZZ(2)}, {ZZ(2), ZZ(2)}};
    auto tris = delaunay(pts);
    REQUIRE(tris.size() == 2);
    verify_delaunay(pts, tris);
}

TEST_CASE("delaunay rejects degenerate input") {
    CHECK_THROWS_AS(delaunay({{ZZ(0), ZZ(0)}, {ZZ(1), ZZ(1)}}), DegenerateDiagram);
    CHECK_THROWS_AS(delaunay({{ZZ(0), ZZ(0)}, {ZZ(1), ZZ(1)}, {ZZ(2), ZZ(2)}}),
                    DegenerateDiagram);
    CHECK_THROWS_AS(delaunay({{ZZ(0), ZZ(0)}, {ZZ(0), ZZ(0)}, {ZZ(2), ZZ(1)}}),
                    DegenerateDiagram);
}

TEST_CASE("delaunay empty circle property on random sets") {
    Rng rng;
    for (int trial = 0; trial < 12; ++trial) {
        std::set<Pt> uniq;
        long n = rng.next(4, 32);
        while (static_cast<long>(uniq.size()) < n)
            uniq.insert({ZZ(rng.next(-40, 40)), ZZ(rng.next(-40, 40))});
        std::vector<Pt> pts(uniq.begin(), uniq.end());
        auto tris = delaunay(pts);
        verify_delaunay(pts, tris);
    }
}

TEST_CASE("delaunay handles collinear runs and grids") {
    // 4x4 grid: many cocircular quadruples
    std::vector<Pt> grid;
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j) grid.push_back({ZZ(i), ZZ(j)});
    auto tris = delaunay(grid);
    verify_delaunay(grid, tris);

    // collinear prefix before the plane opens up
    std::vector<Pt> fan{{ZZ(0), ZZ(0)}, {ZZ(1), ZZ(0)}, {ZZ(2), ZZ(0)},
                        {ZZ(3), ZZ(0)}, {ZZ(1), ZZ(5)}};
    verify_delaunay(fan, delaunay(fan));

    // vertical collinear prefix, point to the right
    std::vector<Pt> vert{{ZZ(0), ZZ(0)}, {ZZ(0), ZZ(1)}, {ZZ(0), ZZ(2)}, {ZZ(1), ZZ(1)}};
    verify_delaunay(vert, delaunay(vert));
}

TEST_CASE("skeleton of a cubic branch locus") {
    PrecisionContext ctx;
    VoronoiSkeleton sk = skeleton_of("y^2 = x^3 - x - 1", ctx);
    CHECK(sk.finite_sites == 3);
    verify_skeleton(sk);
}

TEST_CASE("skeleton with collinear real branch points") {
    PrecisionContext ctx;
    VoronoiSkeleton sk = skeleton_of("y^2 = x^3 - x", ctx);
    CHECK(sk.finite_sites == 3);
    verify_skeleton(sk);
}

TEST_CASE("skeleton with a single finite site") {
    PrecisionContext ctx;
    VoronoiSkeleton sk = skeleton_of("y^2 = x^3", ctx);
    CHECK(sk.finite_sites == 1);
    REQUIRE(sk.cell.size() == 1);
    verify_skeleton(sk);
}

TEST_CASE("skeleton of the degree six curve") {
    PrecisionContext ctx;
    VoronoiSkeleton sk =
        skeleton_of("4x^6-54x^5y-729x^4+108x^3y^3+39366x^2-54xy^5-531441", ctx);
    CHECK(sk.finite_sites >= 10);
    verify_skeleton(sk);
}

TEST_CASE("skeleton does not depend on the working precision") {
    VoronoiSkeleton a = skeleton_of("y^2 = x^6 - x^5 + 1", PrecisionContext(100));
    VoronoiSkeleton b = skeleton_of("y^2 = x^6 - x^5 + 1", PrecisionContext(200));
    REQUIRE(a.vertices.size() == b.vertices.size());
    for (size_t v = 0; v < a.vertices.size(); ++v) {
        CHECK(a.vertices[v].x == b.vertices[v].x);
        CHECK(a.vertices[v].y == b.vertices[v].y);
    }
    REQUIRE(a.edges.size() == b.edges.size());
    for (size_t e = 0; e < a.edges.size(); ++e) {
        CHECK(a.edges[e].u == b.edges[e].u);
        CHECK(a.edges[e].v == b.edges[e].v);
        CHECK(a.edges[e].clearance == b.edges[e].clearance);
    }
    CHECK(a.base_vertex == b.base_vertex);
    CHECK(a.inf_loop == b.inf_loop);
    REQUIRE(a.cell.size() == b.cell.size());
    for (size_t s = 0; s < a.cell.size(); ++s) CHECK(a.cell[s] == b.cell[s]);
    for (int s = 0; s < a.finite_sites; ++s) CHECK(a.loop_path(s) == b.loop_path(s));
    CHECK(a.inf_loop_path() == b.inf_loop_path());
}
