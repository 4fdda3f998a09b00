#pragma once

#include <utility>
#include <vector>

#include "periodica/cplx.hpp"
#include "periodica/prec.hpp"
#include "periodica/zmat.hpp"

namespace periodica {

// Delaunay triangulation of distinct integer points: lexicographic scan
// followed by Lawson flips with exact incircle tests.  Triangles are ccw.
struct Triangle {
    int a, b, c;
};
std::vector<Triangle> delaunay(const std::vector<std::pair<ZZ, ZZ>>& pts);

// sign of the incircle predicate: > 0 when d lies strictly inside the
// circumcircle of ccw triangle (a, b, c).
int incircle_sign(const std::pair<ZZ, ZZ>& a, const std::pair<ZZ, ZZ>& b,
                  const std::pair<ZZ, ZZ>& c, const std::pair<ZZ, ZZ>& d);

struct ExactPoint {
    QQ x, y;
};

struct SkelEdge {
    int u, v;            // vertex ids, u < v
    int site_a, site_b;  // the Voronoi cells this edge separates
    double clearance;    // lower bound for the distance from the edge to any site
};

// Voronoi skeleton of the critical locus augmented with a surrounding
// hexagon.  Vertices are exact circumcenters; all coordinates are snapped to
// a dyadic grid so the graph does not depend on the working precision.
struct VoronoiSkeleton {
    std::vector<ExactPoint> sites;  // finite critical values first, then the hexagon
    int finite_sites = 0;

    std::vector<ExactPoint> vertices;  // lex sorted
    std::vector<double> clearance;     // distance from vertex to nearest site
    std::vector<std::vector<int>> adj;   // sorted neighbor ids
    std::vector<SkelEdge> edges;         // sorted by (u, v)
    std::vector<std::vector<int>> cell;  // per finite site, ccw vertex loop
    std::vector<int> inf_loop;           // ccw vertex loop enclosing every finite site

    int base_vertex = -1;
    std::vector<int> bfs_parent;  // -1 at the base vertex
    std::vector<int> bfs_depth;

    // Edge lookup; -1 when (u, v) is not an edge.
    int edge_index(int u, int v) const;

    // Vertex sequence base .. v along the bfs tree.
    std::vector<int> path_from_base(int v) const;

    // Closed walk base .. base circling finite site k once counterclockwise:
    // tree path to the cell, the ccw cell loop, and the path reversed.
    std::vector<int> loop_path(int k) const;

    // Same shape but around the infinity loop.
    std::vector<int> inf_loop_path() const;

    Cplx vertex_pos(int v, mpfr_prec_t prec) const;
};

// Number of fractional bits in the site grid.
inline constexpr int kSnapBits = 48;

VoronoiSkeleton build_skeleton(const std::vector<Cplx>& critical_points,
                               const PrecisionContext& ctx);

}  // namespace periodica
