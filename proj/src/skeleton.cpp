#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "periodica/error.hpp"
#include "periodica/skeleton.hpp"
#include "periodica/util.hpp"

namespace periodica {

namespace {

using Pt = std::pair<ZZ, ZZ>;

// All geometry is done on a dyadic grid; the construction below runs at a
// fixed precision so the skeleton is identical at every working precision.
constexpr mpfr_prec_t kGeomPrec = 160;

ZZ snap_scaled(const Real& x) {
    Real scaled = x * Real::pow2(kSnapBits, kGeomPrec);
    return to_mpz_nearest(scaled);
}

QQ unscale(const ZZ& v) {
    QQ q(v, ZZ(1) << kSnapBits);
    q.canonicalize();
    return q;
}

ZZ cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
}

// Circumcenter of a ccw integer triangle in true (unscaled) units.
ExactPoint circumcenter(const Pt& a, const Pt& b, const Pt& c) {
    ZZ d = 2 * cross(a, b, c);
    if (d == 0) throw InternalError("degenerate triangle in circumcenter");
    ZZ a2 = a.first * a.first + a.second * a.second;
    ZZ b2 = b.first * b.first + b.second * b.second;
    ZZ c2 = c.first * c.first + c.second * c.second;
    ZZ ux = a2 * (b.second - c.second) + b2 * (c.second - a.second) + c2 * (a.second - b.second);
    ZZ uy = a2 * (c.first - b.first) + b2 * (a.first - c.first) + c2 * (b.first - a.first);
    QQ x(ux, d * (ZZ(1) << kSnapBits));
    QQ y(uy, d * (ZZ(1) << kSnapBits));
    x.canonicalize();
    y.canonicalize();
    return {x, y};
}

double dist_d(const ExactPoint& p, const ExactPoint& q) {
    return std::hypot(p.x.get_d() - q.x.get_d(), p.y.get_d() - q.y.get_d());
}

bool pt_less(const ExactPoint& p, const ExactPoint& q) {
    int cx = cmp(p.x, q.x);
    if (cx != 0) return cx < 0;
    return cmp(p.y, q.y) < 0;
}

}  // namespace

int VoronoiSkeleton::edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair<int, int>{u, v},
                               [](const SkelEdge& e, const std::pair<int, int>& k) {
                                   if (e.u != k.first) return e.u < k.first;
                                   return e.v < k.second;
                               });
    if (it == edges.end() || it->u != u || it->v != v) return -1;
    return static_cast<int>(it - edges.begin());
}

std::vector<int> VoronoiSkeleton::path_from_base(int v) const {
    std::vector<int> path;
    for (int cur = v; cur != -1; cur = bfs_parent[static_cast<size_t>(cur)]) {
        path.push_back(cur);
        if (cur == base_vertex) break;
    }
    if (path.back() != base_vertex) throw InternalError("vertex unreachable from base");
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

std::vector<int> closed_walk(const std::vector<int>& loop, int entry,
                             const std::vector<int>& path) {
    // path = base .. entry; loop = cycle containing entry.
    std::vector<int> walk = path;
    size_t at = 0;
    while (loop[at] != entry) ++at;
    for (size_t k = 1; k <= loop.size(); ++k)
        walk.push_back(loop[(at + k) % loop.size()]);
    for (size_t k = path.size() - 1; k-- > 0;) walk.push_back(path[k]);
    return walk;
}

}  // namespace

std::vector<int> VoronoiSkeleton::loop_path(int k) const {
    const std::vector<int>& ring = cell[static_cast<size_t>(k)];
    int entry = ring[0];
    for (int v : ring) {
        if (bfs_depth[static_cast<size_t>(v)] < bfs_depth[static_cast<size_t>(entry)] ||
            (bfs_depth[static_cast<size_t>(v)] == bfs_depth[static_cast<size_t>(entry)] &&
             v < entry))
            entry = v;
    }
    return closed_walk(ring, entry, path_from_base(entry));
}

std::vector<int> VoronoiSkeleton::inf_loop_path() const {
    int entry = inf_loop[0];
    for (int v : inf_loop) {
        if (bfs_depth[static_cast<size_t>(v)] < bfs_depth[static_cast<size_t>(entry)] ||
            (bfs_depth[static_cast<size_t>(v)] == bfs_depth[static_cast<size_t>(entry)] &&
             v < entry))
            entry = v;
    }
    return closed_walk(inf_loop, entry, path_from_base(entry));
}

Cplx VoronoiSkeleton::vertex_pos(int v, mpfr_prec_t prec) const {
    const ExactPoint& p = vertices[static_cast<size_t>(v)];
    return Cplx(to_real(p.x, prec), to_real(p.y, prec));
}

VoronoiSkeleton build_skeleton(const std::vector<Cplx>& critical_points,
                               const PrecisionContext& ctx) {
    (void)ctx;  // the graph is intentionally precision independent
    if (critical_points.empty()) throw DegenerateDiagram("no finite critical values");

    // Snap the finite sites to the grid.
    std::vector<Pt> scaled;
    for (const Cplx& p : critical_points)
        scaled.emplace_back(snap_scaled(p.re), snap_scaled(p.im));
    int nf = static_cast<int>(scaled.size());
    for (int i = 0; i < nf; ++i)
        for (int j = i + 1; j < nf; ++j)
            if (scaled[static_cast<size_t>(i)] == scaled[static_cast<size_t>(j)])
                throw InternalError("critical values collide on the snap grid");

    // Surrounding hexagon: center at the mean, radius twice the spread.
    QQ cx(0), cy(0);
    for (const Pt& p : scaled) {
        cx += unscale(p.first);
        cy += unscale(p.second);
    }
    cx /= nf;
    cy /= nf;
    Real c0x = to_real(cx, kGeomPrec), c0y = to_real(cy, kGeomPrec);
    Real rho(0.0, kGeomPrec);
    for (const Pt& p : scaled) {
        Real dx = to_real(unscale(p.first), kGeomPrec) - c0x;
        Real dy = to_real(unscale(p.second), kGeomPrec) - c0y;
        rho = max(rho, hypot(dx, dy));
    }
    rho = rho + rho;
    rho = max(rho, Real(1.0, kGeomPrec));
    Real pi = Real::pi(kGeomPrec);
    for (int k = 0; k < 6; ++k) {
        Real theta = pi * static_cast<long>(2 * k + 1) / 6;
        Cplx dir = unit_circle(theta);
        scaled.emplace_back(snap_scaled(c0x + rho * dir.re), snap_scaled(c0y + rho * dir.im));
    }

    VoronoiSkeleton sk;
    sk.finite_sites = nf;
    for (const Pt& p : scaled) sk.sites.push_back({unscale(p.first), unscale(p.second)});

    std::vector<Triangle> tris = delaunay(scaled);

    // Circumcenters, deduplicated and lex sorted.
    std::vector<ExactPoint> centers;
    centers.reserve(tris.size());
    for (const Triangle& t : tris)
        centers.push_back(circumcenter(scaled[static_cast<size_t>(t.a)],
                                       scaled[static_cast<size_t>(t.b)],
                                       scaled[static_cast<size_t>(t.c)]));

    std::vector<ExactPoint> uniq = centers;
    std::sort(uniq.begin(), uniq.end(), pt_less);
    uniq.erase(std::unique(uniq.begin(), uniq.end(),
                           [](const ExactPoint& a, const ExactPoint& b) {
                               return a.x == b.x && a.y == b.y;
                           }),
               uniq.end());
    auto vid_of = [&](const ExactPoint& p) {
        auto it = std::lower_bound(uniq.begin(), uniq.end(), p, pt_less);
        return static_cast<int>(it - uniq.begin());
    };
    std::vector<int> tri_vid(tris.size());
    for (size_t t = 0; t < tris.size(); ++t) tri_vid[t] = vid_of(centers[t]);
    sk.vertices = std::move(uniq);

    sk.clearance.resize(sk.vertices.size());
    for (size_t v = 0; v < sk.vertices.size(); ++v) {
        double best = 1e300;
        for (const ExactPoint& s : sk.sites) best = std::min(best, dist_d(sk.vertices[v], s));
        sk.clearance[v] = best;
    }

    // Directed Delaunay edge -> triangle index.
    std::map<std::pair<int, int>, int> by_edge;
    for (size_t t = 0; t < tris.size(); ++t) {
        const Triangle& tr = tris[t];
        by_edge[{tr.a, tr.b}] = static_cast<int>(t);
        by_edge[{tr.b, tr.c}] = static_cast<int>(t);
        by_edge[{tr.c, tr.a}] = static_cast<int>(t);
    }

    // Voronoi cell of each finite site: walk the ccw link around the site.
    std::map<std::pair<int, int>, std::pair<int, int>> edge_sites;  // (u,v) -> site pair
    for (int s = 0; s < nf; ++s) {
        std::map<int, std::pair<int, int>> link;  // u -> (v, triangle)
        for (size_t t = 0; t < tris.size(); ++t) {
            int v[3] = {tris[t].a, tris[t].b, tris[t].c};
            for (int r = 0; r < 3; ++r)
                if (v[r] == s) link[v[(r + 1) % 3]] = {v[(r + 2) % 3], static_cast<int>(t)};
        }
        if (link.empty()) throw DegenerateDiagram("isolated site");
        int u0 = link.begin()->first;
        std::vector<int> ring;        // circumcenter vertex ids
        std::vector<int> across;      // the site on the far side of each ring edge
        int u = u0;
        do {
            auto it = link.find(u);
            if (it == link.end()) throw DegenerateDiagram("open voronoi cell");
            ring.push_back(tri_vid[static_cast<size_t>(it->second.second)]);
            across.push_back(it->second.first);  // next dual edge separates s from it
            u = it->second.first;
            if (ring.size() > link.size()) throw DegenerateDiagram("voronoi link is not a cycle");
        } while (u != u0);
        if (ring.size() != link.size()) throw DegenerateDiagram("voronoi link is not a cycle");

        // Register edges between consecutive ring triangles, then drop
        // zero-length steps from the cell loop.
        std::vector<int> loop;
        for (size_t i = 0; i < ring.size(); ++i) {
            int c1 = ring[i];
            int c2 = ring[(i + 1) % ring.size()];
            if (c1 == c2) continue;
            auto key = std::minmax(c1, c2);
            auto found = edge_sites.find({key.first, key.second});
            std::pair<int, int> sp{s, across[i]};
            if (sp.first > sp.second) std::swap(sp.first, sp.second);
            if (found == edge_sites.end())
                edge_sites[{key.first, key.second}] = sp;
            else if (found->second != sp)
                throw InternalError("voronoi edge separates two different site pairs");
            loop.push_back(c1);
        }
        if (loop.size() < 3) throw DegenerateDiagram("voronoi cell collapsed");
        // ccw sanity: exact shoelace must be positive.
        QQ area(0);
        for (size_t i = 0; i < loop.size(); ++i) {
            const ExactPoint& a = sk.vertices[static_cast<size_t>(loop[i])];
            const ExactPoint& b = sk.vertices[static_cast<size_t>(loop[(i + 1) % loop.size()])];
            area += a.x * b.y - a.y * b.x;
        }
        if (area <= 0) throw InternalError("voronoi cell is not ccw");
        sk.cell.push_back(std::move(loop));
    }

    // Materialize the edge list.
    for (const auto& [k, sp] : edge_sites) {
        SkelEdge e;
        e.u = k.first;
        e.v = k.second;
        e.site_a = sp.first;
        e.site_b = sp.second;
        double gap = dist_d(sk.sites[static_cast<size_t>(sp.first)],
                            sk.sites[static_cast<size_t>(sp.second)]) /
                     2.0;
        e.clearance = std::min({sk.clearance[static_cast<size_t>(e.u)],
                                sk.clearance[static_cast<size_t>(e.v)], gap});
        sk.edges.push_back(e);
    }
    sk.adj.assign(sk.vertices.size(), {});
    for (const SkelEdge& e : sk.edges) {
        sk.adj[static_cast<size_t>(e.u)].push_back(e.v);
        sk.adj[static_cast<size_t>(e.v)].push_back(e.u);
    }
    for (auto& nb : sk.adj) std::sort(nb.begin(), nb.end());

    // Infinity loop: duals of Delaunay edges between a finite site and a
    // hexagon site form one closed curve around all finite cells.
    {
        std::map<int, std::vector<int>> walk_adj;
        long walk_edges = 0;
        for (const auto& [e, t1] : by_edge) {
            if (e.first > e.second) continue;
            bool mixed = (e.first < nf) != (e.second < nf);
            if (!mixed) continue;
            auto t2 = by_edge.find({e.second, e.first});
            if (t2 == by_edge.end()) throw DegenerateDiagram("mixed delaunay edge on the hull");
            int c1 = tri_vid[static_cast<size_t>(t1)];
            int c2 = tri_vid[static_cast<size_t>(t2->second)];
            if (c1 == c2) continue;
            walk_adj[c1].push_back(c2);
            walk_adj[c2].push_back(c1);
            ++walk_edges;
        }
        if (walk_edges < 3) throw DegenerateDiagram("infinity loop too short");
        for (const auto& [v, nb] : walk_adj)
            if (nb.size() != 2) throw DegenerateDiagram("infinity loop has a pinch point");
        std::vector<int> loop;
        int start = walk_adj.begin()->first;
        int prev = -1, cur = start;
        do {
            loop.push_back(cur);
            const auto& nb = walk_adj[cur];
            int nxt = (nb[0] == prev) ? nb[1] : nb[0];
            prev = cur;
            cur = nxt;
            if (loop.size() > walk_adj.size())
                throw DegenerateDiagram("infinity walk does not close");
        } while (cur != start);
        if (static_cast<long>(loop.size()) != walk_edges)
            throw DegenerateDiagram("infinity walk is not a single cycle");
        QQ area(0);
        for (size_t i = 0; i < loop.size(); ++i) {
            const ExactPoint& a = sk.vertices[static_cast<size_t>(loop[i])];
            const ExactPoint& b = sk.vertices[static_cast<size_t>(loop[(i + 1) % loop.size()])];
            area += a.x * b.y - a.y * b.x;
        }
        if (area == 0) throw DegenerateDiagram("infinity loop has no area");
        if (area < 0) std::reverse(loop.begin(), loop.end());
        sk.inf_loop = std::move(loop);
    }

    // Base vertex: maximal clearance, smallest id on ties (ids are lex
    // ordered, so ties resolve lexicographically).
    sk.base_vertex = 0;
    for (size_t v = 1; v < sk.vertices.size(); ++v)
        if (sk.clearance[v] > sk.clearance[static_cast<size_t>(sk.base_vertex)])
            sk.base_vertex = static_cast<int>(v);

    // BFS tree with sorted adjacency gives deterministic paths.
    sk.bfs_parent.assign(sk.vertices.size(), -2);
    sk.bfs_depth.assign(sk.vertices.size(), -1);
    std::queue<int> q;
    q.push(sk.base_vertex);
    sk.bfs_parent[static_cast<size_t>(sk.base_vertex)] = -1;
    sk.bfs_depth[static_cast<size_t>(sk.base_vertex)] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : sk.adj[static_cast<size_t>(v)])
            if (sk.bfs_parent[static_cast<size_t>(w)] == -2) {
                sk.bfs_parent[static_cast<size_t>(w)] = v;
                sk.bfs_depth[static_cast<size_t>(w)] = sk.bfs_depth[static_cast<size_t>(v)] + 1;
                q.push(w);
            }
    }
    for (size_t v = 0; v < sk.vertices.size(); ++v)
        if (sk.bfs_parent[v] == -2) throw InternalError("skeleton graph is disconnected");

    return sk;
}

}  // namespace periodica
