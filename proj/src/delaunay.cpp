#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "periodica/error.hpp"
#include "periodica/skeleton.hpp"

namespace periodica {

namespace {

using Pt = std::pair<ZZ, ZZ>;

ZZ cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
}

}  // namespace

int incircle_sign(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
    // Lifted 3x3 determinant; positive for d strictly inside when (a,b,c) ccw.
    ZZ ax = a.first - d.first, ay = a.second - d.second;
    ZZ bx = b.first - d.first, by = b.second - d.second;
    ZZ cx = c.first - d.first, cy = c.second - d.second;
    ZZ a2 = ax * ax + ay * ay;
    ZZ b2 = bx * bx + by * by;
    ZZ c2 = cx * cx + cy * cy;
    ZZ det = a2 * (bx * cy - by * cx) - b2 * (ax * cy - ay * cx) + c2 * (ax * by - ay * bx);
    return sgn(det);
}

std::vector<Triangle> delaunay(const std::vector<Pt>& pts) {
    size_t n = pts.size();
    if (n < 3) throw DegenerateDiagram("need at least three sites");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return pts[static_cast<size_t>(i)] < pts[static_cast<size_t>(j)];
    });
    for (size_t i = 1; i < n; ++i)
        if (pts[static_cast<size_t>(order[i])] == pts[static_cast<size_t>(order[i - 1])])
            throw DegenerateDiagram("coincident sites");

    struct Tri {
        int v[3];
        bool alive = true;
    };
    std::vector<Tri> tris;
    std::map<std::pair<int, int>, int> by_edge;  // directed edge -> triangle id

    auto add_tri = [&](int a, int b, int c) {
        int id = static_cast<int>(tris.size());
        tris.push_back({{a, b, c}, true});
        by_edge[{a, b}] = id;
        by_edge[{b, c}] = id;
        by_edge[{c, a}] = id;
        return id;
    };
    auto kill_tri = [&](int id) {
        Tri& t = tris[static_cast<size_t>(id)];
        t.alive = false;
        by_edge.erase({t.v[0], t.v[1]});
        by_edge.erase({t.v[1], t.v[2]});
        by_edge.erase({t.v[2], t.v[0]});
    };
    auto at = [&](int i) -> const Pt& { return pts[static_cast<size_t>(i)]; };

    // Scan: points in lex order, the first non-collinear point closes a fan.
    std::vector<int> hull;  // ccw
    size_t next = 0;
    {
        std::vector<int> chain{order[0], order[1]};
        next = 2;
        while (next < n && cross(at(chain[0]), at(chain[1]), at(order[next])) == 0) {
            chain.push_back(order[next]);
            ++next;
        }
        if (next == n) throw DegenerateDiagram("all sites are collinear");
        int p = order[next];
        ++next;
        bool left = cross(at(chain[0]), at(chain[1]), at(p)) > 0;
        for (size_t i = 0; i + 1 < chain.size(); ++i) {
            if (left)
                add_tri(chain[i], chain[i + 1], p);
            else
                add_tri(chain[i + 1], chain[i], p);
        }
        if (left) {
            hull = chain;
            hull.push_back(p);
        } else {
            hull.push_back(chain.front());
            hull.push_back(p);
            for (size_t i = chain.size(); i-- > 1;) hull.push_back(chain[static_cast<size_t>(i)]);
        }
    }

    for (; next < n; ++next) {
        int p = order[next];
        size_t h = hull.size();
        std::vector<bool> vis(h);
        for (size_t i = 0; i < h; ++i)
            vis[i] = cross(at(hull[i]), at(hull[(i + 1) % h]), at(p)) < 0;
        // The visible edges form one contiguous arc; find its start.
        size_t start = h;
        for (size_t i = 0; i < h; ++i)
            if (vis[i] && !vis[(i + h - 1) % h]) {
                start = i;
                break;
            }
        if (start == h) throw DegenerateDiagram("sweep point sees no hull edge");
        size_t len = 0;
        while (len < h && vis[(start + len) % h]) ++len;
        for (size_t k = 0; k < len; ++k) {
            int u = hull[(start + k) % h];
            int v = hull[(start + k + 1) % h];
            add_tri(v, u, p);
        }
        // Replace the arc interior with p.
        std::vector<int> nh;
        for (size_t i = (start + len) % h;; i = (i + 1) % h) {
            nh.push_back(hull[i]);
            if (i == start) break;
        }
        nh.push_back(p);
        hull = std::move(nh);
    }

    // Global Lawson pass.
    std::deque<std::pair<int, int>> queue;
    for (const auto& [e, id] : by_edge) {
        (void)id;
        if (e.first < e.second) queue.push_back(e);
    }
    long flips = 0;
    const long flip_cap = static_cast<long>(n) * static_cast<long>(n) * 8 + 1024;
    while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop_front();
        auto it1 = by_edge.find({a, b});
        auto it2 = by_edge.find({b, a});
        if (it1 == by_edge.end() || it2 == by_edge.end()) continue;
        const Tri& t1 = tris[static_cast<size_t>(it1->second)];
        const Tri& t2 = tris[static_cast<size_t>(it2->second)];
        int c = t1.v[0] + t1.v[1] + t1.v[2] - a - b;
        int d = t2.v[0] + t2.v[1] + t2.v[2] - a - b;
        if (incircle_sign(at(a), at(b), at(c), at(d)) <= 0) continue;
        if (++flips > flip_cap) throw InternalError("lawson flips did not terminate");
        kill_tri(it1->second);
        kill_tri(it2->second);
        add_tri(a, d, c);
        add_tri(d, b, c);
        for (auto e : {std::pair<int, int>{a, d}, {d, b}, {b, c}, {c, a}})
            queue.push_back(e.first < e.second ? e : std::pair<int, int>{e.second, e.first});
    }

    std::vector<Triangle> out;
    for (const Tri& t : tris)
        if (t.alive) out.push_back({t.v[0], t.v[1], t.v[2]});
    // Canonical form: rotate each triangle so the smallest vertex leads, then
    // sort; downstream code and tests get a deterministic list.
    for (Triangle& t : out) {
        while (t.a > t.b || t.a > t.c) {
            int tmp = t.a;
            t.a = t.b;
            t.b = t.c;
            t.c = tmp;
        }
    }
    std::sort(out.begin(), out.end(), [](const Triangle& x, const Triangle& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    });
    return out;
}

}  // namespace periodica
