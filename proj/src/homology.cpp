#include "periodica/homology.hpp"

#include <algorithm>
#include <deque>

#include "periodica/error.hpp"
#include "periodica/parallel.hpp"

namespace periodica {

long LiftedGraph::edge_count() const {
    long deg = 0;
    for (const auto& a : adj) deg += static_cast<long>(a.size());
    return deg / 2;
}

LiftedGraph lifted_graph(EdgeLifter& lift) {
    const VoronoiSkeleton& sk = lift.skeleton();
    const int n = lift.degree();
    LiftedGraph G;
    G.sk = &sk;
    G.sheets = n;
    G.adj.assign(static_cast<size_t>(sk.vertices.size()) * n, {});
    for (size_t k = 0; k < sk.edges.size(); ++k) {
        const SkelEdge& e = sk.edges[k];
        const Perm& p = lift.edge_perm(e.u, e.v);
        for (int s = 0; s < n; ++s) {
            int lu = G.lifted(e.u, s), lv = G.lifted(e.v, p[s]);
            G.adj[lu].push_back({lv, static_cast<int>(k)});
            G.adj[lv].push_back({lu, static_cast<int>(k)});
        }
    }
    for (auto& a : G.adj) std::sort(a.begin(), a.end());

    std::vector<char> seen(G.size(), 0);
    std::deque<int> bfs{G.root()};
    seen[G.root()] = 1;
    int reached = 1;
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop_front();
        for (const auto& nb : G.adj[u])
            if (!seen[nb.first]) {
                seen[nb.first] = 1;
                ++reached;
                bfs.push_back(nb.first);
            }
    }
    if (reached != G.size())
        throw NotIrreducible("lifted graph is disconnected; the curve is reducible");
    return G;
}

Walk normalize_walk(Walk w) {
    if (w.size() < 2) return w;
    if (w.front() != w.back()) throw InternalError("walk is not closed");
    std::vector<int> v(w.begin(), w.end() - 1);
    bool changed = true;
    while (changed && v.size() >= 2) {
        changed = false;
        const long m = static_cast<long>(v.size());
        for (long i = 0; i < m; ++i) {
            long prev = (i + m - 1) % m, next = (i + 1) % m;
            if (v[prev] == v[next]) {
                std::vector<int> nv;
                nv.reserve(m - 2);
                for (long j = 0; j < m; ++j)
                    if (j != i && j != next) nv.push_back(v[j]);
                v = std::move(nv);
                changed = true;
                break;
            }
        }
    }
    if (v.size() <= 1) return {w.front()};
    Walk out(v.begin(), v.end());
    out.push_back(v[0]);
    return out;
}

std::vector<Walk> fundamental_cycles(const LiftedGraph& G) {
    const int V = G.size();
    std::vector<int> parent(V, -2), depth(V, 0);
    std::deque<int> bfs{G.root()};
    parent[G.root()] = -1;
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop_front();
        for (const auto& nb : G.adj[u])
            if (parent[nb.first] == -2) {
                parent[nb.first] = u;
                depth[nb.first] = depth[u] + 1;
                bfs.push_back(nb.first);
            }
    }

    auto is_tree_edge = [&](int a, int b) { return parent[a] == b || parent[b] == a; };
    std::vector<Walk> cycles;
    for (int u = 0; u < V; ++u) {
        for (const auto& nb : G.adj[u]) {
            int v = nb.first;
            if (u >= v || is_tree_edge(u, v)) continue;
            // route through the lowest common ancestor: no backtracking
            std::vector<int> pu{u}, pv{v};
            int a = u, b = v;
            while (depth[a] > depth[b]) pu.push_back(a = parent[a]);
            while (depth[b] > depth[a]) pv.push_back(b = parent[b]);
            while (a != b) {
                pu.push_back(a = parent[a]);
                pv.push_back(b = parent[b]);
            }
            Walk w(pu.rbegin(), pu.rend());  // lca .. u
            w.insert(w.end(), pv.begin(), pv.end());  // v .. lca
            cycles.push_back(std::move(w));
        }
    }
    long expected = G.edge_count() - V + 1;
    if (static_cast<long>(cycles.size()) != expected)
        throw InternalError("fundamental cycle count mismatch");
    return cycles;
}

void Chain::add(int lu, int lv, long m) {
    if (m == 0) return;
    if (lu == lv) throw InternalError("chain edge with equal endpoints");
    auto key = lu < lv ? std::pair<int, int>{lu, lv} : std::pair<int, int>{lv, lu};
    long s = lu < lv ? m : -m;
    auto it = mult.find(key);
    if (it == mult.end()) {
        mult.emplace(key, s);
    } else if ((it->second += s) == 0) {
        mult.erase(it);
    }
}

Chain chain_of(const Walk& w) {
    Chain c;
    for (size_t i = 0; i + 1 < w.size(); ++i) c.add(w[i], w[i + 1], 1);
    return c;
}

bool has_zero_boundary(const Chain& c) {
    std::map<int, long> deg;
    for (const auto& [e, m] : c.mult) {
        deg[e.first] -= m;
        deg[e.second] += m;
    }
    for (const auto& kv : deg)
        if (kv.second != 0) return false;
    return true;
}

namespace {

int cross_sign(const Dir& a, const Dir& b) { return sgn(a.x * b.y - a.y * b.x); }
int dot_sign(const Dir& a, const Dir& b) { return sgn(a.x * b.x + a.y * b.y); }

// Angular class of u relative to a: 0 strictly left, 1 opposite, 2 strictly
// right.  u parallel to a cannot occur for distinct edges at one vertex.
int half_class(const Dir& a, const Dir& u) {
    int c = cross_sign(a, u);
    if (c > 0) return 0;
    if (c < 0) return 2;
    if (dot_sign(a, u) < 0) return 1;
    throw InternalError("coincident edge directions");
}

// Going counterclockwise from a, does b appear strictly before c?
bool ccw_before(const Dir& a, const Dir& b, const Dir& c) {
    int hb = half_class(a, b), hc = half_class(a, c);
    if (hb != hc) return hb < hc;
    return cross_sign(b, c) > 0;
}

}  // namespace

std::pair<int, int> local_intersection2(int n1, int n2, int n3, int n4, const Dir& d1,
                                        const Dir& d2, const Dir& d3, const Dir& d4) {
    // Each part is zero exactly when the probed edge of b lies on a's strand;
    // the deferred half then shows up at the far end of the shared stretch.
    // Anything else makes shared-edge totals half-integral.
    int in2 = 0, out2 = 0;
    if (n3 != n1 && n3 != n2) in2 = ccw_before(d1, d3, d2) ? 1 : -1;
    if (n4 != n1 && n4 != n2) out2 = ccw_before(d1, d2, d4) ? 1 : -1;
    return {in2, out2};
}

namespace {

struct Passage {
    int in, out;  // neighbor lifted ids
};

std::map<int, std::vector<Passage>> passages_of(const Walk& w) {
    std::map<int, std::vector<Passage>> m;
    if (w.size() < 3) return m;
    const size_t k = w.size() - 1;  // closed: w[k] == w[0]
    for (size_t i = 0; i < k; ++i) {
        int prev = w[i == 0 ? k - 1 : i - 1];
        int next = w[i + 1];
        m[w[i]].push_back({prev, next});
    }
    return m;
}

Dir dir_between(const LiftedGraph& G, int lv0, int lnbr) {
    const ExactPoint& p = G.sk->vertices[G.base_of(lv0)];
    const ExactPoint& q = G.sk->vertices[G.base_of(lnbr)];
    return {q.x - p.x, q.y - p.y};
}

}  // namespace

int intersection_number(const Walk& a, const Walk& b, const LiftedGraph& G) {
    Walk na = normalize_walk(a), nb = normalize_walk(b);
    auto pa = passages_of(na);
    auto pb = passages_of(nb);
    long total2 = 0;
    for (const auto& [v0, lista] : pa) {
        auto it = pb.find(v0);
        if (it == pb.end()) continue;
        for (const Passage& qa : lista) {
            Dir d1 = dir_between(G, v0, qa.in), d2 = dir_between(G, v0, qa.out);
            for (const Passage& qb : it->second) {
                Dir d3 = dir_between(G, v0, qb.in), d4 = dir_between(G, v0, qb.out);
                auto [i2, o2] = local_intersection2(qa.in, qa.out, qb.in, qb.out, d1, d2, d3, d4);
                total2 += i2 + o2;
            }
        }
    }
    if (total2 % 2 != 0) throw NonIntegerPairing("half-integer total intersection number");
    return static_cast<int>(total2 / 2);
}

ZMat intersection_gram(const std::vector<Walk>& cycles, const LiftedGraph& G, int threads) {
    const long r = static_cast<long>(cycles.size());
    ZMat gram(r, r);
    std::vector<std::pair<long, long>> jobs;
    for (long i = 0; i < r; ++i)
        for (long j = i + 1; j < r; ++j) jobs.push_back({i, j});
    std::vector<int> vals(jobs.size());
    parallel_for(static_cast<long>(jobs.size()), threads, [&](long k) {
        vals[k] = intersection_number(cycles[jobs[k].first], cycles[jobs[k].second], G);
    });
    for (size_t k = 0; k < jobs.size(); ++k) {
        auto [i, j] = jobs[k];
        gram.at(i, j) = vals[k];
        gram.at(j, i) = -vals[k];
    }
    return gram;
}

namespace {

int cmpabs_z(const ZZ& a, const ZZ& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

// nearest-integer quotient of a/m
ZZ round_div(const ZZ& a, const ZZ& m) {
    ZZ am = abs(m);
    ZZ q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), a.get_mpz_t(), am.get_mpz_t());
    if (2 * rem > am) q += 1;
    return m < 0 ? ZZ(-q) : q;
}

}  // namespace

std::pair<ZMat, std::vector<ZZ>> frobenius_reduce(const ZMat& G) {
    const long r = G.rows;
    if (G.cols != r) throw InternalError("frobenius_reduce needs a square matrix");
    for (long i = 0; i < r; ++i)
        for (long j = i; j < r; ++j)
            if (G.at(i, j) != -G.at(j, i)) throw InternalError("matrix is not antisymmetric");

    ZMat M = G;
    ZMat B = ZMat::identity(r);
    auto swap_rc = [&](long i, long j) {
        if (i == j) return;
        for (long c = 0; c < r; ++c) std::swap(M.at(i, c), M.at(j, c));
        for (long c = 0; c < r; ++c) std::swap(M.at(c, i), M.at(c, j));
        for (long c = 0; c < r; ++c) std::swap(B.at(i, c), B.at(j, c));
    };
    // row_i += q row_j, col_i += q col_j (congruence by a unimodular move)
    auto add_rc = [&](long i, long j, const ZZ& q) {
        if (q == 0) return;
        for (long c = 0; c < r; ++c) M.at(i, c) += q * M.at(j, c);
        for (long c = 0; c < r; ++c) M.at(c, i) += q * M.at(c, j);
        for (long c = 0; c < r; ++c) B.at(i, c) += q * B.at(j, c);
    };

    std::vector<ZZ> divisors;
    long k = 0;
    while (k + 1 < r) {
        long bi = -1, bj = -1;
        for (long i = k; i < r; ++i)
            for (long j = i + 1; j < r; ++j)
                if (M.at(i, j) != 0 &&
                    (bi < 0 || cmpabs_z(M.at(i, j), M.at(bi, bj)) < 0)) {
                    bi = i;
                    bj = j;
                }
        if (bi < 0) break;
        swap_rc(bi, k);  // bj > bi >= k, so bj is untouched by this swap
        swap_rc(bj, k + 1);

        const ZZ m = M.at(k, k + 1);
        bool clean = true;
        for (long l = k + 2; l < r; ++l) {
            add_rc(l, k + 1, -round_div(M.at(k, l), m));
            add_rc(l, k, round_div(M.at(k + 1, l), m));
            if (M.at(k, l) != 0 || M.at(k + 1, l) != 0) clean = false;
        }
        if (!clean) continue;  // leftover remainders are smaller pivots

        // divisibility: the pivot must divide the remaining block
        long oi = -1;
        for (long i = k + 2; i < r && oi < 0; ++i)
            for (long j = i + 1; j < r; ++j)
                if (M.at(i, j) % m != 0) {
                    oi = i;
                    break;
                }
        if (oi >= 0) {
            add_rc(k, oi, ZZ(1));
            continue;
        }
        if (m < 0) swap_rc(k, k + 1);
        divisors.push_back(M.at(k, k + 1));
        k += 2;
    }
    return {std::move(B), std::move(divisors)};
}

SymplecticBasis symplectic_basis(const std::vector<Walk>& cycles, const ZMat& gram,
                                 const LiftedGraph& G) {
    (void)G;
    auto [B, d] = frobenius_reduce(gram);
    for (const ZZ& di : d)
        if (di != 1)
            throw NonUnitDivisor("elementary divisor " + di.get_str() +
                                 " in the intersection form; expected 1");
    const long r = gram.rows;
    const long g = static_cast<long>(d.size());

    // reorder rows from (a1, b1, a2, b2, ...) to (a1..ag, b1..bg, rest)
    SymplecticBasis sb;
    sb.genus = static_cast<int>(g);
    sb.change_of_basis = ZMat(r, r);
    for (long i = 0; i < g; ++i)
        for (long c = 0; c < r; ++c) {
            sb.change_of_basis.at(i, c) = B.at(2 * i, c);
            sb.change_of_basis.at(g + i, c) = B.at(2 * i + 1, c);
        }
    for (long i = 2 * g; i < r; ++i)
        for (long c = 0; c < r; ++c) sb.change_of_basis.at(i, c) = B.at(i, c);

    // exact certificate: J = C * gram * C^T must be [[0,I],[-I,0]] + zeros
    ZMat J = sb.change_of_basis * gram * sb.change_of_basis.transpose();
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j) {
            ZZ want = 0;
            if (i < g && j == g + i) want = 1;
            if (j < g && i == g + j) want = -1;
            if (J.at(i, j) != want) throw InternalError("symplectic normal form check failed");
        }

    std::vector<Chain> fchains;
    fchains.reserve(cycles.size());
    for (const Walk& w : cycles) fchains.push_back(chain_of(w));
    auto combine = [&](long row) {
        Chain c;
        for (long j = 0; j < r; ++j) {
            const ZZ& q = sb.change_of_basis.at(row, j);
            if (q == 0) continue;
            if (!q.fits_slong_p()) throw InternalError("basis coefficient overflow");
            long qi = q.get_si();
            for (const auto& [e, m] : fchains[j].mult) c.add(e.first, e.second, qi * m);
        }
        return c;
    };
    for (long i = 0; i < g; ++i) sb.alpha.push_back(combine(i));
    for (long i = 0; i < g; ++i) sb.beta.push_back(combine(g + i));
    sb.cycles = cycles;
    sb.gram = gram;
    return sb;
}

SymplecticBasis build_symplectic_basis(EdgeLifter& lift, int threads) {
    LiftedGraph G = lifted_graph(lift);
    std::vector<Walk> cycles = fundamental_cycles(G);
    ZMat gram = intersection_gram(cycles, G, threads);
    return symplectic_basis(cycles, gram, G);
}

}  // namespace periodica
