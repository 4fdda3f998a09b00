#pragma once

#include <map>
#include <utility>
#include <vector>

#include "periodica/continuation.hpp"
#include "periodica/skeleton.hpp"
#include "periodica/zmat.hpp"

namespace periodica {

// Graph of the covering surface over the skeleton: one vertex per
// (base vertex, sheet), one edge per (base edge, starting sheet).
struct LiftedGraph {
    const VoronoiSkeleton* sk = nullptr;
    int sheets = 1;
    // per lifted vertex: (neighbor lifted id, base edge index), sorted
    std::vector<std::vector<std::pair<int, int>>> adj;

    int lifted(int v, int s) const { return v * sheets + s; }
    int base_of(int lid) const { return lid / sheets; }
    int sheet_of(int lid) const { return lid % sheets; }
    int size() const { return static_cast<int>(adj.size()); }
    int root() const { return lifted(sk->base_vertex, 0); }
    long edge_count() const;
};

// Throws NotIrreducible when the lifted graph is disconnected.
LiftedGraph lifted_graph(EdgeLifter& lift);

// Closed walk of lifted vertex ids, front() == back(); a single vertex is the
// trivial cycle.
using Walk = std::vector<int>;

// Remove immediate backtracks (spikes); the chain is unchanged.
Walk normalize_walk(Walk w);

// One cycle per non-tree edge of the breadth-first spanning tree, routed
// through the lowest common ancestor so no cycle backtracks.
std::vector<Walk> fundamental_cycles(const LiftedGraph& G);

// Z-chain over lifted edges; key (lu, lv) with lu < lv, orientation in the
// sign of the multiplicity.
struct Chain {
    std::map<std::pair<int, int>, long> mult;

    void add(int lu, int lv, long m);
    bool empty() const { return mult.empty(); }
    friend bool operator==(const Chain& a, const Chain& b) { return a.mult == b.mult; }
};

Chain chain_of(const Walk& w);
bool has_zero_boundary(const Chain& c);

// Doubled local contributions (in, out) of one passage pair at a common
// vertex: a runs n1 -> v0 -> n2, b runs n3 -> v0 -> n4, and dk is the exact
// plane direction from v0 toward nk.  Returns each part as twice its value.
struct Dir {
    QQ x, y;
};
std::pair<int, int> local_intersection2(int n1, int n2, int n3, int n4, const Dir& d1,
                                        const Dir& d2, const Dir& d3, const Dir& d4);

// Intersection pairing of two cycles via the vertex-local half-integer rule.
int intersection_number(const Walk& a, const Walk& b, const LiftedGraph& G);

ZMat intersection_gram(const std::vector<Walk>& cycles, const LiftedGraph& G, int threads = 1);

// B unimodular with B*G*B^T in symplectic normal form: diagonal blocks
// [[0, d_i], [-d_i, 0]] with d_1 | d_2 | ..., then zeros.
std::pair<ZMat, std::vector<ZZ>> frobenius_reduce(const ZMat& G);

struct SymplecticBasis {
    int genus = 0;
    std::vector<Chain> alpha, beta;
    // unimodular; rows 0..g-1 give alpha, g..2g-1 beta, rest the null space
    ZMat change_of_basis;
    std::vector<Walk> cycles;  // fundamental cycles the rows combine
    ZMat gram;                 // their intersection matrix
};

// Frobenius reduction of the Gram matrix; asserts unit elementary divisors
// (throws NonUnitDivisor otherwise) and reorders rows alpha-first.
SymplecticBasis symplectic_basis(const std::vector<Walk>& cycles, const ZMat& gram,
                                 const LiftedGraph& G);

SymplecticBasis build_symplectic_basis(EdgeLifter& lift, int threads = 1);

}  // namespace periodica
