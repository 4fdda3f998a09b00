#pragma once

#include <map>
#include <vector>

#include "periodica/curve.hpp"
#include "periodica/skeleton.hpp"

namespace periodica {

// Sheet permutations, acting on the right: (p * q)[k] = q[p[k]], so composing
// left to right matches applying them along a path.
using Perm = std::vector<int>;

Perm perm_identity(int n);
Perm perm_compose(const Perm& p, const Perm& q);
Perm perm_inverse(const Perm& p);
int perm_cycle_count(const Perm& p);
bool perm_is_identity(const Perm& p);

// Roots of the fiber polynomial above x, in the canonical sheet order
// (lexicographic by (re, im) after rounding to working_bits).
std::vector<Cplx> sorted_fiber(const EmbeddedCurve& ec, const Cplx& x,
                               const PrecisionContext& ctx);

// Analytic continuation machinery over a fixed skeleton.  Results are cached
// per vertex and per directed edge.
class EdgeLifter {
  public:
    EdgeLifter(const PlaneCurve& curve, const VoronoiSkeleton& sk, const PrecisionContext& ctx);

    int degree() const { return ec_.degy(); }
    const PrecisionContext& ctx() const { return ctx_; }
    const VoronoiSkeleton& skeleton() const { return sk_; }
    const EmbeddedCurve& embedded() const { return ec_; }

    const std::vector<Cplx>& vertex_fiber(int v);

    // Sheet map along the edge u -> v: tracked sheet i of the fiber over u
    // arrives at sorted position edge_perm(u,v)[i] over v.
    const Perm& edge_perm(int u, int v);

    // Fiber values along u -> v at interior parameters ts (ascending, in
    // (0,1)); out[k][i] is tracked sheet i at ts[k].  Sheets are labeled by
    // the sorted fiber over u.  The Real overload lands on each parameter
    // exactly, which quadrature needs; the double one is a convenience.
    std::vector<std::vector<Cplx>> edge_values(int u, int v, const std::vector<Real>& ts);
    std::vector<std::vector<Cplx>> edge_values(int u, int v, const std::vector<double>& ts);

    // Compose sheet maps along a vertex walk.
    Perm walk_perm(const std::vector<int>& walk);

    // Precompute every vertex fiber and edge permutation; used to batch the
    // expensive work across threads before the serial assembly stages.
    void prepare(int threads);

    Cplx vertex_x(int v) const { return sk_.vertex_pos(v, ctx_.prec()); }

  private:
    std::vector<std::vector<Cplx>> walk_fibers(const Cplx& x0, const Cplx& x1,
                                               std::vector<Cplx> fiber, double clearance,
                                               const std::vector<Real>& stops) const;

    const VoronoiSkeleton& sk_;
    PrecisionContext ctx_;
    EmbeddedCurve ec_;
    std::map<int, std::vector<Cplx>> fiber_cache_;
    std::map<std::pair<int, int>, Perm> perm_cache_;
};

struct MonodromyRep {
    enum class Product { ok, ok_after_inversion, failed };

    int degree = 0;
    std::vector<Perm> sigma;  // per finite site
    Perm sigma_inf;
    std::vector<int> angular_order;  // finite sites ordered by angle about the centroid
    Product product = Product::ok;
    int genus = 0;  // Riemann-Hurwitz from the branch data
};

// Local monodromy of every finite site plus infinity; throws MonodromyError
// when the representation is not transitive or the branch data is
// inconsistent.  A failed product identity is recorded, not thrown.
MonodromyRep monodromy_rep(EdgeLifter& lift);

}  // namespace periodica
