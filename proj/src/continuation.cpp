#include "periodica/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "periodica/error.hpp"
#include "periodica/parallel.hpp"

namespace periodica {

Perm perm_identity(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

Perm perm_compose(const Perm& p, const Perm& q) {
    if (p.size() != q.size()) throw InternalError("permutation size mismatch");
    Perm r(p.size());
    for (size_t k = 0; k < p.size(); ++k) r[k] = q[p[k]];
    return r;
}

Perm perm_inverse(const Perm& p) {
    Perm r(p.size());
    for (size_t k = 0; k < p.size(); ++k) r[p[k]] = static_cast<int>(k);
    return r;
}

int perm_cycle_count(const Perm& p) {
    std::vector<char> seen(p.size(), 0);
    int cycles = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (size_t j = i; !seen[j]; j = p[j]) seen[j] = 1;
    }
    return cycles;
}

bool perm_is_identity(const Perm& p) {
    for (size_t k = 0; k < p.size(); ++k)
        if (p[k] != static_cast<int>(k)) return false;
    return true;
}

namespace {

Real round_to_bits(const Real& a, mpfr_prec_t bits) {
    Real r(a);
    mpfr_prec_round(r.get(), bits, MPFR_RNDN);
    return r;
}

// Lexicographic by (re, im) rounded to the working precision; ties broken by
// the full values.  Rounding first keeps the order stable when the same curve
// is run with extra guard bits.
void canonical_sort(std::vector<Cplx>& pts, mpfr_prec_t bits) {
    struct Key {
        Real re, im;
        const Cplx* p;
    };
    std::vector<Key> keys;
    keys.reserve(pts.size());
    for (const Cplx& z : pts) keys.push_back({round_to_bits(z.re, bits), round_to_bits(z.im, bits), &z});
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.re != b.re) return a.re < b.re;
        if (a.im != b.im) return a.im < b.im;
        if (a.p->re != b.p->re) return a.p->re < b.p->re;
        return a.p->im < b.p->im;
    });
    std::vector<Cplx> out;
    out.reserve(pts.size());
    for (const Key& k : keys) out.push_back(*k.p);
    pts = std::move(out);
}

Real min_pairwise_gap(const std::vector<Cplx>& f, mpfr_prec_t prec) {
    if (f.size() < 2) return Real(1e30, prec);
    Real best(prec), d(prec);
    bool first = true;
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = i + 1; j < f.size(); ++j) {
            d = abs(f[i] - f[j]);
            if (first || d < best) {
                best = d;
                first = false;
            }
        }
    return best;
}

// Match a tracked fiber against the sorted reference fiber over the same
// point; both are full-precision root sets, so nearest-point matching within
// a third of the root separation is unambiguous.
Perm match_to_sorted(const std::vector<Cplx>& tracked, const std::vector<Cplx>& ref,
                     mpfr_prec_t prec) {
    const int n = static_cast<int>(tracked.size());
    if (static_cast<int>(ref.size()) != n) throw InternalError("fiber size mismatch");
    Real sep = min_pairwise_gap(ref, prec) / 3;
    Perm p(n, -1);
    std::vector<char> used(n, 0);
    for (int i = 0; i < n; ++i) {
        int best = -1;
        Real bd(prec);
        for (int j = 0; j < n; ++j) {
            Real d = abs(tracked[i] - ref[j]);
            if (best < 0 || d < bd) {
                best = j;
                bd = d;
            }
        }
        if (best < 0 || !(bd < sep) || used[best])
            throw MonodromyError("sheet matching at an edge endpoint is ambiguous");
        used[best] = 1;
        p[i] = best;
    }
    return p;
}

const SkelEdge& edge_of(const VoronoiSkeleton& sk, int u, int v) {
    int idx = sk.edge_index(u, v);
    if (idx < 0) throw InternalError("vertex walk leaves the skeleton");
    return sk.edges[idx];
}

}  // namespace

std::vector<Cplx> sorted_fiber(const EmbeddedCurve& ec, const Cplx& x,
                               const PrecisionContext& ctx) {
    ComplexPoly py;
    ec.fiber(x, py);
    std::vector<Cplx> f = roots(py, ctx);
    canonical_sort(f, ctx.working_bits);
    return f;
}

EdgeLifter::EdgeLifter(const PlaneCurve& curve, const VoronoiSkeleton& sk,
                       const PrecisionContext& ctx)
    : sk_(sk), ctx_(ctx), ec_(curve, ctx.prec()) {
    if (curve.degy() < 1) throw InternalError("curve has no sheets");
}

const std::vector<Cplx>& EdgeLifter::vertex_fiber(int v) {
    auto it = fiber_cache_.find(v);
    if (it != fiber_cache_.end()) return it->second;
    auto f = sorted_fiber(ec_, vertex_x(v), ctx_);
    return fiber_cache_.emplace(v, std::move(f)).first->second;
}

// Certified continuation along the segment x0 -> x1.  The fiber advances by
// Newton refinement at each step; every sheet must converge inside the disk
// of radius (min pairwise gap)/3 around its start, which keeps the sheet
// bijection honest.  Failures bisect the step.
std::vector<std::vector<Cplx>> EdgeLifter::walk_fibers(const Cplx& x0, const Cplx& x1,
                                                       std::vector<Cplx> fiber, double clearance,
                                                       const std::vector<Real>& stops) const {
    const int n = static_cast<int>(fiber.size());
    const mpfr_prec_t prec = ctx_.prec();
    const Cplx dx = x1 - x0;
    const double len = abs(dx).to_double();
    if (!(len > 0)) throw InternalError("continuation along a zero-length edge");
    if (!(clearance > 0)) throw InternalError("edge has no clearance");

    double delta = std::min(0.25, clearance / len);
    const double delta0 = delta;
    int streak = 0;
    double t = 0.0;
    std::vector<Cplx> next(n);
    ComplexPoly py;
    std::vector<std::vector<Cplx>> out;
    out.reserve(stops.size());

    for (const Real& s : stops) {
        const double sd = s.to_double();
        bool landed = false;
        while (!landed) {
            // The last step lands on the stop value exactly, not its double
            // rounding, so quadrature nodes see the true parameter.
            const bool last = (delta >= sd - t);
            const Real tn = last ? s : Real(t + delta, prec);
            Cplx xt = x0 + dx * tn;
            ec_.fiber(xt, py);
            Real eps = min_pairwise_gap(fiber, prec) / 3;
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                ok = newton_refine_core(py, fiber[i], eps, prec, next[i]) == NewtonStatus::ok;
            if (ok) {
                fiber.swap(next);
                if (last) {
                    landed = true;
                    t = sd;
                } else {
                    t += delta;
                }
                if (++streak >= 3) {
                    delta = std::min(delta * 1.5, std::max(delta0, 0.25));
                    streak = 0;
                }
            } else {
                delta *= 0.5;
                streak = 0;
                if (delta < 1e-12)
                    throw ContinuationStuck("continuation step underflow near t=" +
                                            std::to_string(t) + " on an edge");
            }
        }
        out.push_back(fiber);
    }
    return out;
}

const Perm& EdgeLifter::edge_perm(int u, int v) {
    auto it = perm_cache_.find({u, v});
    if (it != perm_cache_.end()) return it->second;
    const SkelEdge& e = edge_of(sk_, u, v);
    auto end_fibers = walk_fibers(vertex_x(u), vertex_x(v), vertex_fiber(u), e.clearance,
                                  {Real(1, ctx_.prec())});
    Perm p = match_to_sorted(end_fibers[0], vertex_fiber(v), ctx_.prec());
    perm_cache_[{v, u}] = perm_inverse(p);
    return perm_cache_.emplace(std::make_pair(u, v), std::move(p)).first->second;
}

std::vector<std::vector<Cplx>> EdgeLifter::edge_values(int u, int v,
                                                       const std::vector<Real>& ts) {
    const SkelEdge& e = edge_of(sk_, u, v);
    return walk_fibers(vertex_x(u), vertex_x(v), vertex_fiber(u), e.clearance, ts);
}

std::vector<std::vector<Cplx>> EdgeLifter::edge_values(int u, int v,
                                                       const std::vector<double>& ts) {
    std::vector<Real> rs;
    rs.reserve(ts.size());
    for (double t : ts) rs.emplace_back(t, ctx_.prec());
    return edge_values(u, v, rs);
}

Perm EdgeLifter::walk_perm(const std::vector<int>& walk) {
    if (walk.empty()) throw InternalError("empty vertex walk");
    Perm p = perm_identity(degree());
    for (size_t i = 0; i + 1 < walk.size(); ++i) p = perm_compose(p, edge_perm(walk[i], walk[i + 1]));
    return p;
}

void EdgeLifter::prepare(int threads) {
    std::vector<int> want_v;
    for (int v = 0; v < static_cast<int>(sk_.vertices.size()); ++v)
        if (!fiber_cache_.count(v)) want_v.push_back(v);
    std::vector<std::vector<Cplx>> fibers(want_v.size());
    parallel_for(static_cast<long>(want_v.size()), threads,
                 [&](long k) { fibers[k] = sorted_fiber(ec_, vertex_x(want_v[k]), ctx_); });
    for (size_t k = 0; k < want_v.size(); ++k)
        fiber_cache_.emplace(want_v[k], std::move(fibers[k]));

    std::vector<const SkelEdge*> want_e;
    for (const SkelEdge& e : sk_.edges)
        if (!perm_cache_.count({e.u, e.v})) want_e.push_back(&e);
    std::vector<Perm> perms(want_e.size());
    parallel_for(static_cast<long>(want_e.size()), threads, [&](long k) {
        const SkelEdge& e = *want_e[k];
        auto fe = walk_fibers(vertex_x(e.u), vertex_x(e.v), fiber_cache_.at(e.u), e.clearance,
                              {Real(1, ctx_.prec())});
        perms[k] = match_to_sorted(fe[0], fiber_cache_.at(e.v), ctx_.prec());
    });
    for (size_t k = 0; k < want_e.size(); ++k) {
        const SkelEdge& e = *want_e[k];
        perm_cache_[{e.v, e.u}] = perm_inverse(perms[k]);
        perm_cache_.emplace(std::make_pair(e.u, e.v), std::move(perms[k]));
    }
}

MonodromyRep monodromy_rep(EdgeLifter& lift) {
    const VoronoiSkeleton& sk = lift.skeleton();
    const int n = lift.degree();
    MonodromyRep rep;
    rep.degree = n;
    rep.sigma.reserve(sk.finite_sites);
    for (int k = 0; k < sk.finite_sites; ++k) rep.sigma.push_back(lift.walk_perm(sk.loop_path(k)));
    rep.sigma_inf = lift.walk_perm(sk.inf_loop_path());

    // Transitivity under all generators; a failure means the affine curve is
    // reducible and the sheet count per component is ambiguous.
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        auto visit = [&](const Perm& p) {
            if (!seen[p[s]]) {
                seen[p[s]] = 1;
                ++reached;
                stack.push_back(p[s]);
            }
        };
        for (const Perm& p : rep.sigma) visit(p);
        visit(rep.sigma_inf);
    }
    if (reached != n)
        throw NotIrreducible("monodromy is not transitive; the curve is reducible");

    // Finite generators ordered by angle about the site centroid.
    double cx = 0, cy = 0;
    for (int k = 0; k < sk.finite_sites; ++k) {
        cx += sk.sites[k].x.get_d();
        cy += sk.sites[k].y.get_d();
    }
    cx /= sk.finite_sites;
    cy /= sk.finite_sites;
    rep.angular_order.resize(sk.finite_sites);
    std::vector<double> ang(sk.finite_sites);
    for (int k = 0; k < sk.finite_sites; ++k) {
        rep.angular_order[k] = k;
        ang[k] = std::atan2(sk.sites[k].y.get_d() - cy, sk.sites[k].x.get_d() - cx);
    }
    std::sort(rep.angular_order.begin(), rep.angular_order.end(), [&](int a, int b) {
        if (ang[a] != ang[b]) return ang[a] < ang[b];
        return a < b;
    });

    Perm prod = perm_identity(n);
    for (int k : rep.angular_order) prod = perm_compose(prod, rep.sigma[k]);
    if (perm_is_identity(perm_compose(prod, rep.sigma_inf)))
        rep.product = MonodromyRep::Product::ok;
    else if (perm_is_identity(perm_compose(prod, perm_inverse(rep.sigma_inf))))
        rep.product = MonodromyRep::Product::ok_after_inversion;
    else
        rep.product = MonodromyRep::Product::failed;

    long branch_total = 0;
    for (const Perm& p : rep.sigma) branch_total += n - perm_cycle_count(p);
    branch_total += n - perm_cycle_count(rep.sigma_inf);
    if (branch_total % 2 != 0)
        throw MonodromyError("total branching is odd; monodromy data is inconsistent");
    long genus2 = branch_total / 2 + 1 - n;
    if (genus2 < 0) throw MonodromyError("negative genus from branch data");
    rep.genus = static_cast<int>(genus2);
    return rep;
}

}  // namespace periodica
