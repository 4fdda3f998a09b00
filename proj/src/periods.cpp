#include "periodica/periods.hpp"

#include <map>
#include <utility>
#include <vector>

#include "periodica/error.hpp"
#include "periodica/legendre.hpp"
#include "periodica/parallel.hpp"

namespace periodica {

CMat edge_periods(EdgeLifter& lift, const EmbeddedDifferentials& eh, int u, int v) {
    const mpfr_prec_t prec = lift.ctx().prec();
    const int g = eh.count();
    const int n = lift.degree();
    const Cplx scale = lift.vertex_x(v) - lift.vertex_x(u);
    const Real target = Real::pow2(lift.ctx().tol_exp2(), prec);

    CMat prev;
    Real prev_err;
    bool have_prev = false, have_err = false;
    for (int order = 32; order <= (1 << 14); order *= 2) {
        auto rule = legendre_rule(order, prec);
        std::vector<Real> ts;
        ts.reserve(rule->nodes.size());
        for (const Real& z : rule->nodes) ts.push_back((z + 1) / 2);
        auto vals = integrand_on_edge(lift, eh, u, v, ts);

        CMat est(g, n, prec);
        for (size_t k = 0; k < ts.size(); ++k)
            for (int s = 0; s < n; ++s)
                for (int i = 0; i < g; ++i) est.at(i, s) += rule->weights[k] * vals[k][s][i];
        for (Cplx& e : est.a) e = e * scale / 2;

        if (have_prev) {
            Real err = max_abs(est - prev);
            if (err < target) return est;
            // Estimates must keep improving while above tolerance; a plateau
            // means the integrand is rougher than the working precision.
            if (have_err && !(err < prev_err))
                throw OrderCapExceeded("quadrature estimates stopped improving at order " +
                                       std::to_string(order));
            prev_err = err;
            have_err = true;
        }
        prev = std::move(est);
        have_prev = true;
    }
    throw OrderCapExceeded("quadrature order cap reached; raise the working precision");
}

namespace {

struct TauCheck {
    CMat tau;
    Real symmetry_defect;
    Real min_imag_eigenvalue;
    Real max_imag_eigenvalue;
};

TauCheck tau_of(const CMat& omega, int genus, mpfr_prec_t prec) {
    TauCheck tc;
    const long g = genus;
    CMat oa(g, g, prec), ob(g, g, prec);
    for (long i = 0; i < g; ++i)
        for (long j = 0; j < g; ++j) {
            oa.at(i, j) = omega.at(i, j);
            ob.at(i, j) = omega.at(i, g + j);
        }
    try {
        tc.tau = lu_solve(oa, ob);
    } catch (const InternalError&) {
        throw SingularAlphaBlock("alpha block of the period matrix is singular");
    }
    tc.symmetry_defect = Real(0.0, prec);
    for (long i = 0; i < g; ++i)
        for (long j = i + 1; j < g; ++j)
            tc.symmetry_defect = max(tc.symmetry_defect, abs(tc.tau.at(i, j) - tc.tau.at(j, i)));
    std::vector<std::vector<Real>> im(static_cast<size_t>(g));
    for (long i = 0; i < g; ++i) {
        im[i].assign(static_cast<size_t>(g), Real(0.0, prec));
        for (long j = 0; j <= i; ++j) im[i][j] = (tc.tau.at(i, j).im + tc.tau.at(j, i).im) / 2;
    }
    auto ev = symmetric_eigenvalues(std::move(im), prec);
    tc.min_imag_eigenvalue = ev.empty() ? Real(1, prec) : ev.front();
    tc.max_imag_eigenvalue = ev.empty() ? Real(1, prec) : ev.back();
    return tc;
}

}  // namespace

PeriodMatrix period_matrix(EdgeLifter& lift, const EmbeddedDifferentials& eh,
                           const SymplecticBasis& sym, int threads) {
    const mpfr_prec_t prec = lift.ctx().prec();
    const int g = sym.genus;
    const int sheets = lift.degree();
    if (eh.count() != g)
        throw InternalError("differential count does not match the symplectic genus");

    // Every lifted edge integral is a column of one base-edge computation.
    std::map<std::pair<int, int>, long> base_slot;
    auto note = [&](const Chain& c) {
        for (const auto& kv : c.mult) {
            int bu = kv.first.first / sheets, bv = kv.first.second / sheets;
            base_slot.emplace(std::make_pair(bu, bv), 0);
        }
    };
    for (const Chain& c : sym.alpha) note(c);
    for (const Chain& c : sym.beta) note(c);

    std::vector<std::pair<int, int>> jobs;
    jobs.reserve(base_slot.size());
    for (auto& kv : base_slot) {
        kv.second = static_cast<long>(jobs.size());
        jobs.push_back(kv.first);
    }

    lift.prepare(threads);  // fiber cache must be complete before sharing `lift`
    std::vector<CMat> per_edge(jobs.size());
    parallel_for(static_cast<long>(jobs.size()), threads,
                 [&](long k) { per_edge[k] = edge_periods(lift, eh, jobs[k].first, jobs[k].second); });

    PeriodMatrix P;
    P.genus = g;
    P.precision_bits = lift.ctx().working_bits;
    P.omega = CMat(g, 2L * g, prec);
    auto add_chain = [&](const Chain& c, long col) {
        for (const auto& kv : c.mult) {
            int bu = kv.first.first / sheets, bv = kv.first.second / sheets;
            int sheet = kv.first.first % sheets;
            const CMat& pe = per_edge[static_cast<size_t>(base_slot.at({bu, bv}))];
            for (int i = 0; i < g; ++i) P.omega.at(i, col) += pe.at(i, sheet) * kv.second;
        }
    };
    for (int j = 0; j < g; ++j) add_chain(sym.alpha[static_cast<size_t>(j)], j);
    for (int j = 0; j < g; ++j) add_chain(sym.beta[static_cast<size_t>(j)], g + j);

    if (g == 0) return P;

    TauCheck tc = tau_of(P.omega, g, prec);
    const Real sym_tol = Real::pow2(-lift.ctx().working_bits / 2, prec);
    if (!(tc.symmetry_defect < sym_tol))
        throw RiemannCheckFailed("tau symmetry defect " + tc.symmetry_defect.str(8) +
                                 " exceeds tolerance");
    if (tc.min_imag_eigenvalue > 0) return P;
    if (tc.max_imag_eigenvalue < 0) {
        // Reversed intersection orientation: flip the beta block.
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) P.omega.at(i, g + j) = -P.omega.at(i, g + j);
        P.beta_negated = true;
        return P;
    }
    throw RiemannCheckFailed("imaginary part of tau is indefinite");
}

RiemannMatrix riemann_matrix(const PeriodMatrix& P) {
    const mpfr_prec_t prec =
        P.omega.a.empty() ? 53 : P.omega.at(0, 0).prec();
    TauCheck tc = tau_of(P.omega, P.genus, prec);
    return RiemannMatrix{std::move(tc.tau), std::move(tc.symmetry_defect),
                         std::move(tc.min_imag_eigenvalue)};
}

}  // namespace periodica
