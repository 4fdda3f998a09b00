#include "periodica/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "periodica/error.hpp"

namespace periodica {

Cplx ComplexPoly::eval(const Cplx& z) const {
    mpfr_prec_t p = z.prec();
    Cplx acc(p), t(p);
    Real scratch(p);
    if (coeff.empty()) return acc;
    acc = coeff.back();
    for (int i = static_cast<int>(coeff.size()) - 2; i >= 0; --i) {
        Cplx::mul(t, acc, z, scratch);
        Cplx::add(acc, t, coeff[static_cast<size_t>(i)]);
    }
    return acc;
}

void ComplexPoly::eval2(const Cplx& z, Cplx& p, Cplx& dp) const {
    mpfr_prec_t pr = z.prec();
    p = Cplx(pr);
    dp = Cplx(pr);
    if (coeff.empty()) return;
    Cplx t(pr);
    Real scratch(pr);
    p = coeff.back();
    for (int i = static_cast<int>(coeff.size()) - 2; i >= 0; --i) {
        Cplx::mul(t, dp, z, scratch);
        Cplx::add(dp, t, p);
        Cplx::mul(t, p, z, scratch);
        Cplx::add(p, t, coeff[static_cast<size_t>(i)]);
    }
}

ComplexPoly ComplexPoly::derivative() const {
    ComplexPoly d;
    if (coeff.size() <= 1) return d;
    d.coeff.reserve(coeff.size() - 1);
    for (size_t i = 1; i < coeff.size(); ++i) d.coeff.push_back(coeff[i] * static_cast<long>(i));
    return d;
}

namespace {

// log2 |coeff| as a double, -inf for zero.
double coeff_log2(const Cplx& c) {
    if (c.is_zero()) return -1e300;
    Real a = abs1(c);
    long e = a.exp2();
    // mantissa in [0.5, 1): refine with a double conversion of the scaled value.
    Real m = a / Real::pow2(e, a.prec());
    return static_cast<double>(e) + std::log2(m.to_double());
}

// Starting points on circles read off the upper convex hull of
// (i, log2|a_i|); this mirrors the usual simultaneous-iteration seeding and
// copes with widely spread root magnitudes.
std::vector<Cplx> initial_points(const ComplexPoly& p, mpfr_prec_t prec) {
    int n = p.degree();
    std::vector<double> ln(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) ln[static_cast<size_t>(i)] = coeff_log2(p.coeff[static_cast<size_t>(i)]);
    // Upper hull over indices with finite log.
    std::vector<int> hull;
    for (int i = 0; i <= n; ++i) {
        if (ln[static_cast<size_t>(i)] < -1e299) continue;
        while (hull.size() >= 2) {
            int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            double cross = (ln[static_cast<size_t>(b)] - ln[static_cast<size_t>(a)]) * (i - a) -
                           (ln[static_cast<size_t>(i)] - ln[static_cast<size_t>(a)]) * (b - a);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    std::vector<Cplx> z;
    z.reserve(static_cast<size_t>(n));
    Real two_pi = Real::pi(prec) * 2;
    int placed = 0;
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        int i1 = hull[s], i2 = hull[s + 1];
        double lr = (ln[static_cast<size_t>(i1)] - ln[static_cast<size_t>(i2)]) / (i2 - i1);
        // Clamp to dodge overflow when a coefficient is extreme.
        lr = std::min(std::max(lr, -1e6), 1e6);
        int m = i2 - i1;
        for (int k = 0; k < m; ++k) {
            Real ang = two_pi * Real(static_cast<double>(k) / m + 0.3711 + 0.1391 * placed, prec);
            Cplx dir = unit_circle(ang);
            Real r(prec);
            mpfr_set_d(r.get(), lr, MPFR_RNDN);
            mpfr_exp2(r.get(), r.get(), MPFR_RNDN);
            z.push_back(dir * r);
            ++placed;
        }
    }
    while (static_cast<int>(z.size()) < n) {
        Real ang = two_pi * Real(0.17 + 0.61 * static_cast<double>(z.size()), prec);
        z.push_back(unit_circle(ang));
    }
    return z;
}

// Evaluation-scale norm sum_i |a_i| max(1,|r|)^i at radius |r|.
Real eval_norm(const ComplexPoly& p, const Real& rabs) {
    mpfr_prec_t pr = rabs.prec();
    Real one(1, pr);
    Real scale = max(one, rabs);
    Real acc(pr), pw(1, pr);
    for (const Cplx& c : p.coeff) {
        acc += abs1(c) * pw;
        pw *= scale;
    }
    return acc;
}

}  // namespace

std::vector<Cplx> roots(const ComplexPoly& p, const PrecisionContext& ctx) {
    mpfr_prec_t prec = ctx.prec();
    int n = p.degree();
    if (n < 1) throw InternalError("roots: polynomial must have degree >= 1");
    if (p.coeff.back().is_zero()) throw InternalError("roots: leading coefficient is zero");
    if (n == 1) {
        std::vector<Cplx> r;
        r.push_back(-(p.coeff[0] / p.coeff[1]));
        return r;
    }

    std::vector<Cplx> z = initial_points(p, prec);
    std::vector<bool> done(static_cast<size_t>(n), false);
    Cplx pv(prec), dv(prec), w(prec), s(prec), d(prec), corr(prec), t(prec);
    Real scratch(prec), tiny = Real::pow2(-prec + 8, prec), one(1, prec);

    double best_log = 1e300;
    int stall = 0;
    bool converged = false;
    for (int sweep = 0; sweep < 200 && !converged; ++sweep) {
        Real worst(prec);
        for (int k = 0; k < n; ++k) {
            size_t ku = static_cast<size_t>(k);
            if (done[ku]) continue;
            p.eval2(z[ku], pv, dv);
            if (pv.is_zero()) {
                done[ku] = true;
                continue;
            }
            if (dv.is_zero()) {
                // Nudge off the stationary point.
                z[ku].re += tiny;
                continue;
            }
            w = pv / dv;
            s = Cplx(prec);
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                Cplx::sub(d, z[ku], z[static_cast<size_t>(j)]);
                if (d.is_zero()) {
                    d.re = tiny;
                }
                s += Cplx(one, Real(prec)) / d;
            }
            Cplx::mul(t, w, s, scratch);
            t = Cplx(one, Real(prec)) - t;
            if (t.is_zero())
                corr = w;
            else
                corr = w / t;
            Cplx::sub(z[ku], z[ku], corr);
            Real rel = abs1(corr) / max(one, abs1(z[ku]));
            if (rel > worst) worst = rel;
            if (rel < tiny) done[ku] = true;
        }
        if (worst < tiny) {
            converged = true;
            break;
        }
        // Track progress by exponent; to_double underflows for tiny values.
        double wl = static_cast<double>(worst.exp2());
        if (wl < best_log - 1) {
            best_log = wl;
            stall = 0;
        } else if (++stall > 12) {
            break;  // multiple-root cluster; residual check below decides
        }
    }

    // Residual verification against the evaluation-scale norm.
    Real bound_scale = Real::pow2(ctx.tol_exp2(), prec);
    for (int k = 0; k < n; ++k) {
        Cplx val = p.eval(z[static_cast<size_t>(k)]);
        Real nr = eval_norm(p, abs1(z[static_cast<size_t>(k)]));
        if (!(abs1(val) < nr * bound_scale))
            throw NonConvergence("root finder residual exceeds tolerance at index " + std::to_string(k));
    }

    std::sort(z.begin(), z.end(), [](const Cplx& a, const Cplx& b) {
        if (a.re < b.re) return true;
        if (a.re > b.re) return false;
        return a.im < b.im;
    });
    return z;
}

NewtonStatus newton_refine_core(const ComplexPoly& p, const Cplx& start, const Real& radius,
                                mpfr_prec_t prec, Cplx& out, int iter_cap) {
    Cplx z = start, pv(prec), dv(prec), step(prec), delta(prec);
    Real tol = Real::pow2(-prec + 6, prec), one(1, prec);
    for (int it = 0; it < iter_cap; ++it) {
        p.eval2(z, pv, dv);
        if (pv.is_zero()) {
            out = z;
            return NewtonStatus::ok;
        }
        if (dv.is_zero()) return NewtonStatus::slow;
        step = pv / dv;
        Cplx::sub(z, z, step);
        Cplx::sub(delta, z, start);
        if (abs(delta) > radius) return NewtonStatus::disk_escape;
        if (abs1(step) < tol * max(one, abs1(z))) {
            out = z;
            return NewtonStatus::ok;
        }
    }
    return NewtonStatus::slow;
}

Cplx newton_refine(const ComplexPoly& p, const Cplx& start, const Real& radius,
                   const PrecisionContext& ctx) {
    Cplx out(ctx.prec());
    NewtonStatus st = newton_refine_core(p, start, radius, ctx.prec(), out);
    if (st == NewtonStatus::disk_escape) throw DiskEscape("newton_refine left the trust disk");
    if (st == NewtonStatus::slow) throw SlowConvergence("newton_refine failed to contract");
    return out;
}

}  // namespace periodica
