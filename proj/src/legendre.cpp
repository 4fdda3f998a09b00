#include "periodica/legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "periodica/error.hpp"

namespace periodica {

namespace {

// P_n and P_n' at x via the three-term recurrence.
void legendre_eval(int n, const Real& x, Real& pn, Real& dpn, Real& pm, Real& t) {
    mpfr_prec_t prec = x.prec();
    pm = Real(1, prec);  // P_0
    pn = x;              // P_1
    for (int k = 1; k < n; ++k) {
        // P_{k+1} = ((2k+1) x P_k - k P_{k-1}) / (k+1)
        Real::mul(t, x, pn);
        t *= 2 * k + 1;
        Real::sub(t, t, pm * static_cast<long>(k));
        pm = pn;
        pn = t / static_cast<long>(k + 1);
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    Real::mul(t, x, pn);
    Real::sub(t, t, pm);
    t *= static_cast<long>(n);
    Real x2 = x * x;
    x2 -= 1;
    Real::div(dpn, t, x2);
}

std::mutex cache_mutex;
std::map<std::pair<int, mpfr_prec_t>, std::shared_ptr<const LegendreRule>> cache;

}  // namespace

std::shared_ptr<const LegendreRule> legendre_rule(int order, mpfr_prec_t prec) {
    if (order < 1) throw InternalError("legendre_rule: order must be positive");
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({order, prec});
        if (it != cache.end()) return it->second;
    }

    auto rule = std::make_shared<LegendreRule>();
    rule->order = order;
    rule->nodes.assign(static_cast<size_t>(order), Real(prec));
    rule->weights.assign(static_cast<size_t>(order), Real(prec));

    Real pn(prec), dpn(prec), pm(prec), t(prec), x(prec), step(prec);
    Real tol = Real::pow2(-prec + 4, prec);
    int half = order / 2;
    double n = order;
    for (int k = 0; k < half; ++k) {
        // Tricomi-style initial guess for the k-th positive-side node.
        double theta = M_PI * (k + 0.75) / (n + 0.5);
        double x0 = std::cos(theta) * (1.0 - (n - 1.0) / (8.0 * n * n * n));
        mpfr_set_d(x.get(), x0, MPFR_RNDN);
        bool ok = false;
        for (int it = 0; it < 80; ++it) {
            legendre_eval(order, x, pn, dpn, pm, t);
            Real::div(step, pn, dpn);
            x -= step;
            if (abs(step) < tol) {
                ok = true;
                break;
            }
        }
        if (!ok) throw NonConvergence("legendre node iteration failed");
        legendre_eval(order, x, pn, dpn, pm, t);
        // w = 2 / ((1 - x^2) P_n'(x)^2)
        Real w = dpn * dpn;
        w *= (Real(1, prec) - x * x);
        w = Real(2, prec) / w;
        rule->nodes[static_cast<size_t>(k)] = -x;  // guesses descend from +1
        rule->nodes[static_cast<size_t>(order - 1 - k)] = x;
        rule->weights[static_cast<size_t>(k)] = w;
        rule->weights[static_cast<size_t>(order - 1 - k)] = w;
    }
    if (order % 2 == 1) {
        Real zero(prec);
        legendre_eval(order, zero, pn, dpn, pm, t);
        Real w = dpn * dpn;
        w = Real(2, prec) / w;
        rule->nodes[static_cast<size_t>(half)] = zero;
        rule->weights[static_cast<size_t>(half)] = w;
    }

    std::lock_guard<std::mutex> lock(cache_mutex);
    auto [it, inserted] = cache.try_emplace({order, prec}, rule);
    return it->second;
}

}  // namespace periodica
