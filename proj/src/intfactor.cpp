#include "periodica/intfactor.hpp"

#include <algorithm>

#include "periodica/error.hpp"
#include "periodica/numerics.hpp"
#include "periodica/util.hpp"

namespace periodica {

namespace {

// Factor a squarefree primitive integer polynomial into irreducible monic
// rational factors via numeric roots and subset recombination.
std::vector<QPoly> factor_squarefree(std::vector<mpz_class> pz) {
    std::vector<QPoly> out;
    int deg = static_cast<int>(pz.size()) - 1;
    if (deg <= 0) return out;
    if (deg == 1) {
        QPoly f;
        f.c = {mpq_class(pz[0]) / mpq_class(pz[1]), mpq_class(1)};
        out.push_back(f);
        return out;
    }

    // Precision: candidate factor coefficients are bounded via Mignotte by
    // 2^deg * |pz|_2; add headroom for the rounding test.
    size_t max_bits = 0;
    for (const auto& c : pz) max_bits = std::max(max_bits, mpz_sizeinbase(c.get_mpz_t(), 2));
    long bits = static_cast<long>(max_bits) + 2 * deg + 64;
    PrecisionContext ctx(std::max(53l, bits), 20);
    mpfr_prec_t prec = ctx.prec();

    ComplexPoly cp;
    for (const auto& c : pz) cp.coeff.push_back(Cplx(to_real(mpq_class(c), prec), Real(prec)));
    std::vector<Cplx> rs = roots(cp, ctx);
    std::vector<bool> used(rs.size(), false);

    auto try_subset = [&](const std::vector<int>& idx) -> bool {
        // Build lc * prod (x - r_i) and round to integers.
        std::vector<Cplx> coef;
        coef.push_back(Cplx(to_real(mpq_class(pz.back()), prec), Real(prec)));
        for (int i : idx) {
            std::vector<Cplx> next(coef.size() + 1, Cplx(prec));
            for (size_t k = 0; k < coef.size(); ++k) {
                next[k + 1] += coef[k];
                next[k] -= coef[k] * rs[static_cast<size_t>(i)];
            }
            coef = next;
        }
        Real quarter(0.25, prec);
        std::vector<mpz_class> zc(coef.size());
        for (size_t k = 0; k < coef.size(); ++k) {
            if (abs(coef[k].im) > quarter) return false;
            zc[k] = to_mpz_nearest(coef[k].re);
            if (abs(coef[k].re - to_real(mpq_class(zc[k]), prec)) > quarter) return false;
        }
        // Exact verification.
        QPoly cand, p, q, r;
        for (const auto& c : zc) cand.c.push_back(mpq_class(c));
        cand.trim();
        if (cand.degree() != static_cast<int>(idx.size())) return false;
        for (const auto& c : pz) p.c.push_back(mpq_class(c));
        p.trim();
        divmod(p, cand, q, r);
        if (!r.is_zero()) return false;
        out.push_back(cand * (1 / cand.lead()));
        // Replace pz by the cofactor (integral by Gauss' lemma).
        pz = primitive_z(q);
        for (int i : idx) used[static_cast<size_t>(i)] = true;
        return true;
    };

    int remaining = deg;
    for (int size = 1; size <= remaining / 2; ++size) {
        // Enumerate subsets of the unused roots of the given size.
        std::vector<int> avail;
        for (size_t i = 0; i < rs.size(); ++i)
            if (!used[i]) avail.push_back(static_cast<int>(i));
        int n = static_cast<int>(avail.size());
        if (size > n) break;
        std::vector<int> pick(static_cast<size_t>(size));
        for (int i = 0; i < size; ++i) pick[static_cast<size_t>(i)] = i;
        bool restart = false;
        while (!restart) {
            std::vector<int> idx;
            for (int i : pick) idx.push_back(avail[static_cast<size_t>(i)]);
            if (try_subset(idx)) {
                remaining -= size;
                restart = true;  // re-enumerate with the reduced root set
                --size;          // revisit the same size
                break;
            }
            int pos = size - 1;
            while (pos >= 0 && pick[static_cast<size_t>(pos)] == n - size + pos) --pos;
            if (pos < 0) break;
            ++pick[static_cast<size_t>(pos)];
            for (int i = pos + 1; i < size; ++i)
                pick[static_cast<size_t>(i)] = pick[static_cast<size_t>(i - 1)] + 1;
        }
    }
    if (remaining > 0) {
        QPoly rest;
        for (const auto& c : pz) rest.c.push_back(mpq_class(c));
        rest.trim();
        if (rest.degree() != remaining) throw InternalError("factor bookkeeping out of sync");
        out.push_back(rest * (1 / rest.lead()));
    }
    return out;
}

}  // namespace

std::vector<QFactor> factor_q(const QPoly& p) {
    if (p.degree() < 1) return {};
    // Squarefree decomposition by repeated gcd with the derivative.
    std::vector<QFactor> out;
    QPoly work = p * (1 / p.lead());
    int mult_base = 0;
    while (work.degree() > 0) {
        QPoly g = gcd(work, work.derivative());
        QPoly sqf, r;
        divmod(work, g, sqf, r);
        if (!r.is_zero()) throw InternalError("factor_q: inexact squarefree split");
        // sqf carries each distinct factor of `work` once.
        for (const QPoly& f : factor_squarefree(primitive_z(sqf))) {
            out.push_back({f, mult_base + 1});
        }
        work = g;
        ++mult_base;
    }
    // Merge duplicates: a factor of multiplicity m appears in m rounds.
    std::vector<QFactor> merged;
    for (const auto& f : out) {
        bool found = false;
        for (auto& m : merged)
            if (m.poly == f.poly) {
                m.multiplicity = std::max(m.multiplicity, f.multiplicity);
                found = true;
            }
        if (!found) merged.push_back(f);
    }
    return merged;
}

}  // namespace periodica
