#include "periodica/differentials.hpp"

#include <utility>

#include "periodica/error.hpp"

namespace periodica {

namespace {

// Rank over the base field by exact Gaussian elimination; rows are numerator
// coefficient vectors on a common monomial grid.
long rank_k(const NumberField& K, const std::vector<std::vector<KPoly>>& nums) {
    size_t ydim = 0, xdim = 0;
    for (const auto& h : nums) {
        ydim = std::max(ydim, h.size());
        for (const auto& cx : h) xdim = std::max(xdim, cx.size());
    }
    std::vector<std::vector<KElem>> rows(nums.size(),
                                         std::vector<KElem>(ydim * xdim, K.zero()));
    for (size_t r = 0; r < nums.size(); ++r)
        for (size_t j = 0; j < nums[r].size(); ++j)
            for (size_t i = 0; i < nums[r][j].size(); ++i) rows[r][j * xdim + i] = nums[r][j][i];

    size_t rank = 0;
    for (size_t c = 0; c < ydim * xdim && rank < rows.size(); ++c) {
        size_t p = rank;
        while (p < rows.size() && K.is_zero(rows[p][c])) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        KElem inv = K.inv(rows[rank][c]);
        for (size_t r = rank + 1; r < rows.size(); ++r) {
            if (K.is_zero(rows[r][c])) continue;
            KElem f = K.mul(rows[r][c], inv);
            for (size_t j = c; j < ydim * xdim; ++j)
                rows[r][j] = K.sub(rows[r][j], K.mul(f, rows[rank][j]));
        }
        ++rank;
    }
    return static_cast<long>(rank);
}

}  // namespace

DifferentialBasis differential_basis(const PlaneCurve& curve,
                                     const std::vector<std::string>& user_numerators) {
    DifferentialBasis basis;
    basis.field = curve.field;
    if (user_numerators.empty()) {
        basis.numerators = baker_numerators(curve);
        basis.source = DifferentialBasis::Source::baker;
        return basis;
    }
    basis.source = DifferentialBasis::Source::user;
    for (const std::string& text : user_numerators)
        basis.numerators.push_back(parse_bivariate(text, curve.field));
    long rank = rank_k(*curve.field, basis.numerators);
    if (rank != basis.count())
        throw DependentNumerators("numerator list has rank " + std::to_string(rank) + " < " +
                                  std::to_string(basis.count()));
    return basis;
}

EmbeddedDifferentials::EmbeddedDifferentials(const DifferentialBasis& basis, mpfr_prec_t prec)
    : prec(prec) {
    const NumberField& K = *basis.field;
    hs.reserve(basis.numerators.size());
    for (const auto& h : basis.numerators) {
        std::vector<ComplexPoly> e;
        e.reserve(h.size());
        for (const KPoly& cx : h) e.push_back(kpoly_embed(K, cx, prec));
        hs.push_back(std::move(e));
    }
}

Cplx EmbeddedDifferentials::eval(int i, const Cplx& x, const Cplx& y) const {
    const auto& h = hs[static_cast<size_t>(i)];
    if (h.empty()) return Cplx(prec);
    Cplx acc = h.back().eval(x);
    for (size_t j = h.size(); j-- > 1;) acc = acc * y + h[j - 1].eval(x);
    return acc;
}

std::vector<std::vector<std::vector<Cplx>>> integrand_on_edge(EdgeLifter& lift,
                                                              const EmbeddedDifferentials& eh,
                                                              int u, int v,
                                                              const std::vector<Real>& ts) {
    const mpfr_prec_t prec = lift.ctx().prec();
    const Real floor = Real::pow2(-lift.ctx().working_bits / 2, prec);
    const Cplx xu = lift.vertex_x(u);
    const Cplx dx = lift.vertex_x(v) - xu;
    auto fibers = lift.edge_values(u, v, ts);

    std::vector<std::vector<std::vector<Cplx>>> out(ts.size());
    for (size_t k = 0; k < ts.size(); ++k) {
        Cplx xt = xu + dx * ts[k];
        out[k].resize(fibers[k].size());
        for (size_t s = 0; s < fibers[k].size(); ++s) {
            const Cplx& y = fibers[k][s];
            Cplx fy = lift.embedded().eval_fy(xt, y);
            if (abs(fy) < floor) throw SmallDenominator("df/dy collapsed on a lifted edge");
            out[k][s].reserve(static_cast<size_t>(eh.count()));
            for (int i = 0; i < eh.count(); ++i) out[k][s].push_back(eh.eval(i, xt, y) / fy);
        }
    }
    return out;
}

}  // namespace periodica
