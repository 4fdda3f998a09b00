#include "periodica/curve.hpp"

#include <algorithm>

#include "periodica/error.hpp"

namespace periodica {

int PlaneCurve::degx() const {
    int d = -1;
    for (const KPoly& p : ycoeff) d = std::max(d, kpoly_degree(*field, p));
    return d;
}

bool PlaneCurve::coeff_is_zero(int i, int j) const {
    if (j < 0 || j >= static_cast<int>(ycoeff.size())) return true;
    const KPoly& p = ycoeff[static_cast<size_t>(j)];
    if (i < 0 || i >= static_cast<int>(p.size())) return true;
    return field->is_zero(p[static_cast<size_t>(i)]);
}

namespace {

// Determinant over the coefficient field by Gaussian elimination.
KElem kdet(const NumberField& K, std::vector<std::vector<KElem>>& m) {
    size_t n = m.size();
    KElem det = K.one();
    bool neg = false;
    for (size_t col = 0; col < n; ++col) {
        size_t p = n;
        for (size_t i = col; i < n; ++i)
            if (!K.is_zero(m[i][col])) {
                p = i;
                break;
            }
        if (p == n) return K.zero();
        if (p != col) {
            std::swap(m[p], m[col]);
            neg = !neg;
        }
        det = K.mul(det, m[col][col]);
        KElem inv = K.inv(m[col][col]);
        for (size_t i = col + 1; i < n; ++i) {
            if (K.is_zero(m[i][col])) continue;
            KElem f = K.mul(m[i][col], inv);
            for (size_t j = col; j < n; ++j)
                m[i][j] = K.sub(m[i][j], K.mul(f, m[col][j]));
        }
    }
    return neg ? K.neg(det) : det;
}

}  // namespace

KPoly y_resultant(const PlaneCurve& c) {
    const NumberField& K = *c.field;
    int n = c.degy();
    if (n < 1) throw ParseError("curve must involve y");
    // Sylvester matrix of f and df/dy in y has size (2n - 1); entries are
    // polynomials in x, so evaluate at enough rational points and interpolate.
    std::vector<KPoly> f = c.ycoeff;
    std::vector<KPoly> g(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j) {
        g[static_cast<size_t>(j - 1)] = f[static_cast<size_t>(j)];
        for (KElem& e : g[static_cast<size_t>(j - 1)]) e = K.mul_q(e, mpq_class(j));
    }
    int dxf = c.degx();
    long dbound = static_cast<long>(dxf) * (n - 1) + static_cast<long>(dxf) * n + 1;
    size_t dim = static_cast<size_t>(2 * n - 1);

    std::vector<mpq_class> xs;
    std::vector<KElem> vals;
    for (long k = 0; k < dbound; ++k) {
        mpq_class x0(k);
        // Evaluate all coefficient polynomials at x0.
        std::vector<KElem> fe(static_cast<size_t>(n) + 1), ge(static_cast<size_t>(n));
        for (int j = 0; j <= n; ++j) fe[static_cast<size_t>(j)] = kpoly_eval(K, f[static_cast<size_t>(j)], x0);
        for (int j = 0; j < n; ++j) ge[static_cast<size_t>(j)] = kpoly_eval(K, g[static_cast<size_t>(j)], x0);
        std::vector<std::vector<KElem>> m(dim, std::vector<KElem>(dim, K.zero()));
        // n-1 rows of f coefficients, n rows of df/dy coefficients.
        for (int r = 0; r < n - 1; ++r)
            for (int j = 0; j <= n; ++j) m[static_cast<size_t>(r)][static_cast<size_t>(r + n - j)] = fe[static_cast<size_t>(j)];
        for (int r = 0; r < n; ++r)
            for (int j = 0; j < n; ++j)
                m[static_cast<size_t>(n - 1 + r)][static_cast<size_t>(r + n - 1 - j)] = ge[static_cast<size_t>(j)];
        xs.push_back(x0);
        vals.push_back(kdet(K, m));
    }

    // Lagrange interpolation over K through (xs, vals).
    KPoly acc;  // zero
    KPoly numer_all{K.one()};
    for (const mpq_class& x0 : xs) {
        KPoly lin{K.mul_q(K.one(), -x0), K.one()};
        numer_all = kpoly_mul(K, numer_all, lin);
    }
    for (size_t i = 0; i < xs.size(); ++i) {
        if (K.is_zero(vals[i])) continue;
        // numer_all / (x - xs[i]), synthetic division.
        KPoly q(numer_all.size() - 1, K.zero());
        KElem carry = K.zero();
        for (size_t j = numer_all.size(); j-- > 1;) {
            carry = K.add(numer_all[j], K.mul_q(carry, xs[i]));
            q[j - 1] = carry;
        }
        mpq_class denom(1);
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            denom *= xs[i] - xs[j];
        }
        KElem scale = K.mul_q(vals[i], 1 / denom);
        for (size_t j = 0; j < q.size(); ++j) q[j] = K.mul(q[j], scale);
        acc = kpoly_add(K, acc, q);
    }
    kpoly_trim(K, acc);
    return acc;
}

namespace {

// Division in K[x]; throws when not exact and exact == true.
KPoly kpoly_divmod(const NumberField& K, const KPoly& a, const KPoly& b, KPoly* rem) {
    int db = kpoly_degree(K, b);
    if (db < 0) throw InternalError("kpoly division by zero");
    KPoly r = a;
    kpoly_trim(K, r);
    KPoly q;
    if (kpoly_degree(K, r) >= db)
        q.assign(static_cast<size_t>(kpoly_degree(K, r) - db) + 1, K.zero());
    KElem lead_inv = K.inv(b[static_cast<size_t>(db)]);
    while (kpoly_degree(K, r) >= db) {
        int dr = kpoly_degree(K, r);
        KElem f = K.mul(r[static_cast<size_t>(dr)], lead_inv);
        q[static_cast<size_t>(dr - db)] = f;
        for (int i = 0; i <= db; ++i)
            r[static_cast<size_t>(dr - db + i)] =
                K.sub(r[static_cast<size_t>(dr - db + i)], K.mul(f, b[static_cast<size_t>(i)]));
        kpoly_trim(K, r);
    }
    if (rem) *rem = r;
    return q;
}

QPoly kpoly_to_qpoly(const NumberField& K, const KPoly& p) {
    QPoly q;
    for (const KElem& e : p) {
        if (!K.is_rational() && !(e.size() == 1 || std::all_of(e.begin() + 1, e.end(), [](const mpq_class& x) { return x == 0; })))
            throw InternalError("coefficient not rational");
        q.c.push_back(e.empty() ? mpq_class(0) : e[0]);
    }
    q.trim();
    return q;
}

KPoly qpoly_to_kpoly(const NumberField& K, const QPoly& p) {
    KPoly out;
    for (const auto& c : p.c) out.push_back(K.from_q(c));
    kpoly_trim(K, out);
    return out;
}

// Squarefree part over K[x]: p / gcd(p, p').
KPoly kpoly_squarefree(const NumberField& K, const KPoly& p) {
    if (K.is_rational()) {
        return qpoly_to_kpoly(K, squarefree_part(kpoly_to_qpoly(K, p)));
    }
    // Monic Euclid over the field.
    KPoly a = p, b = kpoly_derivative(K, p);
    while (kpoly_degree(K, b) >= 0) {
        KPoly r;
        kpoly_divmod(K, a, b, &r);
        a = b;
        b = r;
    }
    // a = gcd up to scale.
    if (kpoly_degree(K, a) == 0) return p;
    KPoly q = kpoly_divmod(K, p, a, nullptr);
    return q;
}

}  // namespace

KPoly y_discriminant(const PlaneCurve& c) {
    const NumberField& K = *c.field;
    KPoly res = y_resultant(c);
    if (res.empty()) throw ParseError("discriminant vanishes: curve is not squarefree in y");
    KPoly rem;
    KPoly disc = kpoly_divmod(K, res, c.lead(), &rem);
    if (kpoly_degree(K, rem) >= 0) throw InternalError("resultant not divisible by leading coefficient");
    return disc;
}

CriticalLocus critical_locus(const PlaneCurve& c, const PrecisionContext& ctx) {
    const NumberField& K = *c.field;
    KPoly res = y_resultant(c);
    if (res.empty()) throw ParseError("discriminant vanishes: curve is not squarefree in y");
    // S is the root set of lc * disc = resultant; use its exact squarefree part.
    CriticalLocus out;
    KPoly sq = kpoly_squarefree(K, res);
    out.squarefree = sq;
    out.squarefree_degree = kpoly_degree(K, sq);
    if (out.squarefree_degree == 0) return out;  // no finite critical values

    ComplexPoly p = kpoly_embed(K, sq, ctx.prec());
    std::vector<Cplx> rs = roots(p, ctx);
    // Merge clusters within 2^(-B/4).
    Real thresh = Real::pow2(-(ctx.working_bits / 4), ctx.prec());
    std::vector<bool> merged(rs.size(), false);
    for (size_t i = 0; i < rs.size(); ++i) {
        if (merged[i]) continue;
        std::vector<size_t> cluster{i};
        for (size_t j = i + 1; j < rs.size(); ++j) {
            if (merged[j]) continue;
            for (size_t k : cluster)
                if (abs(rs[j] - rs[k]) < thresh) {
                    cluster.push_back(j);
                    merged[j] = true;
                    break;
                }
        }
        if (cluster.size() == 1) {
            out.points.push_back(rs[i]);
        } else {
            Cplx mean(ctx.prec());
            for (size_t k : cluster) mean += rs[k];
            out.points.push_back(mean / static_cast<long>(cluster.size()));
        }
    }
    std::sort(out.points.begin(), out.points.end(), [](const Cplx& a, const Cplx& b) {
        if (a.re < b.re) return true;
        if (a.re > b.re) return false;
        return a.im < b.im;
    });
    return out;
}

NewtonPolygonData newton_polygon(const PlaneCurve& c) {
    NewtonPolygonData out;
    const NumberField& K = *c.field;
    for (int j = 0; j < static_cast<int>(c.ycoeff.size()); ++j) {
        const KPoly& p = c.ycoeff[static_cast<size_t>(j)];
        for (int i = 0; i < static_cast<int>(p.size()); ++i)
            if (!K.is_zero(p[static_cast<size_t>(i)])) out.support.push_back({i, j});
    }
    std::sort(out.support.begin(), out.support.end());
    if (out.support.size() < 3) return out;

    // Monotone chain convex hull (ccw).
    auto cross = [](std::pair<int, int> o, std::pair<int, int> a, std::pair<int, int> b) {
        return static_cast<long>(a.first - o.first) * (b.second - o.second) -
               static_cast<long>(a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<int, int>> pts = out.support;
    std::vector<std::pair<int, int>> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    out.hull = h;

    // Strict interior lattice points.
    int xmin = pts.front().first, xmax = pts.back().first;
    int ymin = pts[0].second, ymax = pts[0].second;
    for (auto& p : pts) {
        ymin = std::min(ymin, p.second);
        ymax = std::max(ymax, p.second);
    }
    for (int x = xmin; x <= xmax; ++x)
        for (int y = ymin; y <= ymax; ++y) {
            bool inside = true;
            for (size_t i = 0; i < out.hull.size() && inside; ++i) {
                auto a = out.hull[i];
                auto b = out.hull[(i + 1) % out.hull.size()];
                if (cross(a, b, {x, y}) <= 0) inside = false;
            }
            if (inside) out.interior.push_back({x, y});
        }
    std::sort(out.interior.begin(), out.interior.end());
    return out;
}

std::vector<std::vector<KPoly>> baker_numerators(const PlaneCurve& c) {
    NewtonPolygonData np = newton_polygon(c);
    const NumberField& K = *c.field;
    std::vector<std::vector<KPoly>> out;
    for (auto [a, b] : np.interior) {
        // monomial x^(a-1) y^(b-1)
        std::vector<KPoly> mono(static_cast<size_t>(b), KPoly());
        KPoly xpow(static_cast<size_t>(a), K.zero());
        xpow[static_cast<size_t>(a - 1)] = K.one();
        mono[static_cast<size_t>(b - 1)] = xpow;
        out.push_back(mono);
    }
    return out;
}

EmbeddedCurve::EmbeddedCurve(const PlaneCurve& c, mpfr_prec_t p) : prec(p) {
    const NumberField& K = *c.field;
    for (const KPoly& q : c.ycoeff) ycx.push_back(kpoly_embed(K, q, p));
    for (size_t j = 1; j < ycx.size(); ++j) {
        ComplexPoly d = ycx[j];
        for (Cplx& co : d.coeff) co = co * static_cast<long>(j);
        dycx.push_back(d);
    }
}

void EmbeddedCurve::fiber(const Cplx& x, ComplexPoly& out) const {
    out.coeff.resize(ycx.size(), Cplx(prec));
    for (size_t j = 0; j < ycx.size(); ++j) out.coeff[j] = ycx[j].eval(x);
}

void EmbeddedCurve::fiber_dy(const Cplx& x, ComplexPoly& out) const {
    out.coeff.resize(dycx.size(), Cplx(prec));
    for (size_t j = 0; j < dycx.size(); ++j) out.coeff[j] = dycx[j].eval(x);
}

Cplx EmbeddedCurve::eval_fy(const Cplx& x, const Cplx& y) const {
    mpfr_prec_t p = prec;
    Cplx acc(p), t(p);
    Real scratch(p);
    for (size_t j = dycx.size(); j-- > 0;) {
        Cplx::mul(t, acc, y, scratch);
        Cplx::add(acc, t, dycx[j].eval(x));
    }
    return acc;
}

}  // namespace periodica
