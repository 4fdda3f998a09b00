#include "periodica/numberfield.hpp"

#include "periodica/error.hpp"
#include "periodica/util.hpp"

namespace periodica {

std::shared_ptr<const NumberField> NumberField::rationals() {
    static std::shared_ptr<const NumberField> q = [] {
        auto f = std::make_shared<NumberField>();
        f->minpoly = QPoly::monomial(1, 1);  // t
        return f;
    }();
    return q;
}

std::shared_ptr<const NumberField> NumberField::make(QPoly minpoly, const std::string& var,
                                                     double hre, double him) {
    if (minpoly.degree() < 1) throw ParseError("field polynomial must have degree at least 1");
    auto f = std::make_shared<NumberField>();
    f->minpoly = minpoly * (1 / minpoly.lead());
    f->var = var;
    f->hint_re = hre;
    f->hint_im = him;
    return f;
}

KElem NumberField::one() const { return from_q(1); }

KElem NumberField::from_q(const mpq_class& v) const {
    KElem e = zero();
    e[0] = v;
    return e;
}

KElem NumberField::gen() const {
    KElem e = zero();
    if (degree() == 1)
        e[0] = -minpoly.c[0];  // t reduces to the rational root
    else
        e[1] = 1;
    return e;
}

bool NumberField::is_zero(const KElem& a) const {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

KElem NumberField::add(const KElem& a, const KElem& b) const {
    KElem r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

KElem NumberField::sub(const KElem& a, const KElem& b) const {
    KElem r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

KElem NumberField::neg(const KElem& a) const {
    KElem r = a;
    for (auto& x : r) x = -x;
    return r;
}

KElem NumberField::mul(const KElem& a, const KElem& b) const {
    size_t d = static_cast<size_t>(degree());
    if (d == 1) {
        KElem r(1);
        r[0] = a[0] * b[0];
        return r;
    }
    std::vector<mpq_class> prod(2 * d - 1, mpq_class(0));
    for (size_t i = 0; i < d; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < d; ++j) prod[i + j] += a[i] * b[j];
    }
    // Reduce modulo the monic minpoly.
    for (size_t k = prod.size(); k-- > d;) {
        if (prod[k] == 0) continue;
        mpq_class f = prod[k];
        prod[k] = 0;
        for (size_t i = 0; i < d; ++i) prod[k - d + i] -= f * minpoly.c[i];
    }
    prod.resize(d);
    return prod;
}

KElem NumberField::mul_q(const KElem& a, const mpq_class& s) const {
    KElem r = a;
    for (auto& x : r) x *= s;
    return r;
}

KElem NumberField::inv(const KElem& a) const {
    if (is_zero(a)) throw InternalError("number field division by zero");
    if (degree() == 1) {
        KElem r(1);
        r[0] = 1 / a[0];
        return r;
    }
    // Extended Euclid in Q[t] against the minimal polynomial.
    QPoly r0 = minpoly, r1{std::vector<mpq_class>(a)};
    QPoly s0, s1 = QPoly::constant(1);
    while (!r1.is_zero() && r1.degree() > 0) {
        QPoly q, rem;
        divmod(r0, r1, q, rem);
        QPoly s2 = s0 - q * s1;
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    if (r1.is_zero()) throw InternalError("element not invertible: minpoly not irreducible?");
    QPoly inv_poly = s1 * (1 / r1.c[0]);
    KElem r = zero();
    for (size_t i = 0; i < inv_poly.c.size(); ++i) r[i] = inv_poly.c[i];
    return r;
}

Cplx NumberField::generator_embedding(mpfr_prec_t prec) const {
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = root_cache_.find(prec);
        if (it != root_cache_.end()) return it->second;
    }
    Cplx out(prec);
    if (degree() == 1) {
        mpq_class root = -minpoly.c[0] / minpoly.c[1];
        out = Cplx(to_real(root, prec), Real(prec));
    } else {
        ComplexPoly p;
        for (const auto& coef : minpoly.c) p.coeff.push_back(Cplx(to_real(coef, prec), Real(prec)));
        PrecisionContext ctx(prec > 73 ? prec - 20 : 53, 20);
        auto rs = roots(p, ctx);
        Cplx hint(hint_re, hint_im, prec);
        size_t best = 0;
        Real bd = abs(rs[0] - hint);
        for (size_t i = 1; i < rs.size(); ++i) {
            Real d = abs(rs[i] - hint);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        out = rs[best];
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    root_cache_.emplace(prec, out);
    return out;
}

Cplx NumberField::embed(const KElem& a, mpfr_prec_t prec) const {
    if (degree() == 1) return Cplx(to_real(a[0], prec), Real(prec));
    Cplx t = generator_embedding(prec);
    Cplx acc(prec);
    for (size_t i = a.size(); i-- > 0;) {
        acc = acc * t;
        acc.re += to_real(a[i], prec);
    }
    return acc;
}

std::string NumberField::elem_str(const KElem& a) const {
    QPoly p{std::vector<mpq_class>(a)};
    return p.str(var);
}

void kpoly_trim(const NumberField& K, KPoly& p) {
    while (!p.empty() && K.is_zero(p.back())) p.pop_back();
}

int kpoly_degree(const NumberField& K, const KPoly& p) {
    for (size_t i = p.size(); i-- > 0;)
        if (!K.is_zero(p[i])) return static_cast<int>(i);
    return -1;
}

KPoly kpoly_add(const NumberField& K, const KPoly& a, const KPoly& b) {
    KPoly r(std::max(a.size(), b.size()), K.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = K.add(r[i], a[i]);
    for (size_t i = 0; i < b.size(); ++i) r[i] = K.add(r[i], b[i]);
    kpoly_trim(K, r);
    return r;
}

KPoly kpoly_mul(const NumberField& K, const KPoly& a, const KPoly& b) {
    if (a.empty() || b.empty()) return KPoly();
    KPoly r(a.size() + b.size() - 1, K.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (K.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = K.add(r[i + j], K.mul(a[i], b[j]));
    }
    kpoly_trim(K, r);
    return r;
}

KPoly kpoly_derivative(const NumberField& K, const KPoly& a) {
    KPoly r;
    for (size_t i = 1; i < a.size(); ++i)
        r.push_back(K.mul_q(a[i], mpq_class(static_cast<long>(i))));
    kpoly_trim(K, r);
    return r;
}

KElem kpoly_eval(const NumberField& K, const KPoly& p, const mpq_class& x) {
    KElem acc = K.zero();
    for (size_t i = p.size(); i-- > 0;) {
        acc = K.mul_q(acc, x);
        acc = K.add(acc, p[i]);
    }
    return acc;
}

ComplexPoly kpoly_embed(const NumberField& K, const KPoly& p, mpfr_prec_t prec) {
    ComplexPoly out;
    out.coeff.reserve(p.size());
    for (const KElem& c : p) out.coeff.push_back(K.embed(c, prec));
    return out;
}

}  // namespace periodica
