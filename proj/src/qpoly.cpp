#include "periodica/qpoly.hpp"

#include "periodica/error.hpp"

namespace periodica {

QPoly QPoly::constant(const mpq_class& v) {
    QPoly p;
    if (v != 0) p.c.push_back(v);
    return p;
}

QPoly QPoly::monomial(int deg, const mpq_class& v) {
    QPoly p;
    if (v != 0) {
        p.c.assign(static_cast<size_t>(deg) + 1, mpq_class(0));
        p.c.back() = v;
    }
    return p;
}

void QPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

const mpq_class& QPoly::lead() const {
    if (c.empty()) throw InternalError("lead of zero polynomial");
    return c.back();
}

mpq_class QPoly::eval(const mpq_class& x) const {
    mpq_class acc(0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

QPoly QPoly::derivative() const {
    QPoly d;
    for (size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * static_cast<long>(i));
    d.trim();
    return d;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
    QPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.trim();
    return r;
}

QPoly operator-(const QPoly& a, const QPoly& b) {
    QPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    r.trim();
    return r;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return QPoly();
    QPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

QPoly operator*(const QPoly& a, const mpq_class& s) {
    if (s == 0) return QPoly();
    QPoly r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }

std::string QPoly::str(const std::string& var) const {
    if (c.empty()) return "0";
    std::string out;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        mpq_class v = c[i];
        bool neg = v < 0;
        if (neg) v = -v;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        bool unit = (v == 1) && i > 0;
        if (!unit) out += v.get_str();
        if (i > 0) {
            if (!unit) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
    if (b.is_zero()) throw InternalError("polynomial division by zero");
    r = a;
    q = QPoly();
    int db = b.degree();
    if (a.degree() >= db) q.c.assign(static_cast<size_t>(a.degree() - db) + 1, mpq_class(0));
    while (!r.is_zero() && r.degree() >= db) {
        int k = r.degree() - db;
        mpq_class f = r.lead() / b.lead();
        q.c[static_cast<size_t>(k)] = f;
        for (int i = 0; i <= db; ++i)
            r.c[static_cast<size_t>(k + i)] -= f * b.c[static_cast<size_t>(i)];
        r.trim();
    }
    q.trim();
}

std::vector<mpz_class> primitive_z(const QPoly& p) {
    if (p.is_zero()) return {};
    mpz_class den(1);
    for (const auto& x : p.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    std::vector<mpz_class> z(p.c.size());
    mpz_class g(0);
    for (size_t i = 0; i < p.c.size(); ++i) {
        mpq_class v = p.c[i] * den;
        z[i] = v.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[i].get_mpz_t());
    }
    if (z.back() < 0) g = -g;
    for (auto& x : z) x /= g;
    return z;
}

namespace {

void zpoly_trim(std::vector<mpz_class>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

void make_primitive(std::vector<mpz_class>& p) {
    if (p.empty()) return;
    mpz_class g(0);
    for (const auto& x : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (p.back() < 0) g = -g;
    for (auto& x : p) x /= g;
}

// Pseudo-remainder of a by b over Z (lead(b)^(da-db+1) * a mod b).
std::vector<mpz_class> prem(std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
    int db = static_cast<int>(b.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
        int k = static_cast<int>(a.size()) - 1 - db;
        mpz_class la = a.back();
        const mpz_class& lb = b.back();
        for (auto& x : a) x *= lb;
        for (int i = 0; i <= db; ++i) a[static_cast<size_t>(k + i)] -= la * b[static_cast<size_t>(i)];
        zpoly_trim(a);
    }
    return a;
}

}  // namespace

QPoly gcd(const QPoly& a, const QPoly& b) {
    if (a.is_zero() && b.is_zero()) return QPoly();
    if (a.is_zero()) return b * (1 / b.lead());
    if (b.is_zero()) return a * (1 / a.lead());
    std::vector<mpz_class> r0 = primitive_z(a), r1 = primitive_z(b);
    if (r0.size() < r1.size()) r0.swap(r1);
    while (!r1.empty()) {
        std::vector<mpz_class> r2 = prem(r0, r1);
        make_primitive(r2);
        r0.swap(r1);
        r1.swap(r2);
    }
    QPoly g;
    g.c.reserve(r0.size());
    for (const auto& x : r0) g.c.push_back(mpq_class(x));
    g.trim();
    return g * (1 / g.lead());
}

QPoly squarefree_part(const QPoly& p) {
    if (p.is_zero()) return p;
    if (p.degree() == 0) return QPoly::constant(1);
    QPoly g = gcd(p, p.derivative());
    QPoly q, r;
    divmod(p, g, q, r);
    if (!r.is_zero()) throw InternalError("squarefree_part: inexact division");
    return q * (1 / q.lead());
}

}  // namespace periodica
