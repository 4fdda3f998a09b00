#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace periodica {

// Dense univariate polynomial over Q, c[i] multiplies x^i.  Kept normalized:
// no trailing zero coefficients (zero polynomial has empty c).
struct QPoly {
    std::vector<mpq_class> c;

    QPoly() = default;
    explicit QPoly(std::vector<mpq_class> coeffs) : c(std::move(coeffs)) { trim(); }
    static QPoly constant(const mpq_class& v);
    static QPoly monomial(int deg, const mpq_class& v);

    void trim();
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for 0
    const mpq_class& lead() const;
    mpq_class eval(const mpq_class& x) const;

    QPoly derivative() const;
    friend QPoly operator+(const QPoly& a, const QPoly& b);
    friend QPoly operator-(const QPoly& a, const QPoly& b);
    friend QPoly operator*(const QPoly& a, const QPoly& b);
    friend QPoly operator*(const QPoly& a, const mpq_class& s);
    friend bool operator==(const QPoly& a, const QPoly& b);

    std::string str(const std::string& var = "x") const;
};

// Division with remainder over Q; b must be nonzero.
void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);

// Monic gcd over Q (primitive PRS over Z internally).
QPoly gcd(const QPoly& a, const QPoly& b);

// p / gcd(p, p'), normalized monic.
QPoly squarefree_part(const QPoly& p);

// Scale to a primitive integer coefficient vector (content 1, positive lead).
std::vector<mpz_class> primitive_z(const QPoly& p);

}  // namespace periodica
