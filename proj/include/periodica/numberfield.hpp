#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "periodica/cplx.hpp"
#include "periodica/numerics.hpp"
#include "periodica/prec.hpp"
#include "periodica/qpoly.hpp"

namespace periodica {

// Element of a number field: coefficient vector on 1, t, ..., t^(d-1).
using KElem = std::vector<mpq_class>;

// Number field Q(t)/(minpoly) together with a distinguished complex embedding.
// Degree 1 represents plain Q (minpoly = t, generator = 0).
class NumberField {
  public:
    QPoly minpoly;  // monic over Q
    std::string var = "t";
    // Low-precision approximation singling out one complex root of minpoly.
    double hint_re = 0.0, hint_im = 0.0;

    static std::shared_ptr<const NumberField> rationals();
    static std::shared_ptr<const NumberField> make(QPoly minpoly, const std::string& var,
                                                   double hre, double him);

    int degree() const { return minpoly.degree(); }
    bool is_rational() const { return degree() == 1; }

    KElem zero() const { return KElem(static_cast<size_t>(degree()), mpq_class(0)); }
    KElem one() const;
    KElem from_q(const mpq_class& v) const;
    KElem gen() const;  // the class of t

    bool is_zero(const KElem& a) const;
    KElem add(const KElem& a, const KElem& b) const;
    KElem sub(const KElem& a, const KElem& b) const;
    KElem neg(const KElem& a) const;
    KElem mul(const KElem& a, const KElem& b) const;
    KElem mul_q(const KElem& a, const mpq_class& s) const;
    KElem inv(const KElem& a) const;  // throws InternalError on zero

    // The distinguished root of minpoly refined to `prec` bits (cached).
    Cplx generator_embedding(mpfr_prec_t prec) const;
    Cplx embed(const KElem& a, mpfr_prec_t prec) const;

    std::string elem_str(const KElem& a) const;

  private:
    mutable std::mutex cache_mutex_;
    mutable std::map<mpfr_prec_t, Cplx> root_cache_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

// Polynomial in one variable with KElem coefficients.
using KPoly = std::vector<KElem>;

void kpoly_trim(const NumberField& K, KPoly& p);
int kpoly_degree(const NumberField& K, const KPoly& p);
KPoly kpoly_add(const NumberField& K, const KPoly& a, const KPoly& b);
KPoly kpoly_mul(const NumberField& K, const KPoly& a, const KPoly& b);
KPoly kpoly_derivative(const NumberField& K, const KPoly& a);
KElem kpoly_eval(const NumberField& K, const KPoly& p, const mpq_class& x);
ComplexPoly kpoly_embed(const NumberField& K, const KPoly& p, mpfr_prec_t prec);

}  // namespace periodica
