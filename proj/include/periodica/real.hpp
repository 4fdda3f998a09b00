#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

namespace periodica {

// RAII wrapper over mpfr_t with per-value precision.  Copy and assignment
// adopt the source's precision; binary operators round to the wider operand.
// Rounding mode is always nearest-even.
class Real {
  public:
    Real() { mpfr_init2(v_, 53); mpfr_set_zero(v_, 1); }
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(int x, mpfr_prec_t prec) : Real(static_cast<long>(x), prec) {}
    Real(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, 53);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    void set_prec(mpfr_prec_t p) { mpfr_set_prec(v_, p); mpfr_set_zero(v_, 1); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    long exp2() const { return mpfr_zero_p(v_) ? mpfr_get_emin() : mpfr_get_exp(v_); }

    // Decimal string with enough digits to round-trip at this precision.
    std::string str(int digits = 0) const;
    // Hex-float string, exact round trip.
    std::string hex() const;
    static Real from_str(const std::string& s, mpfr_prec_t prec);
    static Real from_hex(const std::string& s, mpfr_prec_t prec);

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(long x) { mpfr_mul_si(v_, v_, x, MPFR_RNDN); return *this; }
    Real& operator/=(long x) { mpfr_div_si(v_, v_, x, MPFR_RNDN); return *this; }
    Real& operator+=(long x) { mpfr_add_si(v_, v_, x, MPFR_RNDN); return *this; }
    Real& operator-=(long x) { mpfr_sub_si(v_, v_, x, MPFR_RNDN); return *this; }

    Real operator-() const { Real r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    friend Real operator+(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator+(const Real& a, long b) { Real r(a.prec()); mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, long b) { Real r(a.prec()); mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, long b) { Real r(a.prec()); mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, long b) { Real r(a.prec()); mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator*(long b, const Real& a) { return a * b; }
    friend Real operator+(long b, const Real& a) { return a + b; }
    friend Real operator-(long b, const Real& a) { Real r(a.prec()); mpfr_si_sub(r.v_, b, a.v_, MPFR_RNDN); return r; }
    friend Real operator/(long b, const Real& a) { Real r(a.prec()); mpfr_si_div(r.v_, b, a.v_, MPFR_RNDN); return r; }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
    friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

    // In-place kernels for hot loops; dst may alias arguments.
    static void add(Real& dst, const Real& a, const Real& b) { mpfr_add(dst.v_, a.v_, b.v_, MPFR_RNDN); }
    static void sub(Real& dst, const Real& a, const Real& b) { mpfr_sub(dst.v_, a.v_, b.v_, MPFR_RNDN); }
    static void mul(Real& dst, const Real& a, const Real& b) { mpfr_mul(dst.v_, a.v_, b.v_, MPFR_RNDN); }
    static void div(Real& dst, const Real& a, const Real& b) { mpfr_div(dst.v_, a.v_, b.v_, MPFR_RNDN); }
    static void fma(Real& dst, const Real& a, const Real& b, const Real& c) { mpfr_fma(dst.v_, a.v_, b.v_, c.v_, MPFR_RNDN); }
    static void fms(Real& dst, const Real& a, const Real& b, const Real& c) { mpfr_fms(dst.v_, a.v_, b.v_, c.v_, MPFR_RNDN); }

    friend Real abs(const Real& a) { Real r(a.prec()); mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sqrt(const Real& a) { Real r(a.prec()); mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real exp(const Real& a) { Real r(a.prec()); mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real log(const Real& a) { Real r(a.prec()); mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real cos(const Real& a) { Real r(a.prec()); mpfr_cos(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sin(const Real& a) { Real r(a.prec()); mpfr_sin(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real atan2(const Real& y, const Real& x) { Real r(wider(y, x)); mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN); return r; }
    friend Real floor(const Real& a) { Real r(a.prec()); mpfr_floor(r.v_, a.v_); return r; }
    friend Real round_nearest(const Real& a) { Real r(a.prec()); mpfr_round(r.v_, a.v_); return r; }
    friend Real hypot(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real pow_si(const Real& a, long e) { Real r(a.prec()); mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN); return r; }
    friend Real min(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_min(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real max(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_max(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

    static Real pi(mpfr_prec_t prec) { Real r(prec); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
    // 2^e at the given precision.
    static Real pow2(long e, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

  private:
    static mpfr_prec_t wider(const Real& a, const Real& b) {
        return a.prec() > b.prec() ? a.prec() : b.prec();
    }
    mpfr_t v_;
};

}  // namespace periodica
