#pragma once

#include <string>

#include "periodica/real.hpp"

namespace periodica {

// Complex number over Real.  Multiplication uses the 4M schoolbook form; at
// the precisions in play mpfr time dominates dispatch anyway.
class Cplx {
  public:
    Real re, im;

    Cplx() = default;
    explicit Cplx(mpfr_prec_t prec) : re(prec), im(prec) {}
    Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Cplx(long r, mpfr_prec_t prec) : re(r, prec), im(prec) {}
    Cplx(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}

    mpfr_prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    Cplx operator-() const { return Cplx(-re, -im); }
    Cplx conj() const { return Cplx(re, -im); }

    friend Cplx operator+(const Cplx& a, const Cplx& b) { return Cplx(a.re + b.re, a.im + b.im); }
    friend Cplx operator-(const Cplx& a, const Cplx& b) { return Cplx(a.re - b.re, a.im - b.im); }
    friend Cplx operator*(const Cplx& a, const Cplx& b) {
        return Cplx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Cplx operator*(const Cplx& a, const Real& b) { return Cplx(a.re * b, a.im * b); }
    friend Cplx operator*(const Real& b, const Cplx& a) { return a * b; }
    friend Cplx operator*(const Cplx& a, long b) { return Cplx(a.re * b, a.im * b); }
    friend Cplx operator/(const Cplx& a, const Real& b) { return Cplx(a.re / b, a.im / b); }
    friend Cplx operator/(const Cplx& a, long b) { return Cplx(a.re / b, a.im / b); }
    friend Cplx operator/(const Cplx& a, const Cplx& b) {
        Real d = b.re * b.re + b.im * b.im;
        return Cplx((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
    }
    Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
    Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
    Cplx& operator*=(const Cplx& o) { *this = *this * o; return *this; }

    friend bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }

    // |a|^2 and |a|; abs1 is the cheap l1 bound used for cutoffs.
    friend Real norm(const Cplx& a) { return a.re * a.re + a.im * a.im; }
    friend Real abs(const Cplx& a) { return hypot(a.re, a.im); }
    friend Real abs1(const Cplx& a) { return abs(a.re) + abs(a.im); }

    friend Cplx sqrt(const Cplx& a);

    // In-place kernels (dst must not alias a or b for mul).
    static void mul(Cplx& dst, const Cplx& a, const Cplx& b, Real& t0) {
        Real::mul(t0, a.re, b.re);
        Real::fms(dst.re, a.im, b.im, t0);
        mpfr_neg(dst.re.get(), dst.re.get(), MPFR_RNDN);
        Real::mul(t0, a.re, b.im);
        Real::fma(dst.im, a.im, b.re, t0);
    }
    static void add(Cplx& dst, const Cplx& a, const Cplx& b) {
        Real::add(dst.re, a.re, b.re);
        Real::add(dst.im, a.im, b.im);
    }
    static void sub(Cplx& dst, const Cplx& a, const Cplx& b) {
        Real::sub(dst.re, a.re, b.re);
        Real::sub(dst.im, a.im, b.im);
    }

    std::string str(int digits = 0) const;
};

// exp(i*theta) at the precision of theta.
Cplx unit_circle(const Real& theta);

}  // namespace periodica
