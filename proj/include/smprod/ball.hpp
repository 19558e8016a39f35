#pragma once

// Midpoint-radius ("ball") arithmetic on top of MPFR.
//
// A Ball is a pair (mid, rad) representing the closed interval [mid - rad, mid + rad].
// Every operation returns a ball that contains the exact result of applying the
// operation to any points of the argument balls. Midpoints are rounded to nearest at
// the working precision; radii are kept at a fixed low precision and always rounded
// upward, and each inexact midpoint operation contributes one ulp to the radius.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>

#include "smprod/error.hpp"

namespace smprod {

inline constexpr mpfr_prec_t radius_precision = 64;

/// RAII owner of an mpfr_t.
class Real {
public:
    explicit Real(mpfr_prec_t prec = radius_precision) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& other) {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    Real(Real&& other) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, other.v_);
    }
    Real& operator=(const Real& other) {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

    /// Decimal rendering with `digits` significant digits, rounded in direction `rnd`.
    std::string to_string(int digits = 20, mpfr_rnd_t rnd = MPFR_RNDN) const {
        char* buf = nullptr;
        if (mpfr_asprintf(&buf, "%.*R*g", digits, rnd, v_) < 0) {
            throw error("mpfr_asprintf failed");
        }
        std::string out(buf);
        mpfr_free_str(buf);
        return out;
    }

    /// Fixed-point rendering with `decimals` digits after the point.
    std::string to_fixed(int decimals, mpfr_rnd_t rnd = MPFR_RNDN) const {
        char* buf = nullptr;
        if (mpfr_asprintf(&buf, "%.*R*f", decimals, rnd, v_) < 0) {
            throw error("mpfr_asprintf failed");
        }
        std::string out(buf);
        mpfr_free_str(buf);
        return out;
    }

private:
    mpfr_t v_;
};

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }

namespace detail {

// Adds one ulp of `mid` to `rad` when the operation that produced `mid` was inexact.
inline void add_rounding_error(Real& rad, const Real& mid, int ternary) {
    if (ternary == 0 || mpfr_zero_p(mid.get())) return;
    Real ulp;
    mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid.get()) - mpfr_get_prec(mid.get()), MPFR_RNDU);
    mpfr_add(rad.get(), rad.get(), ulp.get(), MPFR_RNDU);
}

inline Real abs_up(const Real& x) {
    Real r;
    mpfr_abs(r.get(), x.get(), MPFR_RNDU);
    return r;
}

inline Real abs_down(const Real& x) {
    Real r;
    mpfr_abs(r.get(), x.get(), MPFR_RNDD);
    return r;
}

}  // namespace detail

class Ball {
public:
    explicit Ball(mpfr_prec_t prec = 64) : mid_(prec), rad_(radius_precision) {}

    /// Exact small integer.
    Ball(long value, mpfr_prec_t prec) : mid_(std::max<mpfr_prec_t>(prec, 64)), rad_(radius_precision) {
        mpfr_set_si(mid_.get(), value, MPFR_RNDN);
    }

    /// Exact integer; the midpoint precision grows to hold every bit of `value`.
    static Ball exact(const mpz_class& value, mpfr_prec_t prec) {
        const auto bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(value.get_mpz_t(), 2));
        Ball b(std::max(prec, bits));
        mpfr_set_z(b.mid_.get(), value.get_mpz_t(), MPFR_RNDN);
        return b;
    }

    static Ball from_rational(const mpq_class& value, mpfr_prec_t prec) {
        Ball b(prec);
        int t = mpfr_set_q(b.mid_.get(), value.get_mpq_t(), MPFR_RNDN);
        detail::add_rounding_error(b.rad_, b.mid_, t);
        return b;
    }

    /// Exact for any finite double.
    static Ball from_double(double value, mpfr_prec_t prec) {
        Ball b(std::max<mpfr_prec_t>(prec, 53));
        mpfr_set_d(b.mid_.get(), value, MPFR_RNDN);
        return b;
    }

    static Ball from_decimal(std::string_view text, mpfr_prec_t prec) {
        Ball b(prec);
        std::string s(text);
        int t = mpfr_set_str(b.mid_.get(), s.c_str(), 10, MPFR_RNDN);
        if (t != 0 || mpfr_nan_p(b.mid_.get())) {
            throw invalid_argument("not a decimal number: " + s);
        }
        // mpfr_set_str returns 0 on success regardless of exactness; charge one ulp.
        detail::add_rounding_error(b.rad_, b.mid_, 1);
        return b;
    }

    static Ball pi(mpfr_prec_t prec) {
        Ball b(prec);
        int t = mpfr_const_pi(b.mid_.get(), MPFR_RNDN);
        detail::add_rounding_error(b.rad_, b.mid_, t);
        return b;
    }

    static Ball from_parts(Real mid, Real rad) {
        Ball b(mid.precision());
        b.mid_ = std::move(mid);
        mpfr_set(b.rad_.get(), rad.get(), MPFR_RNDU);
        return b;
    }

    mpfr_prec_t precision() const { return mid_.precision(); }
    const Real& mid() const { return mid_; }
    const Real& rad() const { return rad_; }
    Real& mid_mut() { return mid_; }
    Real& rad_mut() { return rad_; }

    Real lower() const {
        Real r(precision());
        mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
        return r;
    }
    Real upper() const {
        Real r(precision());
        mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
        return r;
    }
    double lower_double() const { return lower().to_double(MPFR_RNDD); }
    double upper_double() const { return upper().to_double(MPFR_RNDU); }
    double mid_double() const { return mid_.to_double(); }
    double rad_double() const { return rad_.to_double(MPFR_RNDU); }

    bool is_exact() const { return mpfr_zero_p(rad_.get()) != 0; }
    bool is_positive() const { return mpfr_sgn(lower().get()) > 0; }
    bool is_negative() const { return mpfr_sgn(upper().get()) < 0; }
    bool contains_zero() const { return !is_positive() && !is_negative(); }

    bool contains(const mpz_class& n) const {
        const auto bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(n.get_mpz_t(), 2));
        Real x(std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
        mpfr_set_z(x.get(), n.get_mpz_t(), MPFR_RNDN);
        return lower() <= x && x <= upper();
    }

    /// True when `inner` lies entirely inside this ball.
    bool contains(const Ball& inner) const {
        return lower() <= inner.lower() && inner.upper() <= upper();
    }

    bool overlaps(const Ball& other) const {
        return lower() <= other.upper() && other.lower() <= upper();
    }

    Ball& add_error(const Real& e) {
        mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
        return *this;
    }
    Ball& add_error(double e) {
        Real r;
        mpfr_set_d(r.get(), e, MPFR_RNDU);
        return add_error(r);
    }

    /// Same center and radius scaled by 2^k (for containment-inflation checks).
    Ball inflated(long k) const {
        Ball b(*this);
        mpfr_mul_2si(b.rad_.get(), b.rad_.get(), k, MPFR_RNDU);
        return b;
    }

    std::string to_string(int digits = 20) const {
        return mid_.to_string(digits) + " +/- " + rad_.to_string(3, MPFR_RNDU);
    }

private:
    Real mid_;
    Real rad_;
};

inline mpfr_prec_t max_precision(const Ball& a, const Ball& b) {
    return std::max(a.precision(), b.precision());
}

inline Ball operator-(const Ball& a) {
    Ball r(a.precision());
    mpfr_neg(r.mid_mut().get(), a.mid().get(), MPFR_RNDN);
    mpfr_set(r.rad_mut().get(), a.rad().get(), MPFR_RNDU);
    return r;
}

inline Ball operator+(const Ball& a, const Ball& b) {
    Ball r(max_precision(a, b));
    int t = mpfr_add(r.mid_mut().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
    mpfr_add(r.rad_mut().get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball operator-(const Ball& a, const Ball& b) {
    Ball r(max_precision(a, b));
    int t = mpfr_sub(r.mid_mut().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
    mpfr_add(r.rad_mut().get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball operator*(const Ball& a, const Ball& b) {
    Ball r(max_precision(a, b));
    int t = mpfr_mul(r.mid_mut().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
    // |a.mid| b.rad + |b.mid| a.rad + a.rad b.rad
    Real acc, term;
    mpfr_mul(acc.get(), detail::abs_up(a.mid()).get(), b.rad().get(), MPFR_RNDU);
    mpfr_mul(term.get(), detail::abs_up(b.mid()).get(), a.rad().get(), MPFR_RNDU);
    mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDU);
    mpfr_mul(term.get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
    mpfr_add(r.rad_mut().get(), acc.get(), term.get(), MPFR_RNDU);
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball operator/(const Ball& a, const Ball& b) {
    // |x/y - a/b| <= (|b| ra + |a| rb) / (|b| (|b| - rb))
    Real bm_lo = detail::abs_down(b.mid());
    Real gap;
    mpfr_sub(gap.get(), bm_lo.get(), b.rad().get(), MPFR_RNDD);
    if (mpfr_sgn(gap.get()) <= 0) {
        throw invalid_argument("ball division by an interval containing zero");
    }
    Ball r(max_precision(a, b));
    int t = mpfr_div(r.mid_mut().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
    Real num, term, den;
    mpfr_mul(num.get(), detail::abs_up(b.mid()).get(), a.rad().get(), MPFR_RNDU);
    mpfr_mul(term.get(), detail::abs_up(a.mid()).get(), b.rad().get(), MPFR_RNDU);
    mpfr_add(num.get(), num.get(), term.get(), MPFR_RNDU);
    mpfr_mul(den.get(), bm_lo.get(), gap.get(), MPFR_RNDD);
    mpfr_div(r.rad_mut().get(), num.get(), den.get(), MPFR_RNDU);
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball operator+(const Ball& a, long b) { return a + Ball(b, a.precision()); }
inline Ball operator-(const Ball& a, long b) { return a - Ball(b, a.precision()); }
inline Ball operator-(long a, const Ball& b) { return Ball(a, b.precision()) - b; }
inline Ball operator*(const Ball& a, long b) { return a * Ball(b, a.precision()); }
inline Ball operator*(long a, const Ball& b) { return Ball(a, b.precision()) * b; }
inline Ball operator/(const Ball& a, long b) { return a / Ball(b, a.precision()); }
inline Ball operator/(long a, const Ball& b) { return Ball(a, b.precision()) / b; }

/// Exact scaling by 2^k.
inline Ball mul_2si(const Ball& a, long k) {
    Ball r(a.precision());
    mpfr_mul_2si(r.mid_mut().get(), a.mid().get(), k, MPFR_RNDN);
    mpfr_mul_2si(r.rad_mut().get(), a.rad().get(), k, MPFR_RNDU);
    return r;
}

inline Ball sqr(const Ball& a) {
    Ball r(a.precision());
    int t = mpfr_sqr(r.mid_mut().get(), a.mid().get(), MPFR_RNDN);
    // 2|m| r + r^2
    Real acc, term;
    mpfr_mul(acc.get(), detail::abs_up(a.mid()).get(), a.rad().get(), MPFR_RNDU);
    mpfr_mul_2ui(acc.get(), acc.get(), 1, MPFR_RNDU);
    mpfr_sqr(term.get(), a.rad().get(), MPFR_RNDU);
    mpfr_add(r.rad_mut().get(), acc.get(), term.get(), MPFR_RNDU);
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball pow(const Ball& base, unsigned long n) {
    Ball result(1, base.precision());
    Ball b = base;
    while (n != 0) {
        if (n & 1UL) result = result * b;
        n >>= 1;
        if (n != 0) b = sqr(b);
    }
    return result;
}

inline Ball abs(const Ball& a) {
    Ball r(a.precision());
    mpfr_abs(r.mid_mut().get(), a.mid().get(), MPFR_RNDN);
    mpfr_set(r.rad_mut().get(), a.rad().get(), MPFR_RNDU);
    return r;
}

inline Ball sqrt(const Ball& a) {
    if (mpfr_sgn(a.lower().get()) < 0) {
        throw invalid_argument("sqrt of a ball with negative part: " + a.to_string());
    }
    Ball r(a.precision());
    int t = mpfr_sqrt(r.mid_mut().get(), a.mid().get(), MPFR_RNDN);
    // |sqrt x - sqrt m| <= min(r / sqrt m, sqrt r)
    Real bound;
    mpfr_sqrt(bound.get(), a.rad().get(), MPFR_RNDU);
    if (mpfr_sgn(a.mid().get()) > 0) {
        Real root_lo, alt;
        mpfr_sqrt(root_lo.get(), a.mid().get(), MPFR_RNDD);
        mpfr_div(alt.get(), a.rad().get(), root_lo.get(), MPFR_RNDU);
        if (alt < bound) bound = alt;
    }
    r.rad_mut() = bound;
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball exp(const Ball& a) {
    Ball r(a.precision());
    int t = mpfr_exp(r.mid_mut().get(), a.mid().get(), MPFR_RNDN);
    // e^m (e^r - 1)
    Real em, er;
    mpfr_exp(em.get(), a.mid().get(), MPFR_RNDU);
    mpfr_expm1(er.get(), a.rad().get(), MPFR_RNDU);
    mpfr_mul(r.rad_mut().get(), em.get(), er.get(), MPFR_RNDU);
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball log(const Ball& a) {
    if (!a.is_positive()) {
        throw invalid_argument("log of a ball that is not strictly positive: " + a.to_string());
    }
    Ball r(a.precision());
    int t = mpfr_log(r.mid_mut().get(), a.mid().get(), MPFR_RNDN);
    // r / (m - r)
    Real den;
    mpfr_sub(den.get(), a.mid().get(), a.rad().get(), MPFR_RNDD);
    mpfr_div(r.rad_mut().get(), a.rad().get(), den.get(), MPFR_RNDU);
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

namespace detail {
// sin and cos are 1-Lipschitz and bounded by 1, so the propagated radius is min(r, 2).
inline void lipschitz_trig_radius(Ball& r, const Ball& a, int t) {
    Real two;
    mpfr_set_ui(two.get(), 2, MPFR_RNDU);
    r.rad_mut() = a.rad() < two ? a.rad() : two;
    add_rounding_error(r.rad_mut(), r.mid(), t);
}
}  // namespace detail

inline Ball sin(const Ball& a) {
    Ball r(a.precision());
    int t = mpfr_sin(r.mid_mut().get(), a.mid().get(), MPFR_RNDN);
    detail::lipschitz_trig_radius(r, a, t);
    return r;
}

inline Ball cos(const Ball& a) {
    Ball r(a.precision());
    int t = mpfr_cos(r.mid_mut().get(), a.mid().get(), MPFR_RNDN);
    detail::lipschitz_trig_radius(r, a, t);
    return r;
}

/// upper(a) < lower(b): holds for every choice of points in the two balls.
inline bool certainly_less(const Ball& a, const Ball& b) { return a.upper() < b.lower(); }
inline bool certainly_less_equal(const Ball& a, const Ball& b) { return a.upper() <= b.lower(); }

/// Complex ball in rectangular form: independent real balls for the two parts.
class ComplexBall {
public:
    Ball re;
    Ball im;

    explicit ComplexBall(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    ComplexBall(Ball real, Ball imag) : re(std::move(real)), im(std::move(imag)) {}

    mpfr_prec_t precision() const { return max_precision(re, im); }

    /// Upper bound on |z - center| for z in the ball.
    Real radius() const {
        Real r;
        mpfr_hypot(r.get(), re.rad().get(), im.rad().get(), MPFR_RNDU);
        return r;
    }

    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool overlaps(const ComplexBall& o) const { return re.overlaps(o.re) && im.overlaps(o.im); }
    bool contains(const ComplexBall& o) const { return re.contains(o.re) && im.contains(o.im); }

    ComplexBall inflated(long k) const { return {re.inflated(k), im.inflated(k)}; }

    /// Adds `e` to both component radii (a disc of radius e fits in that square).
    ComplexBall& add_error(const Real& e) {
        re.add_error(e);
        im.add_error(e);
        return *this;
    }

    std::string to_string(int digits = 20) const {
        return "(" + re.to_string(digits) + ") + (" + im.to_string(digits) + ")i";
    }
};

inline ComplexBall operator-(const ComplexBall& a) { return {-a.re, -a.im}; }
inline ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) { return {a.re - b.re, a.im - b.im}; }
inline ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexBall operator*(const ComplexBall& a, const Ball& s) { return {a.re * s, a.im * s}; }
inline ComplexBall operator*(const Ball& s, const ComplexBall& a) { return a * s; }
inline ComplexBall operator*(const ComplexBall& a, long s) { return {a.re * s, a.im * s}; }
inline ComplexBall operator+(const ComplexBall& a, long s) { return {a.re + s, a.im}; }
inline ComplexBall operator-(const ComplexBall& a, long s) { return {a.re - s, a.im}; }

inline ComplexBall conj(const ComplexBall& a) { return {a.re, -a.im}; }

inline ComplexBall sqr(const ComplexBall& a) {
    return {sqr(a.re) - sqr(a.im), mul_2si(a.re * a.im, 1)};
}

inline Ball norm(const ComplexBall& a) { return sqr(a.re) + sqr(a.im); }

inline ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
    Ball n = norm(b);
    ComplexBall num = a * conj(b);
    return {num.re / n, num.im / n};
}
inline ComplexBall operator/(const ComplexBall& a, const Ball& s) { return {a.re / s, a.im / s}; }

inline ComplexBall pow(const ComplexBall& base, unsigned long n) {
    ComplexBall result(Ball(1, base.precision()), Ball(0, base.precision()));
    ComplexBall b = base;
    while (n != 0) {
        if (n & 1UL) result = result * b;
        n >>= 1;
        if (n != 0) b = sqr(b);
    }
    return result;
}

/// |z| via ||z| - |c|| <= |z - c|.
inline Ball abs(const ComplexBall& a) {
    Ball r(a.precision());
    int t = mpfr_hypot(r.mid_mut().get(), a.re.mid().get(), a.im.mid().get(), MPFR_RNDN);
    r.rad_mut() = a.radius();
    detail::add_rounding_error(r.rad_mut(), r.mid(), t);
    return r;
}

inline ComplexBall exp(const ComplexBall& a) {
    Ball m = exp(a.re);
    return {m * cos(a.im), m * sin(a.im)};
}

}  // namespace smprod
