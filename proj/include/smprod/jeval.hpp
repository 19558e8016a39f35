#pragma once

// Rigorous evaluation of the modular j-invariant on the standard fundamental domain,
// plus numeric checks of the q-approximation and near-zeta6 estimates.
//
// j = 1728 E4^3 / (E4^3 - E6^2) with
//   E4 = 1 + 240 sum sigma_3(n) q^n,   E6 = 1 - 504 sum sigma_5(n) q^n,
// truncated after N terms. For k >= 2, sigma_k(n) <= zeta(k) n^k <= 2 n^k, so each
// truncated tail is at most 2 sum_{n>N} n^5 |q|^n, a geometric-dominated series.

#include <mpfr.h>
#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "smprod/ball.hpp"
#include "smprod/error.hpp"
#include "smprod/qforms.hpp"

namespace smprod {

/// rational + coeff * sqrt(radicand); exact coordinates that can be rendered at any precision.
struct QuadraticSurd {
    mpq_class rational{0};
    mpq_class coeff{0};
    mpq_class radicand{0};

    static QuadraticSurd of(const mpq_class& r) { return {r, 0, 0}; }

    Ball to_ball(mpfr_prec_t prec) const {
        Ball out = Ball::from_rational(rational, prec);
        if (coeff != 0) {
            if (radicand < 0) throw invalid_argument("negative radicand in quadratic surd");
            out = out + Ball::from_rational(coeff, prec) * sqrt(Ball::from_rational(radicand, prec));
        }
        return out;
    }
};

enum class Half { plus, minus, boundary };

inline const char* to_string(Half h) {
    switch (h) {
        case Half::plus: return "D+";
        case Half::minus: return "D-";
        default: return "boundary";
    }
}

/// A point of the closed fundamental domain {Im z > 0, |Re z| <= 1/2, |z| >= 1}.
///
/// Points built from exact coordinates are re-rendered at whatever precision a caller
/// asks for; points built from a ball keep that ball's accuracy. `half` is plus when
/// Re z > 0, minus when Re z < 0 and boundary when the ball touches the imaginary axis.
class FundamentalPoint {
public:
    static FundamentalPoint from_surds(QuadraticSurd re, QuadraticSurd im) {
        auto gen = [re = std::move(re), im = std::move(im)](mpfr_prec_t prec) {
            return ComplexBall(re.to_ball(prec), im.to_ball(prec));
        };
        return FundamentalPoint(std::move(gen));
    }

    static FundamentalPoint from_rationals(const mpq_class& re, const mpq_class& im) {
        return from_surds(QuadraticSurd::of(re), QuadraticSurd::of(im));
    }

    static FundamentalPoint from_doubles(double re, double im) {
        return from_rationals(mpq_class(re), mpq_class(im));
    }

    /// tau(a,b,c) = (b + sqrt(D)) / 2a.
    static FundamentalPoint from_form(Discriminant d, const FormTriple& f) {
        if (f.discriminant() != d.value()) {
            throw invalid_argument("form " + f.to_string() + " does not have discriminant " +
                                   std::to_string(d.value()));
        }
        mpq_class re(f.b, 2 * f.a);
        re.canonicalize();
        mpq_class coeff(1, 2 * f.a);
        coeff.canonicalize();
        return from_surds(QuadraticSurd::of(re), QuadraticSurd{0, coeff, mpq_class(d.magnitude())});
    }

    static FundamentalPoint from_ball(ComplexBall z) {
        auto gen = [z = std::move(z)](mpfr_prec_t) { return z; };
        return FundamentalPoint(std::move(gen));
    }

    /// zeta6 = (1 + sqrt(-3)) / 2.
    static FundamentalPoint zeta6() {
        return from_surds(QuadraticSurd::of(mpq_class(1, 2)), QuadraticSurd{0, mpq_class(1, 2), 3});
    }

    static FundamentalPoint i() { return from_rationals(0, 1); }

    ComplexBall at(mpfr_prec_t prec) const { return gen_(prec); }
    Half half() const { return half_; }

private:
    explicit FundamentalPoint(std::function<ComplexBall(mpfr_prec_t)> gen) : gen_(std::move(gen)) {
        const ComplexBall z = gen_(128);
        if (!z.im.is_positive()) throw outside_domain("Im z must be positive: " + z.to_string());
        const Ball half_ball = Ball::from_rational(mpq_class(1, 2), 128);
        if (certainly_less(half_ball, abs(z.re))) {
            throw outside_domain("|Re z| > 1/2: " + z.to_string());
        }
        if (certainly_less(norm(z), Ball(1, 128))) throw outside_domain("|z| < 1: " + z.to_string());
        half_ = z.re.is_positive() ? Half::plus : (z.re.is_negative() ? Half::minus : Half::boundary);
    }

    std::function<ComplexBall(mpfr_prec_t)> gen_;
    Half half_ = Half::boundary;
};

/// Maps z (Im z > 0) into the closed fundamental domain by z -> z + n and z -> -1/z.
inline ComplexBall reduce_to_fundamental_domain(ComplexBall z) {
    if (!z.im.is_positive()) throw outside_domain("Im z must be positive");
    for (int iter = 0; iter < 10000; ++iter) {
        mpz_class shift;
        Real shifted = z.re.mid();
        mpfr_round(shifted.get(), z.re.mid().get());
        mpfr_get_z(shift.get_mpz_t(), shifted.get(), MPFR_RNDN);
        if (shift != 0) z.re = z.re - Ball::exact(shift, z.precision());
        if (mpfr_cmp_ui(norm(z).mid().get(), 1) >= 0) return z;
        const ComplexBall one(Ball(1, z.precision()), Ball(0, z.precision()));
        z = -(one / z);
    }
    throw precision_exhausted("reduction to the fundamental domain did not terminate");
}

/// q = exp(2 pi i z).
inline ComplexBall q_of(const ComplexBall& z, mpfr_prec_t prec) {
    if (!z.im.is_positive()) throw outside_domain("q_of requires Im z > 0");
    const Ball two_pi = mul_2si(Ball::pi(prec), 1);
    const Ball modulus = exp(-(two_pi * z.im));
    const Ball angle = two_pi * z.re;
    return {modulus * cos(angle), modulus * sin(angle)};
}

inline ComplexBall q_of(const FundamentalPoint& z, mpfr_prec_t prec) { return q_of(z.at(prec), prec); }

namespace detail {

/// Upper bound on 2 sum_{n > terms} n^5 qmax^n; requires the ratio bound to be below 1.
inline Real eisenstein_tail_bound(long terms, const Real& qmax) {
    Real n1, ratio, lead, tmp;
    mpfr_set_si(n1.get(), terms + 1, MPFR_RNDU);
    // ratio = ((N+2)/(N+1))^5 qmax
    mpfr_set_si(ratio.get(), terms + 2, MPFR_RNDU);
    mpfr_div_si(ratio.get(), ratio.get(), terms + 1, MPFR_RNDU);
    mpfr_pow_ui(ratio.get(), ratio.get(), 5, MPFR_RNDU);
    mpfr_mul(ratio.get(), ratio.get(), qmax.get(), MPFR_RNDU);
    if (mpfr_cmp_ui(ratio.get(), 1) >= 0) {
        Real inf;
        mpfr_set_inf(inf.get(), 1);
        return inf;
    }
    mpfr_pow_ui(lead.get(), n1.get(), 5, MPFR_RNDU);
    mpfr_pow_ui(tmp.get(), qmax.get(), static_cast<unsigned long>(terms + 1), MPFR_RNDU);
    mpfr_mul(lead.get(), lead.get(), tmp.get(), MPFR_RNDU);
    mpfr_mul_2ui(lead.get(), lead.get(), 1, MPFR_RNDU);
    // / (1 - ratio), denominator rounded down
    mpfr_ui_sub(tmp.get(), 1, ratio.get(), MPFR_RNDD);
    mpfr_div(lead.get(), lead.get(), tmp.get(), MPFR_RNDU);
    return lead;
}

/// Smallest N whose tail bound is below 2^-(bits): estimated in doubles, then certified.
inline long eisenstein_terms(const Real& qmax, mpfr_prec_t bits) {
    const double lq = std::log(qmax.to_double(MPFR_RNDU));
    long n = 1;
    while (n < 100000 && std::log(2.0) + 5.0 * std::log(n + 1.0) + (n + 1.0) * lq > -static_cast<double>(bits) * std::log(2.0)) {
        ++n;
    }
    Real target;
    mpfr_set_ui_2exp(target.get(), 1, -bits, MPFR_RNDD);
    while (n < 100000 && !(eisenstein_tail_bound(n, qmax) <= target)) ++n;
    if (n >= 100000) throw outside_domain("|q| too close to 1 for the Eisenstein series");
    return n;
}

/// sigma_k(n) for n = 0..limit (index 0 unused).
inline std::vector<mpz_class> divisor_power_sums(long limit, unsigned long k) {
    std::vector<mpz_class> sigma(static_cast<std::size_t>(limit + 1), 0);
    for (long d = 1; d <= limit; ++d) {
        mpz_class dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), k);
        for (long m = d; m <= limit; m += d) sigma[static_cast<std::size_t>(m)] += dk;
    }
    return sigma;
}

/// sum_{n=1}^{N} coeff[n] q^n by Horner's rule.
inline ComplexBall q_series(const std::vector<mpz_class>& coeff, const ComplexBall& q, mpfr_prec_t prec) {
    const long n_max = static_cast<long>(coeff.size()) - 1;
    ComplexBall acc(Ball::exact(coeff[static_cast<std::size_t>(n_max)], prec), Ball(0, prec));
    for (long n = n_max - 1; n >= 1; --n) {
        acc = acc * q;
        acc.re = acc.re + Ball::exact(coeff[static_cast<std::size_t>(n)], prec);
    }
    return acc * q;
}

struct EisensteinPair {
    ComplexBall e4;
    ComplexBall e6;
};

inline EisensteinPair eisenstein_e4_e6(const ComplexBall& q, mpfr_prec_t prec) {
    Real qmax;
    mpfr_set(qmax.get(), abs(q).upper().get(), MPFR_RNDU);
    if (mpfr_cmp_d(qmax.get(), 0.1) > 0) {
        throw outside_domain("|q| = " + qmax.to_string(6) + " exceeds the fundamental-domain range");
    }
    const long terms = eisenstein_terms(qmax, prec + 16);
    const Real tail = eisenstein_tail_bound(terms, qmax);

    ComplexBall s3 = q_series(divisor_power_sums(terms, 3), q, prec);
    ComplexBall s5 = q_series(divisor_power_sums(terms, 5), q, prec);
    s3.add_error(tail);
    s5.add_error(tail);

    ComplexBall e4 = s3 * 240 + 1;
    ComplexBall e6 = (-s5) * 504 + 1;
    return {std::move(e4), std::move(e6)};
}

inline ComplexBall j_from_q_series(const ComplexBall& z, mpfr_prec_t prec) {
    const ComplexBall q = q_of(z, prec);
    const auto [e4, e6] = eisenstein_e4_e6(q, prec);
    const ComplexBall e4_cubed = e4 * sqr(e4);
    const ComplexBall denom = e4_cubed - sqr(e6);
    if (!norm(denom).is_positive()) {
        throw precision_exhausted("E4^3 - E6^2 ball contains zero");
    }
    return (e4_cubed * 1728) / denom;
}

/// radius <= 2^-bits * max(1, |center|)
inline bool meets_accuracy(const ComplexBall& value, mpfr_prec_t bits) {
    Real scale;
    mpfr_hypot(scale.get(), value.re.mid().get(), value.im.mid().get(), MPFR_RNDD);
    if (mpfr_cmp_ui(scale.get(), 1) < 0) mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
    mpfr_mul_2si(scale.get(), scale.get(), -bits, MPFR_RNDD);
    return value.radius() <= scale;
}

}  // namespace detail

inline constexpr mpfr_prec_t j_guard_bits = 32;
inline constexpr int j_max_retries = 4;

/// log2 |q|^-1 = 2 pi Im z / log 2, rounded up.
inline mpfr_prec_t height_bits(double im_upper) {
    return static_cast<mpfr_prec_t>(std::ceil(2.0 * M_PI * im_upper / std::log(2.0)));
}

/// Ball containing j(z) with radius at most 2^-precision * max(1, |j(z)|).
///
/// E4^3 - E6^2 = 1728 q + O(q^2) loses log2 |q|^-1 bits to cancellation, so the working
/// precision is precision + height + guard, with guard = 32 doubling on each retry.
inline ComplexBall eval_j(const FundamentalPoint& z, mpfr_prec_t precision) {
    if (precision < 64) throw invalid_argument("eval_j: precision must be at least 64 bits");
    const mpfr_prec_t height = height_bits(z.at(64).im.upper_double());
    mpfr_prec_t guard = j_guard_bits;
    for (int attempt = 0; attempt <= j_max_retries; ++attempt, guard *= 2) {
        const mpfr_prec_t wp = precision + height + guard;
        try {
            ComplexBall value = detail::j_from_q_series(z.at(wp), wp);
            if (detail::meets_accuracy(value, precision)) return value;
        } catch (const precision_exhausted&) {
            // retry with more guard bits
        }
    }
    throw precision_exhausted("eval_j: accuracy 2^-" + std::to_string(precision) +
                              " not reached after " + std::to_string(j_max_retries) + " retries");
}

/// Enough bits to resolve ||j| - |q^-1|| against the size of |q^-1| = e^{2 pi Im z}.
inline mpfr_prec_t precision_for_height(double im_upper) {
    return std::max<mpfr_prec_t>(128, height_bits(im_upper) + 96);
}

/// ||j(z)| - |q_z^-1||, as a ball.
inline Ball check_q_approx(const FundamentalPoint& z) {
    const mpfr_prec_t prec = precision_for_height(z.at(64).im.upper_double());
    const ComplexBall zb = z.at(prec + j_guard_bits);
    const ComplexBall j = eval_j(z, prec);
    const Ball q_inv_abs = exp(mul_2si(Ball::pi(prec), 1) * zb.im);
    return abs(abs(j) - q_inv_abs);
}

enum class Zeta6Regime { far, near };

struct NearZeta6Check {
    Ball abs_j;
    Ball distance;  // |z - zeta6|
    Zeta6Regime regime;
    /// far: |j| >= 4.4e-5; near: 44000 d^3 <= |j| <= 47000 d^3; both ball-safe.
    bool holds;
};

inline NearZeta6Check check_near_zeta6(const FundamentalPoint& z, mpfr_prec_t precision = 256) {
    if (z.half() == Half::minus) throw invalid_argument("check_near_zeta6 requires z in D+");
    const ComplexBall zb = z.at(precision + j_guard_bits);
    const ComplexBall zeta = FundamentalPoint::zeta6().at(precision + j_guard_bits);
    Ball distance = abs(zb - zeta);
    Ball abs_j = abs(eval_j(z, precision));
    const Ball threshold = Ball::from_rational(mpq_class(1, 1000), precision);

    if (!certainly_less(distance, threshold)) {
        const Ball floor_value = Ball::from_rational(mpq_class(44, 1000000), precision);
        const bool holds = certainly_less_equal(floor_value, abs_j);
        return {std::move(abs_j), std::move(distance), Zeta6Regime::far, holds};
    }
    const Ball cube = pow(distance, 3);
    const bool holds = certainly_less_equal(cube * 44000, abs_j) && certainly_less_equal(abs_j, cube * 47000);
    return {std::move(abs_j), std::move(distance), Zeta6Regime::near, holds};
}

/// (|A| R^l + B) / R^{l+1}: the coefficient in |f(z) - A(z-a)^l| <= C |z-a|^{l+1}
/// for f holomorphic on |z - a| <= R with |f| <= B and a zero of order l at a.
template <typename T>
T schwarz_coefficient(T a_mag, T radius, T bound, int order) {
    if (!(radius > T(0))) throw invalid_argument("schwarz_coefficient: R must be positive");
    if (bound < T(0) || order < 0) throw invalid_argument("schwarz_coefficient: need B >= 0 and l >= 0");
    using std::pow;
    return (a_mag * pow(radius, order) + bound) / pow(radius, order + 1);
}

/// Ball version of the same bound, rounded so that the returned upper endpoint is safe.
inline Ball schwarz_coefficient(const Ball& a_mag, const Ball& radius, const Ball& bound, int order) {
    if (!radius.is_positive()) throw invalid_argument("schwarz_coefficient: R must be positive");
    if (order < 0) throw invalid_argument("schwarz_coefficient: l must be non-negative");
    const auto l = static_cast<unsigned long>(order);
    return (a_mag * pow(radius, l) + bound) / pow(radius, l + 1);
}

/// Gamma(1/3) as a ball. mpfr_gamma is correctly rounded at the representable point
/// x = RN(1/3); |Gamma'| < 16 on [0.3, 0.4] covers the step from x to 1/3.
inline Ball gamma_one_third(mpfr_prec_t prec) {
    const Ball third = Ball::from_rational(mpq_class(1, 3), prec);
    Ball g(prec);
    int t = mpfr_gamma(g.mid_mut().get(), third.mid().get(), MPFR_RNDN);
    Real shift;
    mpfr_mul_ui(shift.get(), third.rad().get(), 16, MPFR_RNDU);
    g.rad_mut() = shift;
    detail::add_rounding_error(g.rad_mut(), g.mid(), t);
    return g;
}

/// j'''(zeta6) = -162 Gamma(1/3)^18 pi^-9 sqrt(-1).
inline ComplexBall third_derivative_at_zeta6(mpfr_prec_t precision) {
    if (precision < 64) throw invalid_argument("precision must be at least 64 bits");
    const mpfr_prec_t wp = precision + 32;
    const Ball magnitude = Ball(162, wp) * pow(gamma_one_third(wp), 18) / pow(Ball::pi(wp), 9);
    return {Ball(0, wp), -magnitude};
}

}  // namespace smprod
