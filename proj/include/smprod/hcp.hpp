#pragma once

// Hilbert class polynomials H_D(x) = prod_{(a,b,c) in T_D} (x - j(tau(a,b,c))), built
// from certified root balls and rounded to exact integers, and the coefficient ratio
// invariants a_{i-1} a_{i+1} / a_i^2 that a product relation between two sets of
// conjugates must preserve.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "smprod/ball.hpp"
#include "smprod/error.hpp"
#include "smprod/jeval.hpp"
#include "smprod/qforms.hpp"

namespace smprod {

/// Monic polynomial with exact integer coefficients a_0..a_{h-1}; a_h = 1 is implied.
struct HilbertClassPoly {
    Discriminant delta;
    std::vector<mpz_class> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()); }

    /// a_i for 0 <= i <= h (a_h = 1).
    mpz_class coefficient(int i) const {
        if (i == degree()) return 1;
        return coeffs.at(static_cast<std::size_t>(i));
    }

    std::string to_string() const {
        std::string out = degree() == 1 ? "x" : "x^" + std::to_string(degree());
        for (int i = degree() - 1; i >= 0; --i) {
            const mpz_class& a = coeffs[static_cast<std::size_t>(i)];
            if (a == 0) continue;
            out += a < 0 ? " - " : " + ";
            mpz_class mag = abs(a);
            out += mag.get_str();
            if (i >= 2) out += "x^" + std::to_string(i);
            if (i == 1) out += "x";
        }
        return out;
    }

    friend bool operator==(const HilbertClassPoly& a, const HilbertClassPoly& b) {
        return a.delta == b.delta && a.coeffs == b.coeffs;
    }
};

/// Bits that guarantee coefficient rounding succeeds:
/// log2 prod (e^{pi sqrt|D| / a} + 2079) + h + 40, the product bounding every coefficient.
inline mpfr_prec_t required_precision(Discriminant d) {
    const auto forms = enumerate_forms(d);
    const double root = std::sqrt(static_cast<double>(d.magnitude()));
    double bits = 0;
    for (const auto& f : forms) {
        bits += std::log2(std::exp(M_PI * root / static_cast<double>(f.a)) + 2079.0);
    }
    return static_cast<mpfr_prec_t>(std::ceil(bits)) + static_cast<mpfr_prec_t>(forms.size()) + 40;
}

/// Expands prod (x - r_k); result[i] is the coefficient of x^i.
inline std::vector<ComplexBall> expand_from_roots(const std::vector<ComplexBall>& roots, mpfr_prec_t prec) {
    std::vector<ComplexBall> poly{ComplexBall(Ball(1, prec), Ball(0, prec))};
    for (const auto& r : roots) {
        std::vector<ComplexBall> next(poly.size() + 1, ComplexBall(Ball(0, prec), Ball(0, prec)));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] = next[i + 1] + poly[i];
            next[i] = next[i] - poly[i] * r;
        }
        poly = std::move(next);
    }
    return poly;
}

/// Certified conjugates j(tau(a,b,c)), in enumerate_forms order.
inline std::vector<ComplexBall> conjugate_roots(Discriminant d, mpfr_prec_t precision) {
    std::vector<ComplexBall> roots;
    for (const auto& f : enumerate_forms(d)) {
        roots.push_back(eval_j(FundamentalPoint::from_form(d, f), std::max<mpfr_prec_t>(precision, 64)));
    }
    return roots;
}

struct RoundingOutcome {
    bool ok = false;
    mpz_class value;
    double residual = 0;  // |center - round(center)|
};

/// Unique integer in the coefficient ball: real radius < 1/4 and containing round(center);
/// imaginary ball of radius < 1/4 containing 0.
inline RoundingOutcome round_coefficient(const ComplexBall& c) {
    RoundingOutcome out;
    Real quarter;
    mpfr_set_d(quarter.get(), 0.25, MPFR_RNDN);
    Real rounded(c.re.precision());
    mpfr_round(rounded.get(), c.re.mid().get());
    mpfr_get_z(out.value.get_mpz_t(), rounded.get(), MPFR_RNDN);
    Real diff(c.re.precision());
    mpfr_sub(diff.get(), c.re.mid().get(), rounded.get(), MPFR_RNDA);
    out.residual = std::abs(diff.to_double(MPFR_RNDA));
    out.ok = c.re.rad() < quarter && c.im.rad() < quarter && c.re.contains(out.value) && c.im.contains_zero();
    return out;
}

struct HcpBuildReport {
    mpfr_prec_t precision = 0;
    int attempts = 0;
    double max_residual = 0;
};

inline constexpr int hcp_max_retries = 4;

/// H_D with exact integer coefficients. Throws rounding_ambiguous if no attempt up to
/// required_precision * 2^4 isolates every coefficient.
inline HilbertClassPoly hilbert_class_poly(Discriminant d, HcpBuildReport* report = nullptr) {
    mpfr_prec_t precision = required_precision(d);
    for (int attempt = 0; attempt <= hcp_max_retries; ++attempt, precision *= 2) {
        const auto roots = conjugate_roots(d, precision);
        const auto poly = expand_from_roots(roots, std::max<mpfr_prec_t>(precision, 64) + 32);
        HilbertClassPoly out{d, {}};
        double max_residual = 0;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < poly.size() && ok; ++i) {
            RoundingOutcome r = round_coefficient(poly[i]);
            ok = r.ok;
            max_residual = std::max(max_residual, r.residual);
            out.coeffs.push_back(std::move(r.value));
        }
        if (ok) {
            if (report != nullptr) *report = {precision, attempt + 1, max_residual};
            return out;
        }
    }
    throw rounding_ambiguous("Hilbert class polynomial for D=" + std::to_string(d.value()) +
                             ": coefficient balls still wider than 1/4 after precision escalation");
}

/// H(z) by Horner's rule in ball arithmetic.
inline ComplexBall evaluate(const HilbertClassPoly& p, const ComplexBall& z) {
    const mpfr_prec_t prec = z.precision();
    ComplexBall acc(Ball(1, prec), Ball(0, prec));
    for (int i = p.degree() - 1; i >= 0; --i) {
        acc = acc * z;
        acc.re = acc.re + Ball::exact(p.coefficient(i), prec);
    }
    return acc;
}

struct HcpVerification {
    bool degree_matches = false;
    bool roots_vanish = false;
    bool irreducibility_checked = false;
    bool irreducible = false;

    bool ok() const { return degree_matches && roots_vanish && (!irreducibility_checked || irreducible); }
};

namespace detail {

// For h <= 4 a proper monic factor over Z has degree <= h/2 and its roots are a subset of
// the conjugates; it is ruled out when some coefficient of the subset product is a ball
// free of integers.
inline bool no_integer_factor(const std::vector<ComplexBall>& roots, mpfr_prec_t prec) {
    const int h = static_cast<int>(roots.size());
    for (unsigned mask = 1; mask < (1U << h); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size > h / 2) continue;
        std::vector<ComplexBall> subset;
        for (int k = 0; k < h; ++k) {
            if (mask & (1U << k)) subset.push_back(roots[static_cast<std::size_t>(k)]);
        }
        const auto poly = expand_from_roots(subset, prec);
        bool could_be_integral = true;
        for (std::size_t i = 0; i + 1 < poly.size() && could_be_integral; ++i) {
            const ComplexBall& c = poly[i];
            Real lo_int(c.re.precision()), hi_int(c.re.precision());
            mpfr_ceil(lo_int.get(), c.re.lower().get());
            mpfr_floor(hi_int.get(), c.re.upper().get());
            could_be_integral = lo_int <= hi_int && c.im.contains_zero();
        }
        if (could_be_integral) return false;
    }
    return true;
}

}  // namespace detail

inline constexpr int irreducibility_degree_limit = 4;

/// Recomputes the conjugates and checks degree, vanishing at every root, and (h <= 4)
/// the absence of integer factors.
inline HcpVerification verify_hilbert_poly(const HilbertClassPoly& p) {
    HcpVerification v;
    v.degree_matches = p.degree() == class_number(p.delta);
    if (!v.degree_matches) return v;
    const mpfr_prec_t prec = required_precision(p.delta);
    const auto roots = conjugate_roots(p.delta, prec);
    v.roots_vanish = std::all_of(roots.begin(), roots.end(),
                                 [&](const ComplexBall& r) { return evaluate(p, r).contains_zero(); });
    if (p.degree() >= 2 && p.degree() <= irreducibility_degree_limit) {
        v.irreducibility_checked = true;
        v.irreducible = detail::no_integer_factor(roots, std::max<mpfr_prec_t>(prec, 64) + 32);
    }
    return v;
}

/// a_{i-1} a_{i+1} / a_i^2, with the tags for a zero denominator.
struct RatioEntry {
    enum class Kind { finite, infinite, indeterminate };
    Kind kind = Kind::finite;
    mpq_class value;

    friend bool operator==(const RatioEntry& a, const RatioEntry& b) {
        return a.kind == b.kind && (a.kind != Kind::finite || a.value == b.value);
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::infinite: return "INFINITE";
            case Kind::indeterminate: return "INDETERMINATE";
            default: return value.get_str();
        }
    }
};

using RatioVector = std::vector<RatioEntry>;

/// Entries r_1..r_{h-1}; r_i = a_{i-1} a_{i+1} / a_i^2 with a_h = 1.
inline RatioVector ratio_vector(const HilbertClassPoly& p) {
    const int h = p.degree();
    if (h < 2) throw invalid_argument("ratio_vector requires degree >= 2");
    RatioVector out;
    for (int i = 1; i < h; ++i) {
        const mpz_class num = p.coefficient(i - 1) * p.coefficient(i + 1);
        const mpz_class den = p.coefficient(i) * p.coefficient(i);
        RatioEntry e;
        if (den == 0) {
            e.kind = num == 0 ? RatioEntry::Kind::indeterminate : RatioEntry::Kind::infinite;
        } else {
            e.value = mpq_class(num, den);
            e.value.canonicalize();
        }
        out.push_back(std::move(e));
    }
    return out;
}

/// Necessary condition for a constant A with every root of p times a root of q equal to A:
/// r_i(p) = r_{h-i}(q) for i = 1..h-1.
inline bool product_compatible(const HilbertClassPoly& p, const HilbertClassPoly& q) {
    if (p.degree() != q.degree()) {
        throw degree_mismatch("product_compatible: degrees " + std::to_string(p.degree()) + " and " +
                              std::to_string(q.degree()));
    }
    const RatioVector rp = ratio_vector(p);
    RatioVector rq = ratio_vector(q);
    std::reverse(rq.begin(), rq.end());
    return rp == rq;
}

/// Scientific rendering of an exact rational with `significant` digits, e.g. "-3.32e-03".
inline std::string scientific(const mpq_class& q, int significant = 3) {
    Real r(256);
    mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
    char* buf = nullptr;
    if (mpfr_asprintf(&buf, "%.*Re", significant - 1, r.get()) < 0) throw error("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

}  // namespace smprod
