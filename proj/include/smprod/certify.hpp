#pragma once

// Finite case analysis showing that j(tau1) j(tau2) in Q^x forces either two rational
// singular moduli or a conjugate pair of degree 2.
//
// With h = h(D1) = h(D2) >= 3 the product A is squeezed between
//   |A| >= 3000 e^{pi |D1|^{1/2}} min{1e-8, |D2|^-3}
// and case-specific upper bounds built from |j(tau)| <= e^{pi sqrt|D| / a} + 2079.
// The bounds leave finitely many discriminants, each closed by an exact coefficient
// ratio identity on its Hilbert class polynomial. h = 1 and h = 2 are handled from the
// explicit polynomials.
//
// All comparisons are made on balls: a lower bound is compared through its lower
// endpoint and an upper bound through its upper endpoint.

#include <gmpxx.h>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smprod/ball.hpp"
#include "smprod/error.hpp"
#include "smprod/hcp.hpp"
#include "smprod/qforms.hpp"

namespace smprod {

using ordered_json = nlohmann::ordered_json;
using HcpProvider = std::function<HilbertClassPoly(Discriminant)>;

inline HcpProvider default_hcp_provider() {
    return [](Discriminant d) { return hilbert_class_poly(d); };
}

/// Range of the finite scans standing in for the literature's complete class number lists.
inline constexpr long certificate_scan_bound = 10000;
inline constexpr mpfr_prec_t bound_precision = 128;

// ---------------------------------------------------------------------------------------
// Bounds

namespace bounds {

/// e^{c pi sqrt(x)} for rational c.
inline Ball exp_pi_sqrt(const mpq_class& c, long x, mpfr_prec_t prec) {
    return exp(Ball::from_rational(c, prec) * Ball::pi(prec) * sqrt(Ball(x, prec)));
}

inline Ball decimal(const char* text, mpfr_prec_t prec) { return Ball::from_decimal(text, prec); }

/// min{1e-8, x^-3}, with the branch chosen exactly: x^-3 < 1e-8 iff x^3 > 10^8.
inline Ball min_factor(long x, mpfr_prec_t prec) {
    const mpz_class cube = mpz_class(x) * x * x;
    if (cube > 100000000) return Ball::from_rational(mpq_class(mpz_class(1), cube), prec);
    return Ball::from_rational(mpq_class(1, 100000000), prec);
}

inline bool uses_cube_branch(long x) { return mpz_class(x) * x * x > 100000000; }

/// 3000 e^{pi sqrt(x1)} min{1e-8, x2^-3}.
inline Ball lower_value(long x1, long x2, mpfr_prec_t prec = bound_precision) {
    return Ball(3000, prec) * exp_pi_sqrt(1, x1, prec) * min_factor(x2, prec);
}

/// (e^{pi sqrt(x1) / a1} + 2079)(e^{pi sqrt(x2) / a2} + 2079).
inline Ball conjugate_pair_bound(long x1, long a1, long x2, long a2, mpfr_prec_t prec = bound_precision) {
    return (exp_pi_sqrt(mpq_class(1, a1), x1, prec) + 2079) * (exp_pi_sqrt(mpq_class(1, a2), x2, prec) + 2079);
}

/// 1.11 e^{(2 pi / 3) sqrt x}
inline Ball equal_variant1(long x, mpfr_prec_t prec = bound_precision) {
    return decimal("1.11", prec) * exp_pi_sqrt(mpq_class(2, 3), x, prec);
}

/// c e^{(5 pi / 6) sqrt x}, c = 1.001 (or 1.01)
inline Ball equal_variant2(long x, const char* constant = "1.001", mpfr_prec_t prec = bound_precision) {
    return decimal(constant, prec) * exp_pi_sqrt(mpq_class(5, 6), x, prec);
}

/// 2.4 e^{(7 pi / 6) sqrt x}
inline Ball four_delta_upper(long x, mpfr_prec_t prec = bound_precision) {
    return decimal("2.4", prec) * exp_pi_sqrt(mpq_class(7, 6), x, prec);
}

/// 3000 e^{2 pi sqrt x} min{1e-8, x^-3}, the lower bound with D1 = 4D, D2 = D.
inline Ball four_delta_lower(long x, mpfr_prec_t prec = bound_precision) { return lower_value(4 * x, x, prec); }

/// 1.005 e^{(pi/3) sqrt x1 + (pi/2) sqrt x2}
inline Ball distinct_upper(long x1, long x2, mpfr_prec_t prec = bound_precision) {
    return decimal("1.005", prec) * exp_pi_sqrt(mpq_class(1, 3), x1, prec) * exp_pi_sqrt(mpq_class(1, 2), x2, prec);
}

/// (2 pi / 3) sqrt x + log(3000 / 1.005)
inline Ball distinct_lhs(long x, mpfr_prec_t prec = bound_precision) {
    const Ball sq = sqrt(Ball(x, prec));
    return Ball::from_rational(mpq_class(2, 3), prec) * Ball::pi(prec) * sq + log(Ball(3000, prec) / decimal("1.005", prec));
}

/// (pi / 2) sqrt x + max{8 log 10, 3 log x}
inline Ball distinct_rhs(long x, mpfr_prec_t prec = bound_precision) {
    const Ball sq = sqrt(Ball(x, prec));
    const Ball tail = uses_cube_branch(x) ? Ball(3, prec) * log(Ball(x, prec)) : Ball(8, prec) * log(Ball(10, prec));
    return mul_2si(Ball::pi(prec) * sq, -1) + tail;
}

inline std::string down(const Ball& b, int digits = 20) { return b.lower().to_string(digits, MPFR_RNDD); }
inline std::string up(const Ball& b, int digits = 20) { return b.upper().to_string(digits, MPFR_RNDU); }

}  // namespace bounds

/// 3000 e^{pi |D1|^{1/2}} min{1e-8, |D2|^-3}; valid for |D1| >= 23.
inline Ball lower_bound(Discriminant d1, Discriminant d2, mpfr_prec_t prec = bound_precision) {
    if (d1.magnitude() < 23) {
        throw invalid_argument("lower_bound requires |D1| >= 23, got " + std::to_string(d1.value()));
    }
    return bounds::lower_value(d1.magnitude(), d2.magnitude(), prec);
}

/// Whether the equal-discriminant upper bound `variant` (1 or 2) is available for D.
///   1: |D| >= 103, h > 4 if D = 8,12 mod 16, h > 6 if D = 1 mod 8.
///   2: |D| >= 399, h > 4 if D = 1 mod 8.
inline bool upper_bound_variant_applies(Discriminant d, int variant, int h) {
    const bool one_mod_8 = d.mod(8) == 1;
    const bool eight_twelve = d.mod(16) == 8 || d.mod(16) == 12;
    if (variant == 1) {
        return d.magnitude() >= 103 && (!eight_twelve || h > 4) && (!one_mod_8 || h > 6);
    }
    if (variant == 2) return d.magnitude() >= 399 && (!one_mod_8 || h > 4);
    throw invalid_argument("upper bound variant must be 1 or 2");
}

/// 1.11 e^{(2pi/3)|D|^{1/2}} (variant 1) or 1.001 e^{(5pi/6)|D|^{1/2}} (variant 2);
/// nullopt when the variant does not apply.
inline std::optional<Ball> upper_bound_equal(Discriminant d, int variant, mpfr_prec_t prec = bound_precision) {
    if (!upper_bound_variant_applies(d, variant, class_number(d))) return std::nullopt;
    return variant == 1 ? bounds::equal_variant1(d.magnitude(), prec) : bounds::equal_variant2(d.magnitude(), "1.001", prec);
}

// ---------------------------------------------------------------------------------------
// Trusted field data

/// Number fields Q(j(tau)) shared by orders in different imaginary quadratic fields,
/// with every discriminant realising each field.
struct FieldTableEntry {
    std::string field;
    int degree = 0;
    std::vector<long> discriminants;
};

inline std::vector<FieldTableEntry> field_table() {
    std::vector<FieldTableEntry> rows = {
        {"Q", 1, {-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163}},
        {"Q(sqrt2)", 2, {-24, -32, -64, -88}},
        {"Q(sqrt3)", 2, {-36, -48}},
        {"Q(sqrt5)", 2, {-15, -20, -35, -40, -60, -75, -100, -115, -235}},
        {"Q(sqrt13)", 2, {-52, -91, -403}},
        {"Q(sqrt17)", 2, {-51, -187}},
        {"Q(sqrt2,sqrt3)", 4, {-96, -192, -288}},
        {"Q(sqrt3,sqrt5)", 4, {-180, -240}},
        {"Q(sqrt5,sqrt13)", 4, {-195, -520, -715}},
        {"Q(sqrt2,sqrt5)", 4, {-120, -160, -280, -760}},
        {"Q(sqrt5,sqrt17)", 4, {-340, -595}},
        {"Q(sqrt2,sqrt3,sqrt5)", 8, {-480, -960}},
    };
    for (const auto& row : rows) {
        for (long d : row.discriminants) {
            if (class_number(Discriminant(d)) != row.degree) {
                throw certification_failure("field table entry " + row.field + ": h(" + std::to_string(d) +
                                            ") != " + std::to_string(row.degree));
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------------------
// Reports

enum class CaseId { h1, h2, equal_disc, four_delta, distinct_fields };
enum class Verdict { excluded_by_bounds, excluded_by_ratio, survives };

inline const char* to_string(CaseId id) {
    switch (id) {
        case CaseId::h1: return "H1";
        case CaseId::h2: return "H2";
        case CaseId::equal_disc: return "EQUAL_DISC";
        case CaseId::four_delta: return "FOUR_DELTA";
        default: return "DISTINCT_FIELDS";
    }
}

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::excluded_by_bounds: return "EXCLUDED_BY_BOUNDS";
        case Verdict::excluded_by_ratio: return "EXCLUDED_BY_RATIO";
        default: return "SURVIVES";
    }
}

struct CandidateRecord {
    std::string label;
    Verdict verdict = Verdict::survives;
    ordered_json data = ordered_json::object();
};

struct CaseReport {
    CaseId id = CaseId::h1;
    std::vector<CandidateRecord> candidates;
    ordered_json checks = ordered_json::object();
    std::vector<std::string> failures;  // empty iff the case closes
    std::vector<std::string> trusted;

    bool closed() const { return failures.empty(); }

    std::size_t survivors() const {
        return static_cast<std::size_t>(std::count_if(candidates.begin(), candidates.end(),
                                                      [](const auto& c) { return c.verdict == Verdict::survives; }));
    }

    void require(bool condition, const std::string& what) {
        if (!condition) failures.push_back(what);
    }

    ordered_json to_json() const {
        ordered_json j;
        j["case"] = to_string(id);
        j["closed"] = closed();
        j["failures"] = failures;
        j["trusted"] = trusted;
        j["checks"] = checks;
        ordered_json cands = ordered_json::array();
        for (const auto& c : candidates) {
            ordered_json r;
            r["label"] = c.label;
            r["verdict"] = to_string(c.verdict);
            r["data"] = c.data;
            cands.push_back(std::move(r));
        }
        j["survivors"] = survivors();
        j["candidates"] = std::move(cands);
        return j;
    }
};

namespace detail {

inline ordered_json ratio_json(const RatioVector& r) {
    ordered_json out = ordered_json::array();
    for (const auto& e : r) out.push_back(e.to_string());
    return out;
}

inline ordered_json coeffs_json(const HilbertClassPoly& p) {
    ordered_json out = ordered_json::array();
    for (const auto& c : p.coeffs) out.push_back(c.get_str());
    return out;
}

/// Palindromic ratio identity r_i = r_{h-i}, required when two conjugates of one
/// discriminant have a rational product.
inline bool palindromic_ratios(const RatioVector& r) {
    return std::equal(r.begin(), r.end(), r.rbegin());
}

}  // namespace detail

// ---------------------------------------------------------------------------------------
// h = 1

/// All unordered pairs of nonzero rational singular moduli; D = -3 drops out (j = 0).
inline CaseReport check_h1_case(const HcpProvider& hcp, long scan_bound = certificate_scan_bound) {
    CaseReport report;
    report.id = CaseId::h1;
    const auto discs = discriminants_with_class_number(1, scan_bound);
    report.checks["scan_bound"] = scan_bound;
    report.checks["discriminant_count"] = discs.size();
    report.require(discs.size() == 13, "expected 13 discriminants of class number 1");

    std::vector<std::pair<long, mpz_class>> values;
    ordered_json js = ordered_json::array();
    for (const auto& d : discs) {
        const auto p = hcp(d);
        report.require(p.degree() == 1, "H_D not linear for D=" + std::to_string(d.value()));
        const mpz_class j = -p.coefficient(0);
        js.push_back({{"delta", d.value()}, {"j", j.get_str()}});
        if (j == 0) continue;
        values.emplace_back(d.value(), j);
    }
    report.checks["j_values"] = std::move(js);
    report.require(values.size() == 12, "expected 12 nonzero rational singular moduli");

    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t k = i; k < values.size(); ++k) {
            const mpz_class a = values[i].second * values[k].second;
            CandidateRecord c;
            c.label = "{" + std::to_string(values[i].first) + "," + std::to_string(values[k].first) + "}";
            c.verdict = Verdict::survives;
            c.data["A"] = a.get_str();
            report.candidates.push_back(std::move(c));
        }
    }
    report.require(report.candidates.size() == 78, "expected 78 unordered rational pairs");
    report.trusted.push_back("completeness of the class number 1 list beyond |D| <= " + std::to_string(scan_bound));
    return report;
}

// ---------------------------------------------------------------------------------------
// h = 2

/// a_1 != 0 rules out j(tau1) = j(tau2) (H_D would be x^2 - A); pairwise distinct
/// a_0 / a_1^2 rules out D1 != D2 through the ratio identity. The conjugate pair of each
/// discriminant survives as the quadratic case.
inline CaseReport check_h2_case(const HcpProvider& hcp, long scan_bound = certificate_scan_bound) {
    CaseReport report;
    report.id = CaseId::h2;
    const auto discs = discriminants_with_class_number(2, scan_bound);
    report.checks["scan_bound"] = scan_bound;
    report.checks["discriminant_count"] = discs.size();
    report.require(discs.size() == 29, "expected 29 discriminants of class number 2");

    std::vector<std::pair<long, RatioEntry>> ratios;
    for (const auto& d : discs) {
        const auto p = hcp(d);
        report.require(p.degree() == 2, "H_D not quadratic for D=" + std::to_string(d.value()));
        if (p.degree() != 2) continue;
        const bool a1_nonzero = p.coefficient(1) != 0;
        report.require(a1_nonzero, "a_1 = 0 for D=" + std::to_string(d.value()));
        const RatioEntry r = ratio_vector(p).front();
        CandidateRecord c;
        c.label = std::to_string(d.value());
        c.verdict = Verdict::survives;
        c.data["coeffs"] = detail::coeffs_json(p);
        c.data["a1_nonzero"] = a1_nonzero;
        c.data["ratio_a0_over_a1_sq"] = r.to_string();
        c.data["ratio_approx"] = r.kind == RatioEntry::Kind::finite ? scientific(r.value) : r.to_string();
        c.data["A"] = p.coefficient(0).get_str();
        report.candidates.push_back(std::move(c));
        ratios.emplace_back(d.value(), r);
    }

    std::size_t cross = 0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        for (std::size_t k = i + 1; k < ratios.size(); ++k) {
            ++cross;
            const bool equal = ratios[i].second == ratios[k].second;
            report.require(!equal, "equal ratios for D=" + std::to_string(ratios[i].first) + " and D=" +
                                       std::to_string(ratios[k].first));
            CandidateRecord c;
            c.label = "(" + std::to_string(ratios[i].first) + "," + std::to_string(ratios[k].first) + ")";
            c.verdict = equal ? Verdict::survives : Verdict::excluded_by_ratio;
            report.candidates.push_back(std::move(c));
        }
    }
    report.checks["cross_discriminant_pairs"] = cross;
    report.checks["ratios_pairwise_distinct"] = report.closed();
    report.require(report.survivors() == discs.size(), "survivors must be exactly the conjugate pairs");
    report.trusted.push_back("completeness of the class number 2 list beyond |D| <= " + std::to_string(scan_bound));
    return report;
}

// ---------------------------------------------------------------------------------------
// D1 = D2, h >= 4 even

struct EqualCaseCandidates {
    std::vector<long> condition1;  // h >= 4 even, |D| < 103
    std::vector<long> condition2;  // D = 8,12 mod 16, h = 4, 103 <= |D| < 399
    std::vector<long> condition3;  // D = 1 mod 8, h = 6, 103 <= |D| < 399
    std::vector<long> condition4;  // D = 1 mod 8, h = 4, |D| >= 103 (scan-bounded)
    long scan_bound = certificate_scan_bound;
};

inline EqualCaseCandidates enumerate_equal_case_candidates(long scan_bound = certificate_scan_bound) {
    EqualCaseCandidates out;
    out.scan_bound = scan_bound;
    const auto h_table = class_number_table(scan_bound);
    for (long n = 3; n <= scan_bound; ++n) {
        const int h = h_table[static_cast<std::size_t>(n)];
        if (h == 0) continue;
        const Discriminant d(-n);
        const bool one_mod_8 = d.mod(8) == 1;
        const bool eight_twelve = d.mod(16) == 8 || d.mod(16) == 12;
        if (h >= 4 && h % 2 == 0 && n < 103) out.condition1.push_back(-n);
        if (eight_twelve && h == 4 && n >= 103 && n < 399) out.condition2.push_back(-n);
        if (one_mod_8 && h == 6 && n >= 103 && n < 399) out.condition3.push_back(-n);
        if (one_mod_8 && h == 4 && n >= 103) out.condition4.push_back(-n);
    }
    return out;
}

inline CaseReport check_equal_discriminant_case(const HcpProvider& hcp, long scan_bound = certificate_scan_bound,
                                                mpfr_prec_t prec = bound_precision) {
    CaseReport report;
    report.id = CaseId::equal_disc;
    report.checks["scan_bound"] = scan_bound;
    report.checks["bound_precision"] = prec;

    // Upper bound constants from the good-pair estimates.
    bool v1_constant = true, v2_constant = true;
    for (long x = 103; x <= scan_bound; ++x) {
        v1_constant = v1_constant && certainly_less_equal(bounds::conjugate_pair_bound(x, 3, x, 3, prec), bounds::equal_variant1(x, prec));
        if (x >= 399) {
            v2_constant = v2_constant &&
                          certainly_less_equal(bounds::conjugate_pair_bound(x, 2, x, 3, prec), bounds::equal_variant2(x, "1.001", prec));
        }
    }
    report.checks["variant1_constant_1.11_valid"] = v1_constant;
    report.checks["variant2_constant_1.001_valid"] = v2_constant;
    report.require(v1_constant, "(e^{(pi/3)sqrt x}+2079)^2 <= 1.11 e^{(2pi/3)sqrt x} fails for some 103 <= x");
    report.require(v2_constant, "good-pair bound exceeds 1.001 e^{(5pi/6)sqrt x} for some x >= 399");

    // The bounds contradict each other once a variant applies.
    bool v1_closes = true, v2_closes = true, v2_closes_101 = true;
    for (long x = 103; x <= scan_bound; ++x) {
        const Ball low = bounds::lower_value(x, x, prec);
        v1_closes = v1_closes && certainly_less(bounds::equal_variant1(x, prec), low);
        if (x >= 399) {
            v2_closes = v2_closes && certainly_less(bounds::equal_variant2(x, "1.001", prec), low);
            v2_closes_101 = v2_closes_101 && certainly_less(bounds::equal_variant2(x, "1.01", prec), low);
        }
    }
    report.checks["variant1_contradicts_lower_bound"] = v1_closes;
    report.checks["variant2_contradicts_lower_bound"] = v2_closes;
    report.checks["variant2_contradicts_lower_bound_with_1.01"] = v2_closes_101;
    report.require(v1_closes, "variant 1 upper bound does not contradict the lower bound for some |D| >= 103");
    report.require(v2_closes, "variant 2 upper bound does not contradict the lower bound for some |D| >= 399");
    report.require(v2_closes_101, "variant 2 with 1.01 does not contradict the lower bound for some |D| >= 399");

    // Every even h >= 4 discriminant is either bound-excluded or in one of the four lists.
    const auto lists = enumerate_equal_case_candidates(scan_bound);
    std::set<long> listed;
    for (const auto* l : {&lists.condition1, &lists.condition2, &lists.condition3, &lists.condition4}) {
        listed.insert(l->begin(), l->end());
    }
    const auto h_table = class_number_table(scan_bound);
    long bound_excluded = 0;
    for (long n = 3; n <= scan_bound; ++n) {
        const int h = h_table[static_cast<std::size_t>(n)];
        if (h < 4 || h % 2 != 0) continue;
        const Discriminant d(-n);
        const bool by_bounds = upper_bound_variant_applies(d, 1, h) || upper_bound_variant_applies(d, 2, h);
        if (by_bounds) {
            ++bound_excluded;
        } else {
            report.require(listed.count(-n) == 1, "D=" + std::to_string(-n) + " escapes both variants and all conditions");
        }
    }
    report.checks["bound_excluded_discriminants"] = bound_excluded;
    report.checks["condition_lists"] = {{"condition1", lists.condition1},
                                        {"condition2", lists.condition2},
                                        {"condition3", lists.condition3},
                                        {"condition4", lists.condition4}};
    report.require(lists.condition4.empty(), "condition 4 is not empty within the scan bound");

    for (const auto* l : {&lists.condition1, &lists.condition2, &lists.condition3, &lists.condition4}) {
        for (long dv : *l) {
            const Discriminant d(dv);
            const auto p = hcp(d);
            const RatioVector r = ratio_vector(p);
            const bool identity_holds = detail::palindromic_ratios(r);
            CandidateRecord c;
            c.label = std::to_string(dv);
            c.verdict = identity_holds ? Verdict::survives : Verdict::excluded_by_ratio;
            c.data["h"] = p.degree();
            c.data["coeffs"] = detail::coeffs_json(p);
            c.data["ratios"] = detail::ratio_json(r);
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (!(r[i] == r[r.size() - 1 - i])) {
                    c.data["first_failing_index"] = i + 1;
                    break;
                }
            }
            report.require(!identity_holds, "ratio identity holds for D=" + std::to_string(dv));
            report.candidates.push_back(std::move(c));
        }
    }
    report.trusted.push_back("bound comparisons and condition 4 emptiness verified for |D| <= " + std::to_string(scan_bound));
    report.trusted.push_back("variant 2 constant: computed with 1.001 and re-verified with 1.01");
    return report;
}

// ---------------------------------------------------------------------------------------
// D1 = 4 D2

inline CaseReport check_four_delta_case(long scan_bound = certificate_scan_bound, mpfr_prec_t prec = bound_precision) {
    CaseReport report;
    report.id = CaseId::four_delta;
    report.checks["scan_bound"] = scan_bound;
    report.checks["bound_precision"] = prec;

    bool constant_ok = true, closes = true;
    for (long x = 20; x <= scan_bound; ++x) {
        if (x >= 23) {
            constant_ok = constant_ok &&
                          certainly_less_equal(bounds::conjugate_pair_bound(4 * x, 3, x, 2, prec), bounds::four_delta_upper(x, prec));
        }
        closes = closes && certainly_less(bounds::four_delta_upper(x, prec), bounds::four_delta_lower(x, prec));
    }
    report.checks["upper_constant_2.4_valid"] = constant_ok;
    report.checks["lower_exceeds_upper_for_20_to_scan_bound"] = closes;
    report.require(constant_ok, "(e^{(2pi/3)sqrt x}+2079)(e^{(pi/2)sqrt x}+2079) > 2.4 e^{(7pi/6)sqrt x} for some x >= 23");
    report.require(closes, "lower bound fails to exceed 2.4 e^{(7pi/6)sqrt x} for some 20 <= x <= scan bound");

    long last_failure = 0;
    for (long x = 1; x < 20; ++x) {
        if (!certainly_less(bounds::four_delta_upper(x, prec), bounds::four_delta_lower(x, prec))) last_failure = x;
    }
    report.checks["largest_x_below_20_without_contradiction"] = last_failure;

    // h >= 3 forces |D| >= 23.
    long min_h3 = 0;
    bool small_h_le_2 = true;
    for (long n = 3; n < 23; ++n) {
        if (Discriminant::is_valid(-n)) small_h_le_2 = small_h_le_2 && class_number(Discriminant(-n)) <= 2;
    }
    const auto h3 = discriminants_with_class_number(3, scan_bound);
    if (!h3.empty()) min_h3 = h3.front().value();
    report.checks["all_h_le_2_below_23"] = small_h_le_2;
    report.checks["min_abs_discriminant_h3"] = -min_h3;
    report.require(small_h_le_2 && min_h3 == -23, "h >= 3 does not force |D| >= 23");

    // h(4D) = (2 - (D/2)) h(D) for omega = 1, so h(4D) = h(D) iff D = 1 mod 8; then
    // 4D = 4 mod 32 has no reduced form with a = 2.
    bool formula_ok = true, forces_1_mod_8 = true, no_a2 = true;
    for (long n = 5; 4 * n <= scan_bound; ++n) {
        if (!Discriminant::is_valid(-n)) continue;
        const Discriminant d(-n);
        const long h4 = class_number(Discriminant(-4 * n));
        formula_ok = formula_ok && h4 == (2 - kronecker_at_2(d)) * class_number(d);
        if (h4 == class_number(d)) {
            forces_1_mod_8 = forces_1_mod_8 && d.mod(8) == 1;
            no_a2 = no_a2 && count_small_a(Discriminant(-4 * n)).with_a2 == 0;
        }
    }
    report.checks["class_number_formula_m2"] = formula_ok;
    report.checks["equal_class_numbers_force_1_mod_8"] = forces_1_mod_8;
    report.checks["four_delta_has_no_a2_form"] = no_a2;
    report.require(formula_ok && forces_1_mod_8 && no_a2, "class number formula checks failed");
    report.trusted.push_back("reduction to D1 = 4 D2 uses the two-CM-field theorem (same imaginary quadratic field)");
    report.trusted.push_back("bound comparison verified for 20 <= |D| <= " + std::to_string(scan_bound));
    return report;
}

// ---------------------------------------------------------------------------------------
// Q(tau1) != Q(tau2)

struct DistinctFieldsRow {
    long delta;
    Ball lhs;
    Ball rhs;
};

inline std::vector<DistinctFieldsRow> distinct_fields_table(mpfr_prec_t prec = bound_precision) {
    std::vector<DistinctFieldsRow> rows;
    for (const auto& entry : field_table()) {
        if (entry.degree < 4) continue;
        for (long d : entry.discriminants) {
            rows.push_back({d, bounds::distinct_lhs(-d, prec), bounds::distinct_rhs(-d, prec)});
        }
    }
    return rows;
}

inline CaseReport check_distinct_fields_case(mpfr_prec_t prec = bound_precision) {
    CaseReport report;
    report.id = CaseId::distinct_fields;
    report.checks["bound_precision"] = prec;

    ordered_json table = ordered_json::array();
    for (const auto& row : distinct_fields_table(prec)) {
        table.push_back({{"delta", row.delta}, {"lhs", row.lhs.mid().to_fixed(10)}, {"rhs", row.rhs.mid().to_fixed(10)}});
    }
    report.checks["table"] = std::move(table);

    long min_d1 = 1L << 40, min_d2 = 1L << 40;
    bool none_1_mod_8 = true, constant_ok = true;
    for (const auto& entry : field_table()) {
        if (entry.degree < 4) continue;
        std::vector<long> mags;
        for (long d : entry.discriminants) {
            mags.push_back(-d);
            none_1_mod_8 = none_1_mod_8 && Discriminant(d).mod(8) != 1;
        }
        std::sort(mags.begin(), mags.end(), std::greater<>());
        for (std::size_t i = 0; i < mags.size(); ++i) {
            for (std::size_t k = i + 1; k < mags.size(); ++k) {
                const long x1 = mags[i], x2 = mags[k];  // |D1| > |D2|
                min_d1 = std::min(min_d1, x1);
                min_d2 = std::min(min_d2, x2);
                constant_ok = constant_ok &&
                              certainly_less_equal(bounds::conjugate_pair_bound(x1, 3, x2, 2, prec), bounds::distinct_upper(x1, x2, prec));

                CandidateRecord c;
                c.label = "(" + std::to_string(-x1) + "," + std::to_string(-x2) + ")";
                c.data["field"] = entry.field;
                const Ball lhs = bounds::distinct_lhs(x1, prec);
                const Ball rhs = bounds::distinct_rhs(x2, prec);
                const bool first_excludes = certainly_less(rhs, lhs);
                c.data["lhs_D1"] = bounds::down(lhs);
                c.data["rhs_D2"] = bounds::up(rhs);
                c.data["first_comparison_excludes"] = first_excludes;
                if (first_excludes) {
                    c.verdict = Verdict::excluded_by_bounds;
                } else {
                    // With D1 = 0 mod 16 there is no a = 2 form, so a pair with a1, a2 >= 3 exists.
                    const bool sharpen = Discriminant(-x1).mod(16) == 0 && count_small_a(Discriminant(-x1)).with_a2 == 0;
                    const Ball upper = bounds::conjugate_pair_bound(x1, 3, x2, 3, prec);
                    const Ball lower = bounds::lower_value(x1, x2, prec);
                    const bool excludes = sharpen && certainly_less(upper, lower);
                    c.data["sharpened_upper"] = bounds::up(upper);
                    c.data["lower_bound"] = bounds::down(lower);
                    c.verdict = excludes ? Verdict::excluded_by_bounds : Verdict::survives;
                    report.require(excludes, "pair " + c.label + " survives the sharpened bound");
                }
                report.candidates.push_back(std::move(c));
            }
        }
    }
    report.checks["min_abs_D1"] = min_d1;
    report.checks["min_abs_D2"] = min_d2;
    report.checks["no_discriminant_1_mod_8"] = none_1_mod_8;
    report.checks["upper_constant_1.005_valid"] = constant_ok;
    report.require(none_1_mod_8, "a distinct-field discriminant is 1 mod 8");
    report.require(constant_ok, "1.005 constant fails for some table pair");
    report.trusted.push_back("field table taken from the two-CM-field theorem (not re-proved)");
    return report;
}

// ---------------------------------------------------------------------------------------
// Constants feeding the lower bound

inline ordered_json lower_bound_constant_checks(mpfr_prec_t prec = bound_precision) {
    ordered_json j;
    // e^{pi sqrt 23} - 2079 >= 0.9994 e^{pi sqrt 23}, hence for all |D1| >= 23
    const Ball e23 = bounds::exp_pi_sqrt(1, 23, prec);
    j["j_tau1_0.9994"] = certainly_less_equal(bounds::decimal("0.9994", prec) * e23, e23 - 2079);
    // 44000 (sqrt3 / 4)^3 >= 3500
    const Ball r = sqrt(Ball(3, prec)) / 4;
    j["near_zeta6_3500"] = certainly_less_equal(Ball(3500, prec), Ball(44000, prec) * pow(r, 3));
    // 0.9994 * 4.4e-5 >= 3000e-8 and 0.9994 * 3500 >= 3000
    const Ball c = bounds::decimal("0.9994", prec);
    j["combined_3000_far"] = certainly_less_equal(bounds::decimal("0.00003", prec), c * bounds::decimal("0.000044", prec));
    j["combined_3000_near"] = certainly_less_equal(Ball(3000, prec), c * Ball(3500, prec));
    return j;
}

// ---------------------------------------------------------------------------------------
// Certificate

inline constexpr int certificate_schema_version = 1;

struct Certificate {
    std::vector<CaseReport> cases;
    ordered_json constants;
    long scan_bound = certificate_scan_bound;
    mpfr_prec_t precision = bound_precision;

    bool closed() const {
        bool constants_ok = true;
        for (const auto& [k, v] : constants.items()) constants_ok = constants_ok && v.get<bool>();
        return constants_ok && std::all_of(cases.begin(), cases.end(), [](const auto& c) { return c.closed(); });
    }

    const CaseReport& report(CaseId id) const {
        for (const auto& c : cases) {
            if (c.id == id) return c;
        }
        throw invalid_argument("certificate has no report for the requested case");
    }

    ordered_json to_json() const {
        ordered_json j;
        j["schema_version"] = certificate_schema_version;
        j["statement"] = "j(tau1) j(tau2) in Q^x implies both rational or a conjugate pair of degree 2";
        j["all_cases_closed"] = closed();
        j["scan_bound"] = scan_bound;
        j["bound_precision"] = precision;
        j["trusted_assumptions"] = {
            "|j(z)| <= 23000 on |z - zeta6| <= sqrt(3)/4 (consequence 761000 checked numerically)",
            "field table for Q(j(tau1)) = Q(j(tau2)) with Q(tau1) != Q(tau2)",
            "h <= 2 discriminant lists complete beyond the scan bound",
        };
        j["lower_bound_constants"] = constants;
        ordered_json cs = ordered_json::array();
        for (const auto& c : cases) cs.push_back(c.to_json());
        j["cases"] = std::move(cs);
        return j;
    }
};

/// True when `j` is a certificate document of this schema with every case closed.
inline bool certificate_document_closed(const nlohmann::json& j) {
    if (!j.is_object() || j.value("schema_version", 0) != certificate_schema_version) return false;
    if (!j.value("all_cases_closed", false) || !j.contains("cases") || !j["cases"].is_array()) return false;
    std::set<std::string> seen;
    for (const auto& c : j["cases"]) {
        if (!c.value("closed", false)) return false;
        seen.insert(c.value("case", ""));
    }
    return seen == std::set<std::string>{"H1", "H2", "EQUAL_DISC", "FOUR_DELTA", "DISTINCT_FIELDS"};
}

struct CertifyOptions {
    long scan_bound = certificate_scan_bound;
    mpfr_prec_t precision = bound_precision;
    HcpProvider hcp = default_hcp_provider();
};

inline Certificate run_certification(const CertifyOptions& options = {}) {
    Certificate cert;
    cert.scan_bound = options.scan_bound;
    cert.precision = options.precision;
    cert.constants = lower_bound_constant_checks(options.precision);
    cert.cases.push_back(check_h1_case(options.hcp, options.scan_bound));
    cert.cases.push_back(check_h2_case(options.hcp, options.scan_bound));
    cert.cases.push_back(check_equal_discriminant_case(options.hcp, options.scan_bound, options.precision));
    cert.cases.push_back(check_four_delta_case(options.scan_bound, options.precision));
    cert.cases.push_back(check_distinct_fields_case(options.precision));
    return cert;
}

}  // namespace smprod
