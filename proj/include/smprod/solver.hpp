#pragma once

// Solutions of j(tau1) j(tau2) = A for A in Q^x, read off the finite set
// S = {j1 j2 : j1, j2 rational singular moduli, nonzero} u {a_0(H_D) : h(D) = 2}.
// The set is complete only once the case analysis closes, so a solver requires either a
// closed certificate or an explicit opt-in to trust it.

#include <gmpxx.h>
#include <json.hpp>

#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "smprod/certify.hpp"
#include "smprod/error.hpp"
#include "smprod/hcp.hpp"
#include "smprod/jeval.hpp"
#include "smprod/qforms.hpp"

namespace smprod {

/// The 13 rational singular moduli.
inline constexpr std::array<std::pair<long, long>, 13> rational_singular_moduli = {{
    {-3, 0},
    {-4, 1728},
    {-7, -3375},
    {-8, 8000},
    {-11, -32768},
    {-12, 54000},
    {-16, 287496},
    {-19, -884736},
    {-27, -12288000},
    {-28, 16581375},
    {-43, -884736000},
    {-67, -147197952000},
    {-163, -262537412640768000},
}};

struct RationalValue {
    Discriminant delta;
    mpz_class j;
};

/// Table values recomputed as -a_0 of the linear H_D; any disagreement is a certification failure.
inline std::vector<RationalValue> rational_values(const HcpProvider& hcp = default_hcp_provider()) {
    std::vector<RationalValue> out;
    for (const auto& [dv, jv] : rational_singular_moduli) {
        const Discriminant d(dv);
        const auto p = hcp(d);
        if (p.degree() != 1 || -p.coefficient(0) != mpz_class(jv)) {
            throw certification_failure("rational singular modulus mismatch at D=" + std::to_string(dv) +
                                        ": H_D = " + p.to_string());
        }
        out.push_back({d, mpz_class(jv)});
    }
    return out;
}

struct SingularModulusDesc {
    Discriminant delta;
    FormTriple form;
    std::optional<mpz_class> value;  // set when rational
    HilbertClassPoly minimal_poly;

    ordered_json to_json() const {
        ordered_json j;
        j["delta"] = delta.value();
        j["form"] = {form.a, form.b, form.c};
        j["minimal_poly"] = minimal_poly.to_string();
        if (value) j["value"] = value->get_str();
        return j;
    }
};

enum class SolutionKind { rational, quadratic };

inline const char* to_string(SolutionKind k) { return k == SolutionKind::rational ? "RATIONAL" : "QUADRATIC"; }

/// Unordered pair {j(tau1), j(tau2)} with product A.
struct ProductSolution {
    mpz_class product;
    SolutionKind kind = SolutionKind::rational;
    SingularModulusDesc first;
    SingularModulusDesc second;

    ordered_json to_json() const {
        ordered_json j;
        j["A"] = product.get_str();
        j["kind"] = to_string(kind);
        j["pair"] = {first.to_json(), second.to_json()};
        return j;
    }
};

class ProductSet {
public:
    const std::vector<ProductSolution>* find(const mpz_class& a) const {
        const auto it = entries_.find(a);
        return it == entries_.end() ? nullptr : &it->second;
    }

    bool contains(const mpq_class& a) const { return a.get_den() == 1 && find(a.get_num()) != nullptr; }
    std::size_t size() const { return entries_.size(); }
    const std::map<mpz_class, std::vector<ProductSolution>>& entries() const { return entries_; }

    std::size_t rational_count() const { return count(SolutionKind::rational); }
    std::size_t quadratic_count() const { return count(SolutionKind::quadratic); }

    /// Values reached by more than one pair.
    std::vector<mpz_class> collisions() const {
        std::vector<mpz_class> out;
        for (const auto& [a, sols] : entries_) {
            if (sols.size() > 1) out.push_back(a);
        }
        return out;
    }

    void add(ProductSolution s) { entries_[s.product].push_back(std::move(s)); }

private:
    std::size_t count(SolutionKind k) const {
        std::size_t n = 0;
        for (const auto& [a, sols] : entries_) {
            n += std::any_of(sols.begin(), sols.end(), [&](const auto& s) { return s.kind == k; }) ? 1 : 0;
        }
        return n;
    }

    std::map<mpz_class, std::vector<ProductSolution>> entries_;
};

namespace detail {

inline SingularModulusDesc principal_modulus(Discriminant d, const HilbertClassPoly& p, std::optional<mpz_class> value) {
    return {d, enumerate_forms(d).front(), std::move(value), p};
}

}  // namespace detail

/// S with provenance: 78 rational pairs (collapsing to 77 values through
/// 1728 * -147197952000 = 287496 * -884736000) and 29 conjugate-pair norms. One norm is
/// also a rational pair product, a_0(H_-115) = j(-19) j(-67), so S has 105 values.
/// The pair and norm counts are checked.
inline ProductSet build_set_S(const HcpProvider& hcp = default_hcp_provider(), long scan_bound = certificate_scan_bound) {
    ProductSet set;
    std::vector<SingularModulusDesc> rational;
    for (const auto& v : rational_values(hcp)) {
        if (v.j == 0) continue;
        rational.push_back(detail::principal_modulus(v.delta, hcp(v.delta), v.j));
    }
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < rational.size(); ++i) {
        for (std::size_t k = i; k < rational.size(); ++k) {
            set.add({*rational[i].value * *rational[k].value, SolutionKind::rational, rational[i], rational[k]});
            ++pairs;
        }
    }

    std::set<mpz_class> norms;
    for (const auto& d : discriminants_with_class_number(2, scan_bound)) {
        const auto p = hcp(d);
        const auto forms = enumerate_forms(d);
        SingularModulusDesc a{d, forms.at(0), std::nullopt, p};
        SingularModulusDesc b{d, forms.at(1), std::nullopt, p};
        set.add({p.coefficient(0), SolutionKind::quadratic, a, b});
        norms.insert(p.coefficient(0));
    }

    if (pairs != 78 || norms.size() != 29) {
        throw certification_failure("set S has unexpected shape: " + std::to_string(pairs) + " rational pairs, " +
                                    std::to_string(norms.size()) + " distinct quadratic norms");
    }
    return set;
}

class ProductSolver {
public:
    /// Requires a closed certificate.
    static ProductSolver certified(const Certificate& cert, const HcpProvider& hcp = default_hcp_provider()) {
        if (!cert.closed()) throw certificate_required("certificate has open cases; solver refuses to answer");
        return ProductSolver(build_set_S(hcp, cert.scan_bound));
    }

    /// Requires a certificate document (as written by `smprod certify`) with every case closed.
    static ProductSolver certified(const nlohmann::json& document, const HcpProvider& hcp = default_hcp_provider()) {
        if (!certificate_document_closed(document)) {
            throw certificate_required("certificate document is missing, of another schema, or has open cases");
        }
        return ProductSolver(build_set_S(hcp, document.value("scan_bound", certificate_scan_bound)));
    }

    /// Explicit opt-in: answers as if the case analysis were closed.
    static ProductSolver trusting(const HcpProvider& hcp = default_hcp_provider()) { return ProductSolver(build_set_S(hcp)); }

    /// All unordered pairs with j(tau1) j(tau2) = a; empty when a is not in S.
    std::vector<ProductSolution> solve(const mpq_class& a) const {
        if (a == 0) throw zero_not_supported();
        if (a.get_den() != 1) return {};
        const auto* sols = set_.find(a.get_num());
        return sols == nullptr ? std::vector<ProductSolution>{} : *sols;
    }

    const ProductSet& set() const { return set_; }

private:
    explicit ProductSolver(ProductSet s) : set_(std::move(s)) {}
    ProductSet set_;
};

// ---------------------------------------------------------------------------------------
// Independent oracle

struct OracleProduct {
    mpz_class product;
    long delta1 = 0;
    long delta2 = 0;
    SolutionKind kind = SolutionKind::rational;
};

/// Every rational product among singular moduli with h <= 2 and |D| <= bound, found
/// directly from the polynomials: rational x rational, conjugate norms a_0, squares of
/// quadratic roots (rational iff a_1 = 0), and cross-discriminant pairs (possible only if
/// the ratio a_0 / a_1^2 coincides; checked and reported as an error). Rational times
/// quadratic irrational is never rational. Does not consult the hard-coded table or S.
inline std::vector<OracleProduct> brute_force_oracle(long bound, const HcpProvider& hcp = default_hcp_provider()) {
    if (bound < 3 || bound > 500) throw invalid_argument("brute_force_oracle bound must lie in [3, 500]");
    std::vector<std::pair<long, mpz_class>> linear;
    std::vector<HilbertClassPoly> quadratic;
    for (long n = 3; n <= bound; ++n) {
        if (!Discriminant::is_valid(-n)) continue;
        const Discriminant d(-n);
        const int h = class_number(d);
        if (h == 1) {
            const auto p = hcp(d);
            if (p.coefficient(0) != 0) linear.emplace_back(-n, -p.coefficient(0));
        } else if (h == 2) {
            quadratic.push_back(hcp(d));
        }
    }
    std::vector<OracleProduct> out;
    for (std::size_t i = 0; i < linear.size(); ++i) {
        for (std::size_t k = i; k < linear.size(); ++k) {
            out.push_back({linear[i].second * linear[k].second, linear[i].first, linear[k].first, SolutionKind::rational});
        }
    }
    for (std::size_t i = 0; i < quadratic.size(); ++i) {
        const auto& p = quadratic[i];
        out.push_back({p.coefficient(0), p.delta.value(), p.delta.value(), SolutionKind::quadratic});
        if (p.coefficient(1) == 0) {
            throw error("oracle: a_1 = 0 at D=" + std::to_string(p.delta.value()) + " gives a rational square");
        }
        for (std::size_t k = i + 1; k < quadratic.size(); ++k) {
            if (product_compatible(p, quadratic[k])) {
                throw error("oracle: equal ratios at D=" + std::to_string(p.delta.value()) + ", " +
                            std::to_string(quadratic[k].delta.value()));
            }
        }
    }
    return out;
}

}  // namespace smprod
