#pragma once

// Reduced primitive binary quadratic forms of negative discriminant.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "smprod/error.hpp"

namespace smprod {

/// A negative integer congruent to 0 or 1 modulo 4.
class Discriminant {
public:
    explicit constexpr Discriminant(long value) : value_(value) {
        if (!is_valid(value)) throw invalid_discriminant(value);
    }

    static constexpr bool is_valid(long value) {
        if (value >= 0) return false;
        const long r = ((value % 4) + 4) % 4;
        return r == 0 || r == 1;
    }

    constexpr long value() const { return value_; }
    constexpr long magnitude() const { return -value_; }

    /// Residue of the discriminant modulo m, in [0, m).
    constexpr long mod(long m) const { return ((value_ % m) + m) % m; }

    friend constexpr auto operator<=>(const Discriminant&, const Discriminant&) = default;

private:
    long value_;
};

/// (a, b, c) with b^2 - 4ac = D, gcd 1 and either -a < b <= a < c or 0 <= b <= a = c.
struct FormTriple {
    long a = 0;
    long b = 0;
    long c = 0;

    friend constexpr auto operator<=>(const FormTriple&, const FormTriple&) = default;

    constexpr long discriminant() const { return b * b - 4 * a * c; }

    std::string to_string() const {
        return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
    }
};

constexpr bool is_reduced(const FormTriple& f) {
    return (-f.a < f.b && f.b <= f.a && f.a < f.c) || (0 <= f.b && f.b <= f.a && f.a == f.c);
}

inline bool is_primitive(const FormTriple& f) {
    return std::gcd(std::gcd(f.a, f.b), f.c) == 1;
}

/// tau(a,b,c) = (b + sqrt(D)) / 2a lies in the closed fundamental domain:
/// |Re tau| <= 1/2 is |b| <= a and |tau|^2 = c/a >= 1 is c >= a.
constexpr bool tau_in_fundamental_domain(const FormTriple& f) {
    return f.a > 0 && (f.b < 0 ? -f.b : f.b) <= f.a && f.c >= f.a;
}

namespace detail {

template <typename Visitor>
void for_each_reduced_form(Discriminant d, Visitor&& visit) {
    const long n = d.magnitude();
    const long parity = n & 1;  // b and D share parity
    for (long a = 1; 3 * a * a <= n; ++a) {
        long b = -a + 1;
        if (((b % 2) + 2) % 2 != parity) ++b;
        for (; b <= a; b += 2) {
            const long num = b * b + n;
            if (num % (4 * a) != 0) continue;
            const long c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            visit(FormTriple{a, b, c});
        }
    }
}

}  // namespace detail

/// The set T_D, sorted ascending by (a, b).
inline std::vector<FormTriple> enumerate_forms(Discriminant d) {
    std::vector<FormTriple> forms;
    detail::for_each_reduced_form(d, [&](const FormTriple& f) { forms.push_back(f); });
    return forms;  // the loop order is already (a, b) ascending
}

inline int class_number(Discriminant d) {
    int h = 0;
    detail::for_each_reduced_form(d, [&](const FormTriple&) { ++h; });
    return h;
}

struct SmallACount {
    int with_a1 = 0;
    int with_a2 = 0;
    friend constexpr bool operator==(const SmallACount&, const SmallACount&) = default;
};

inline SmallACount count_small_a(Discriminant d) {
    SmallACount out;
    detail::for_each_reduced_form(d, [&](const FormTriple& f) {
        if (f.a == 1) ++out.with_a1;
        if (f.a == 2) ++out.with_a2;
    });
    return out;
}

/// Number of forms with a = 1 and a = 2 predicted from D modulo 16.
///
/// D = 1 mod 8 gives (2, +-1, (1 - D)/8), which needs c >= 2; at D = -15 the value
/// c = a = 2 keeps only b = 1, and at D = -7 c = 1 leaves nothing.
inline SmallACount predicted_small_a(Discriminant d) {
    const long v = d.value();
    SmallACount out{1, 0};
    if (d.mod(8) == 1) {
        out.with_a2 = v == -7 ? 0 : (v == -15 ? 1 : 2);
    } else if (d.mod(16) == 8 || d.mod(16) == 12) {
        out.with_a2 = (v == -4 || v == -8) ? 0 : 1;
    }
    return out;
}

/// Kronecker symbol (D/2): 1 for D = 1 mod 8, -1 for D = 5 mod 8, 0 for D even.
constexpr int kronecker_at_2(Discriminant d) {
    switch (d.mod(8)) {
        case 1: return 1;
        case 5: return -1;
        default: return 0;
    }
}

/// Kronecker symbol (D/p) for a prime p.
inline int kronecker(Discriminant d, long p) {
    if (p < 2) throw invalid_argument("kronecker: p must be prime");
    if (p == 2) return kronecker_at_2(d);
    const long r = d.mod(p);
    if (r == 0) return 0;
    // Euler's criterion
    unsigned __int128 base = static_cast<unsigned long>(r);
    unsigned long e = static_cast<unsigned long>(p - 1) / 2;
    unsigned __int128 acc = 1;
    const auto mod = static_cast<unsigned __int128>(p);
    while (e != 0) {
        if (e & 1) acc = acc * base % mod;
        base = base * base % mod;
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

/// omega = [O* : {+-1}]: 3 for D = -3, 2 for D = -4, else 1.
constexpr int unit_index(Discriminant d) {
    return d.value() == -3 ? 3 : (d.value() == -4 ? 2 : 1);
}

inline std::vector<long> prime_divisors(long m) {
    std::vector<long> primes;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            primes.push_back(p);
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) primes.push_back(m);
    return primes;
}

/// h(m^2 D) from the class number formula
///   h(m^2 D) = (m / omega) prod_{p | m} (1 - (D/p)/p) h(D).
/// The unit index only enters for m > 1; for m = 1 the orders coincide.
inline long class_number_scaled(Discriminant d, long m) {
    if (m <= 0) throw invalid_argument("class_number_scaled: m must be positive");
    if (m == 1) return class_number(d);
    long value = m * class_number(d);
    for (long p : prime_divisors(m)) {
        value = value / p * (p - kronecker(d, p));
    }
    const int w = unit_index(d);
    if (value % w != 0) {
        throw error("class number formula produced a non-integer for D=" + std::to_string(d.value()));
    }
    return value / w;
}

/// All D with |D| <= bound and h(D) = h, ascending |D|.
inline std::vector<Discriminant> discriminants_with_class_number(int h, long bound) {
    if (h < 1) throw invalid_argument("class number must be positive");
    if (bound < 3) throw invalid_argument("scan bound must be at least 3");
    std::vector<Discriminant> out;
    for (long n = 3; n <= bound; ++n) {
        if (!Discriminant::is_valid(-n)) continue;
        Discriminant d(-n);
        if (class_number(d) == h) out.push_back(d);
    }
    return out;
}

/// Class numbers of every discriminant with |D| <= bound, indexed by |D| (0 where invalid).
inline std::vector<int> class_number_table(long bound) {
    std::vector<int> table(static_cast<std::size_t>(bound + 1), 0);
    for (long n = 3; n <= bound; ++n) {
        if (Discriminant::is_valid(-n)) table[static_cast<std::size_t>(n)] = class_number(Discriminant(-n));
    }
    return table;
}

}  // namespace smprod
