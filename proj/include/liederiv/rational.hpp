#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace liederiv {

/// Exact rational scalar. Always kept canonical (gcd(num,den)=1, den>0),
/// which makes operator== a true value comparison.
using Rat = mpq_class;

inline int sign(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

inline bool is_zero(const Rat& x) { return sign(x) == 0; }

/// num/den as a canonical rational. The two-argument mpq_class constructor
/// does NOT canonicalize (Rat(0, 2) would break value comparison), so always
/// build fractions through this helper.
inline Rat make_rat(long num, long den) {
    if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Parse "p", "p/q" or "-p/q" (arbitrary precision) into a canonical rational.
/// Rejects empty input, malformed integers and zero denominators.
inline Rat rat_from_string(const std::string& text) {
    auto bad = [&]() -> std::runtime_error {
        return std::runtime_error("invalid rational literal: '" + text + "'");
    };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            Rat r(mpz_class(text, 10));
            r.canonicalize();
            return r;
        }
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty() || den.find('/') != std::string::npos) throw bad();
        mpz_class p(num, 10), q(den, 10);
        if (q == 0) throw bad();
        Rat r(p, q);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw bad();
    }
}

/// Canonical text form: "0", "3", "-3/2". Integers print without "/1".
inline std::string rat_to_string(const Rat& x) { return x.get_str(); }

}  // namespace liederiv
