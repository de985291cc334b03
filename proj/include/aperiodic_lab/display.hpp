#ifndef APERIODIC_LAB_DISPLAY_HPP
#define APERIODIC_LAB_DISPLAY_HPP

// Decimal rendering of exact values to a fixed number of significant
// digits, round-half-even, computed with integer arithmetic only.  The
// layout follows printf's %g.

#include <string>

#include "aperiodic_lab/qnum.hpp"

namespace aplab {

namespace detail {

inline QNum pow10(long long e) {
    Integer p = 1;
    for (long long k = 0; k < (e < 0 ? -e : e); ++k) p *= 10;
    return e >= 0 ? QNum(p) : QNum::rational(1, p);
}

inline std::string layout(bool negative, std::string digits, long long e, unsigned sig) {
    std::string out = negative ? "-" : "";
    if (e < -4 || e >= static_cast<long long>(sig)) {
        std::string mant = digits.substr(0, 1);
        std::string rest = digits.substr(1);
        while (!rest.empty() && rest.back() == '0') rest.pop_back();
        if (!rest.empty()) mant += "." + rest;
        const long long ae = e < 0 ? -e : e;
        std::string ex = std::to_string(ae);
        if (ex.size() < 2) ex = "0" + ex;
        return out + mant + "e" + (e < 0 ? "-" : "+") + ex;
    }
    std::string whole;
    std::string frac;
    if (e >= 0) {
        whole = digits.substr(0, static_cast<std::size_t>(e + 1));
        frac = digits.substr(static_cast<std::size_t>(e + 1));
    } else {
        whole = "0";
        frac = std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
    }
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    return out + whole + (frac.empty() ? "" : "." + frac);
}

// `scaled(k)` returns floor(v * 10^k) and the sign of (v * 10^k - floor - 1/2);
// `below(e)` tells whether v < 10^e.
template <class Scaled, class Below>
std::string render(bool negative, unsigned sig, Scaled scaled, Below below) {
    long long e = 0;
    while (!below(e + 1)) ++e;
    while (below(e)) --e;
    const long long k = static_cast<long long>(sig) - 1 - e;
    auto [n, half] = scaled(k);
    if (half > 0 || (half == 0 && n % 2 != 0)) n += 1;
    Integer limit = 1;
    for (unsigned i = 0; i < sig; ++i) limit *= 10;
    if (n == limit) {
        n /= 10;
        ++e;
    }
    return layout(negative, n.str(), e, sig);
}

}  // namespace detail

inline std::string display(const QNum& q, unsigned sig = 12) {
    if (q.is_zero()) return "0";
    const bool neg = qsign(q) < 0;
    const QNum v = neg ? -q : q;
    auto below = [&](long long e) { return v < detail::pow10(e); };
    auto scaled = [&](long long k) {
        const QNum s = v * detail::pow10(k);
        Integer n = s.floor();
        const int half = qsign(s - QNum(n) - QNum::rational(1, 2));
        return std::pair<Integer, int>{n, half};
    };
    return detail::render(neg, sig, scaled, below);
}

// sqrt(v) for v >= 0.
inline std::string display_sqrt(const QNum& v, unsigned sig = 12) {
    if (qsign(v) < 0) throw std::domain_error("display_sqrt of a negative value");
    if (v.is_zero()) return "0";
    auto below = [&](long long e) { return v < detail::pow10(2 * e); };
    auto scaled = [&](long long k) {
        const QNum s = v * detail::pow10(2 * k);  // (sqrt(v) 10^k)^2
        Integer n = detail::isqrt(s.floor());
        // compare s with (n + 1/2)^2 = n^2 + n + 1/4
        const int half = qsign(s - QNum(n * n + n) - QNum::rational(1, 4));
        return std::pair<Integer, int>{n, half};
    };
    return detail::render(false, sig, scaled, below);
}

inline std::string display(long long v) { return std::to_string(v); }

}  // namespace aplab

#endif  // APERIODIC_LAB_DISPLAY_HPP
