#ifndef APERIODIC_LAB_QNUM_HPP
#define APERIODIC_LAB_QNUM_HPP

// Exact arithmetic in Q(tau), tau = (1 + sqrt 5) / 2.
//
// A QNum stores (a + b*tau) / den with arbitrary-precision integers and is
// kept normalized (den > 0, gcd(a, b, den) = 1), so equality is
// componentwise.  Every order decision goes through qsign(), which works on
// integers only.

#include <atomic>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "aperiodic_lab/instrumentation.hpp"

namespace aplab {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

namespace detail {

inline Integer gcd(Integer x, Integer y) {
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
        Integer r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x;
}

inline Integer lcm(const Integer& x, const Integer& y) {
    if (x == 0 || y == 0) return 0;
    Integer g = gcd(x, y);
    Integer r = (x / g) * y;
    return r < 0 ? Integer(-r) : r;
}

// floor(x / y) for y > 0.
inline Integer floor_div(const Integer& x, const Integer& y) {
    Integer q = x / y;  // truncates toward zero
    if (x % y != 0 && x < 0) q -= 1;
    return q;
}

inline Integer isqrt(const Integer& x) {
    if (x < 0) throw std::domain_error("isqrt of a negative integer");
    return boost::multiprecision::sqrt(x);
}

inline Integer to_integer(__int128 v) {
    const bool neg = v < 0;
    const unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    Integer r = Integer(static_cast<std::uint64_t>(u >> 64));
    r <<= 64;
    r += Integer(static_cast<std::uint64_t>(u));
    return neg ? Integer(-r) : r;
}

// Sign of x + y*tau for integers (or any signed integer-like type).
template <class I>
int ring_sign(const I& x, const I& y) {
    instrumentation::note_exact_sign();
    // x + y*tau = (2x + y + y*sqrt5) / 2
    const I p = x + x + y;
    const int sp = p > 0 ? 1 : (p < 0 ? -1 : 0);
    const int sq = y > 0 ? 1 : (y < 0 ? -1 : 0);
    if (sp >= 0 && sq >= 0) return (sp | sq) ? 1 : 0;
    if (sp <= 0 && sq <= 0) return -1;
    const I lhs = p * p;
    const I rhs = I(5) * y * y;
    if (sp > 0) return lhs > rhs ? 1 : -1;  // p > 0 > y; equality impossible (sqrt5 irrational)
    return rhs > lhs ? 1 : -1;
}

}  // namespace detail

class QNum {
public:
    QNum() : a_(0), b_(0), den_(1) {}
    QNum(long long v) : a_(v), b_(0), den_(1) {}  // NOLINT: integers convert implicitly
    QNum(int v) : QNum(static_cast<long long>(v)) {}
    explicit QNum(Integer v) : a_(std::move(v)), b_(0), den_(1) {}
    QNum(Integer a, Integer b, Integer den) : a_(std::move(a)), b_(std::move(b)), den_(std::move(den)) {
        normalize();
    }

    static QNum rational(Integer num, Integer den) { return QNum(std::move(num), 0, std::move(den)); }
    static QNum tau() { return QNum(0, 1, 1); }

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& den() const { return den_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }
    bool is_integer() const { return b_ == 0 && den_ == 1; }

    // Galois conjugate: tau -> 1 - tau.
    QNum conjugate() const { return QNum(a_ + b_, -b_, den_); }

    // (a + b tau)(a + b - b tau) = a^2 + ab - b^2, over den^2.
    QNum field_norm() const { return QNum::rational(a_ * a_ + a_ * b_ - b_ * b_, den_ * den_); }

    QNum operator-() const {
        QNum r = *this;
        r.a_ = -r.a_;
        r.b_ = -r.b_;
        return r;
    }

    friend QNum operator+(const QNum& u, const QNum& v) {
        if (u.den_ == v.den_) return QNum(u.a_ + v.a_, u.b_ + v.b_, u.den_);
        return QNum(u.a_ * v.den_ + v.a_ * u.den_, u.b_ * v.den_ + v.b_ * u.den_, u.den_ * v.den_);
    }
    friend QNum operator-(const QNum& u, const QNum& v) {
        if (u.den_ == v.den_) return QNum(u.a_ - v.a_, u.b_ - v.b_, u.den_);
        return QNum(u.a_ * v.den_ - v.a_ * u.den_, u.b_ * v.den_ - v.b_ * u.den_, u.den_ * v.den_);
    }
    friend QNum operator*(const QNum& u, const QNum& v) {
        // (a1 + b1 t)(a2 + b2 t) = a1 a2 + b1 b2 + (a1 b2 + a2 b1 + b1 b2) t, using t^2 = t + 1
        const Integer bb = u.b_ * v.b_;
        return QNum(u.a_ * v.a_ + bb, u.a_ * v.b_ + v.a_ * u.b_ + bb, u.den_ * v.den_);
    }
    friend QNum operator/(const QNum& u, const QNum& v) {
        if (v.is_zero()) throw std::domain_error("QNum division by zero");
        // 1/v = conj(v) / N(v)
        const QNum n = v.field_norm();
        const QNum c = v.conjugate();
        return u * c * QNum::rational(n.den(), n.a());
    }
    QNum& operator+=(const QNum& v) { return *this = *this + v; }
    QNum& operator-=(const QNum& v) { return *this = *this - v; }
    QNum& operator*=(const QNum& v) { return *this = *this * v; }
    QNum& operator/=(const QNum& v) { return *this = *this / v; }

    friend bool operator==(const QNum&, const QNum&) = default;
    friend std::strong_ordering operator<=>(const QNum& u, const QNum& v);

    // Largest integer <= value, computed with an integer square root only.
    Integer floor() const {
        // value = (2a + b + b sqrt5) / (2 den)
        const Integer p = a_ + a_ + b_;
        Integer s = detail::isqrt(Integer(5) * b_ * b_);  // floor(|b| sqrt5)
        Integer fl;
        if (b_ >= 0) {
            fl = s;
        } else {
            // -|b| sqrt5 is irrational for b != 0, so its floor is -floor(|b| sqrt5) - 1
            fl = -s - 1;
        }
        return detail::floor_div(p + fl, den_ + den_);
    }
    Integer ceil() const { return -(-*this).floor(); }

    // "a b den"
    std::string to_string() const { return a_.str() + " " + b_.str() + " " + den_.str(); }

    static QNum parse(std::string_view text);

    // Display only.  Never feed the result back into a decision.
    double to_double() const {
        instrumentation::note_float_conversion();
        const double t = 1.6180339887498948482;
        return (a_.convert_to<double>() + b_.convert_to<double>() * t) / den_.convert_to<double>();
    }

private:
    void normalize() {
        if (den_ == 0) throw std::domain_error("QNum with zero denominator");
        if (den_ < 0) {
            den_ = -den_;
            a_ = -a_;
            b_ = -b_;
        }
        if (a_ == 0 && b_ == 0) {
            den_ = 1;
            return;
        }
        if (den_ == 1) return;
        Integer g = detail::gcd(detail::gcd(a_, b_), den_);
        if (g != 1) {
            a_ /= g;
            b_ /= g;
            den_ /= g;
        }
    }

    Integer a_;
    Integer b_;
    Integer den_;
};

inline int qsign(const QNum& q) { return detail::ring_sign(q.a(), q.b()); }

inline std::strong_ordering operator<=>(const QNum& u, const QNum& v) {
    if (u == v) return std::strong_ordering::equal;
    const int s = qsign(u - v);
    return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

// Ordering of two squared magnitudes (any two QNum values, really).
inline std::strong_ordering cmp_sq(const QNum& u, const QNum& v) { return u <=> v; }

inline const QNum& max(const QNum& u, const QNum& v) { return u < v ? v : u; }
inline const QNum& min(const QNum& u, const QNum& v) { return v < u ? v : u; }

inline QNum abs(const QNum& q) { return qsign(q) < 0 ? -q : q; }

inline QNum pow(QNum base, unsigned e) {
    QNum r = 1;
    while (e) {
        if (e & 1U) r *= base;
        base *= base;
        e >>= 1U;
    }
    return r;
}

// Rational bounds on sqrt(v) with resolution 2^-bits:
// sqrt_lower(v) <= sqrt(v) <= sqrt_upper(v).
inline QNum sqrt_lower(const QNum& v, unsigned bits = 48) {
    if (qsign(v) < 0) throw std::domain_error("sqrt of a negative QNum");
    const Integer scale = Integer(1) << bits;
    const Integer fl = (v * QNum(scale * scale)).floor();
    return QNum::rational(detail::isqrt(fl), scale);
}

inline QNum sqrt_upper(const QNum& v, unsigned bits = 48) {
    if (qsign(v) < 0) throw std::domain_error("sqrt of a negative QNum");
    const Integer scale = Integer(1) << bits;
    const Integer fl = (v * QNum(scale * scale)).floor();
    Integer r = detail::isqrt(fl);
    // exact square root of a rational square
    if (v.is_rational() && r * r == fl && QNum::rational(r * r, scale * scale) == v) {
        return QNum::rational(r, scale);
    }
    return QNum::rational(r + 1, scale);
}

// Exact test sqrt(x) + sqrt(y) <= z for x, y >= 0.
inline bool sqrt_sum_at_most(const QNum& x, const QNum& y, const QNum& z) {
    if (qsign(z) < 0) return false;
    // sqrt(x) <= z - sqrt(y)  <=>  z >= sqrt(y)  and  x <= z^2 + y - 2 z sqrt(y)
    if (z * z < y) return false;
    const QNum rhs = z * z + y - x;  // need 2 z sqrt(y) <= rhs
    if (qsign(rhs) < 0) return false;
    return QNum(4) * z * z * y <= rhs * rhs;
}

// Exact test sqrt(v) <= sqrt(h) + sqrt(s) for v, h, s >= 0.
inline bool sqrt_at_most_sum(const QNum& v, const QNum& h, const QNum& s) {
    if (v <= h) return true;
    // (sqrt v - sqrt h)^2 <= s  <=>  v + h - s <= 2 sqrt(v h)
    const QNum lhs = v + h - s;
    if (qsign(lhs) <= 0) return true;
    return lhs * lhs <= QNum(4) * v * h;
}

// Ring triple "a b den"; for logs and test diagnostics.
inline std::ostream& operator<<(std::ostream& os, const QNum& q) { return os << q.to_string(); }

inline QNum QNum::parse(std::string_view text) {
    auto next = [&](std::size_t& pos) -> Integer {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        const std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        const std::size_t digits = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == digits) throw std::invalid_argument("malformed QNum: '" + std::string(text) + "'");
        return Integer(std::string(text.substr(start, pos - start)));
    };
    std::size_t pos = 0;
    Integer a = next(pos);
    Integer b = next(pos);
    Integer den = next(pos);
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos != text.size()) throw std::invalid_argument("malformed QNum: '" + std::string(text) + "'");
    if (den <= 0) throw std::invalid_argument("QNum denominator must be positive: '" + std::string(text) + "'");
    return QNum(std::move(a), std::move(b), std::move(den));
}

}  // namespace aplab

#endif  // APERIODIC_LAB_QNUM_HPP
