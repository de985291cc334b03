#ifndef APERIODIC_LAB_POINT_HPP
#define APERIODIC_LAB_POINT_HPP

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aperiodic_lab/qnum.hpp"

namespace aplab {

struct Point {
    std::vector<QNum> coords;

    Point() = default;
    explicit Point(std::vector<QNum> c) : coords(std::move(c)) {}
    Point(std::initializer_list<QNum> c) : coords(c) {}

    std::size_t dimension() const { return coords.size(); }
    const QNum& operator[](std::size_t i) const { return coords[i]; }
    QNum& operator[](std::size_t i) { return coords[i]; }

    static Point zero(std::size_t d) { return Point(std::vector<QNum>(d)); }

    friend bool operator==(const Point&, const Point&) = default;

    // Lexicographic by real value.
    friend std::strong_ordering operator<=>(const Point& p, const Point& q) {
        const std::size_t n = std::min(p.coords.size(), q.coords.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (auto c = p.coords[i] <=> q.coords[i]; c != 0) return c;
        }
        return p.coords.size() <=> q.coords.size();
    }
};

namespace detail {
inline void require_same_dimension(const Point& p, const Point& q) {
    if (p.dimension() != q.dimension()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(p.dimension()) + " vs " +
                                    std::to_string(q.dimension()));
    }
}
}  // namespace detail

inline Point operator-(const Point& p, const Point& q) {
    detail::require_same_dimension(p, q);
    Point r = p;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= q.coords[i];
    return r;
}

inline Point operator+(const Point& p, const Point& q) {
    detail::require_same_dimension(p, q);
    Point r = p;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += q.coords[i];
    return r;
}

inline Point operator*(const QNum& s, const Point& p) {
    Point r = p;
    for (auto& c : r.coords) c *= s;
    return r;
}

inline QNum norm_sq(const Point& v) {
    QNum s;
    for (const auto& c : v.coords) s += c * c;
    return s;
}

inline QNum sq_dist(const Point& p, const Point& q) {
    detail::require_same_dimension(p, q);
    QNum s;
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        const QNum d = p.coords[i] - q.coords[i];
        s += d * d;
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(';
    for (std::size_t i = 0; i < p.dimension(); ++i) os << (i ? "; " : "") << p[i];
    return os << ')';
}

inline bool is_zero(const Point& p) {
    for (const auto& c : p.coords) {
        if (!c.is_zero()) return false;
    }
    return true;
}

}  // namespace aplab

#endif  // APERIODIC_LAB_POINT_HPP
