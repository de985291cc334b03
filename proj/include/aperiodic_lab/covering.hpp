#ifndef APERIODIC_LAB_COVERING_HPP
#define APERIODIC_LAB_COVERING_HPP

// Covering radius of a finite center set over an evaluation ball B(0, rho):
// the largest distance from a point of the ball to its nearest center.
//
// d = 1 is exact.  d = 2 returns a certified bracket from a grid of step h:
// lo is the largest nearest-center distance over grid nodes inside
// B(0, rho), hi adds the node spacing slack h*sqrt(2)/2 to the largest one
// over nodes inside B(0, rho + h).  Both ends are kept as square roots of
// exact values, so membership and width tests stay exact.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aperiodic_lab/point.hpp"
#include "aperiodic_lab/point_set.hpp"
#include "aperiodic_lab/qnum.hpp"

namespace aplab {

// sqrt(lo_sq) <= radius <= sqrt(hi_sq) + sqrt(slack_sq)
struct RadiusBracket {
    QNum lo_sq;
    QNum hi_sq;
    QNum slack_sq;
    std::optional<QNum> exact;  // set when the radius itself is known exactly

    static RadiusBracket exact_value(const QNum& v) { return {v * v, v * v, QNum(0), v}; }

    bool is_exact() const { return exact.has_value(); }

    QNum lower_bound(unsigned bits = 48) const { return exact ? *exact : sqrt_lower(lo_sq, bits); }
    QNum upper_bound(unsigned bits = 48) const {
        return exact ? *exact : sqrt_upper(hi_sq, bits) + sqrt_upper(slack_sq, bits);
    }

    // lo <= sqrt(v_sq) <= hi
    bool contains_sqrt(const QNum& v_sq) const {
        return lo_sq <= v_sq && sqrt_at_most_sum(v_sq, hi_sq, slack_sq);
    }

    // hi <= z
    bool upper_at_most(const QNum& z) const {
        if (exact) return *exact <= z;
        return sqrt_sum_at_most(hi_sq, slack_sq, z);
    }

    // hi - lo <= sqrt(slack_sq), i.e. the bracket is no wider than the grid slack
    bool width_at_most_slack() const { return hi_sq <= lo_sq; }

    // Bracket of max(r1, r2) given brackets of r1 and r2 with equal slack.
    friend RadiusBracket max_of(const RadiusBracket& x, const RadiusBracket& y) {
        RadiusBracket r;
        r.lo_sq = max(x.lo_sq, y.lo_sq);
        r.hi_sq = max(x.hi_sq, y.hi_sq);
        r.slack_sq = max(x.slack_sq, y.slack_sq);
        if (x.exact && y.exact) r.exact = max(*x.exact, *y.exact);
        return r;
    }

    friend bool operator==(const RadiusBracket&, const RadiusBracket&) = default;
};

struct CoveringQuery {
    std::vector<Point> centers;
    QNum eval_radius;
    QNum grid_step = QNum::rational(1, 8);  // d = 2 only
};

// Exact covering radius over [-rho, rho] of sorted 1D centers.  The distance
// to the nearest center is piecewise linear, so its maximum sits at +-rho or
// at the midpoint of two consecutive centers.
inline QNum covering_radius_1d(std::span<const QNum> centers, const QNum& rho) {
    if (centers.empty()) throw std::invalid_argument("covering radius of an empty center set");
    if (qsign(rho) <= 0) throw std::invalid_argument("evaluation radius must be positive");
    auto nearest = [&](const QNum& p) {
        auto it = std::lower_bound(centers.begin(), centers.end(), p);
        QNum best;
        bool have = false;
        if (it != centers.end()) {
            best = *it - p;
            have = true;
        }
        if (it != centers.begin()) {
            const QNum d = p - *(it - 1);
            if (!have || d < best) best = d;
        }
        return best;
    };
    QNum m = max(nearest(-rho), nearest(rho));
    const QNum two = 2;
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
        const QNum mid = (centers[i] + centers[i + 1]) / two;
        if (mid < -rho) continue;
        if (mid > rho) break;
        const QNum half_gap = (centers[i + 1] - centers[i]) / two;
        if (half_gap > m) m = half_gap;
    }
    return m;
}

inline QNum covering_radius_1d(const CoveringQuery& q) {
    std::vector<QNum> xs;
    xs.reserve(q.centers.size());
    for (const auto& p : q.centers) {
        if (p.dimension() != 1) throw std::invalid_argument("covering_radius_1d needs 1D centers");
        xs.push_back(p[0]);
    }
    std::sort(xs.begin(), xs.end());
    return covering_radius_1d(xs, q.eval_radius);
}

namespace detail {

inline void check_grid_query(const QNum& rho, const QNum& h) {
    if (qsign(rho) <= 0) throw std::invalid_argument("evaluation radius must be positive");
    if (qsign(h) <= 0) throw std::invalid_argument("grid step must be positive");
    if (h > rho / QNum(8)) throw std::invalid_argument("grid step must not exceed rho / 8");
}

// Exact rational q = num / den, den > 0, or +infinity.
struct Frac {
    __int128 num = 0;
    __int128 den = 1;
    bool inf = false;
};

inline bool frac_le(const Frac& a, const Frac& b) {  // a <= b, a finite
    if (b.inf) return true;
    return a.num * b.den <= b.num * a.den;
}

inline bool frac_lt_int(const Frac& z, long long x) {  // z < x
    if (z.inf) return false;
    return z.num < static_cast<__int128>(x) * z.den;
}

}  // namespace detail

// Grid covering evaluator for rational 2D data.  All lengths are scaled to
// a fine integer grid of step 1/L containing every center and every node;
// nearest-center distances come from an exact separable distance transform
// (per-column nearest in y, then the lower envelope of parabolas in x).
class GridCoverer {
public:
    static bool applicable(const std::vector<Point>& points, const QNum& rho, const QNum& h) {
        if (!rho.is_rational() || !h.is_rational()) return false;
        for (const auto& p : points) {
            for (const auto& c : p.coords) {
                if (!c.is_rational()) return false;
            }
        }
        return true;
    }

    GridCoverer(const std::vector<Point>& points, const QNum& rho, const QNum& h) : h_(h) {
        detail::check_grid_query(rho, h);
        if (!applicable(points, rho, h)) throw std::invalid_argument("grid coverer needs rational data");
        Integer L = h.den();
        for (const auto& p : points) {
            if (p.dimension() != 2) throw std::invalid_argument("grid coverer needs 2D points");
            for (const auto& c : p.coords) {
                if (L % c.den() != 0) L = detail::lcm(L, c.den());
            }
        }
        scale_ = L;
        stride_ = to_ll((h * QNum(L)).floor());
        fine_.reserve(points.size());
        for (const auto& p : points) {
            fine_.push_back({to_ll(p[0].a() * (L / p[0].den())), to_ll(p[1].a() * (L / p[1].den()))});
        }
        const QNum rin = rho * QNum(L);
        const QNum rout = (rho + h) * QNum(L);
        const long long r_in = to_ll((rin * rin).floor());
        const long long r_out = to_ll((rout * rout).floor());
        rows_ = to_ll(((rho + h) / h).floor());
        const __int128 s2 = static_cast<__int128>(stride_) * stride_;
        for (long long j = -rows_; j <= rows_; ++j) {
            const __int128 yy = static_cast<__int128>(j) * j * s2;
            half_out_.push_back(half_width(r_out, yy, s2));
            half_in_.push_back(half_width(r_in, yy, s2));
        }
    }

    std::size_t size() const { return fine_.size(); }

    // Bracket for the centers with the given indices.
    RadiusBracket evaluate(std::span<const std::size_t> subset) const {
        if (subset.empty()) throw std::invalid_argument("covering radius of an empty center set");
        std::vector<std::array<long long, 2>> pts;
        pts.reserve(subset.size());
        for (std::size_t i : subset) pts.push_back(fine_[i]);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

        // columns: distinct x, each with its sorted y values
        std::vector<long long> col_x;
        std::vector<std::size_t> col_begin;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k == 0 || pts[k][0] != pts[k - 1][0]) {
                col_x.push_back(pts[k][0]);
                col_begin.push_back(k);
            }
        }
        col_begin.push_back(pts.size());
        const std::size_t ncols = col_x.size();
        std::vector<std::size_t> ptr(col_begin.begin(), col_begin.end() - 1);
        std::vector<__int128> g(ncols);
        std::vector<std::size_t> v(ncols);
        std::vector<detail::Frac> z(ncols + 1);

        __int128 best_in = -1;
        __int128 best_out = -1;
        for (long long j = -rows_; j <= rows_; ++j) {
            const long long a_out = half_out_[static_cast<std::size_t>(j + rows_)];
            if (a_out < 0) continue;
            const long long a_in = half_in_[static_cast<std::size_t>(j + rows_)];
            const long long y = j * stride_;
            for (std::size_t c = 0; c < ncols; ++c) {
                std::size_t& p = ptr[c];
                const std::size_t end = col_begin[c + 1];
                while (p + 1 < end && pts[p + 1][1] <= y) ++p;
                __int128 best = sq(pts[p][1] - y);
                if (p + 1 < end) best = std::min(best, sq(pts[p + 1][1] - y));
                g[c] = best;
            }
            // lower envelope of f_c(x) = (x - col_x[c])^2 + g[c]
            std::size_t k = 0;
            v[0] = 0;
            z[0] = detail::Frac{0, 1, true};  // -inf (never compared as a left bound)
            z[1] = detail::Frac{0, 1, true};
            for (std::size_t q = 1; q < ncols; ++q) {
                for (;;) {
                    const std::size_t pcol = v[k];
                    const __int128 num = (g[q] + sq(col_x[q])) - (g[pcol] + sq(col_x[pcol]));
                    const __int128 den = 2 * static_cast<__int128>(col_x[q] - col_x[pcol]);
                    const detail::Frac s{num, den, false};
                    if (k > 0 && frac_le(s, z[k])) {
                        --k;
                        continue;
                    }
                    ++k;
                    v[k] = q;
                    z[k] = s;
                    z[k + 1] = detail::Frac{0, 1, true};
                    break;
                }
            }
            std::size_t e = 0;
            for (long long i = -a_out; i <= a_out; ++i) {
                const long long x = i * stride_;
                while (e < k && detail::frac_lt_int(z[e + 1], x)) ++e;
                const std::size_t c = v[e];
                const __int128 d = sq(x - col_x[c]) + g[c];
                best_out = std::max(best_out, d);
                if (i >= -a_in && i <= a_in) best_in = std::max(best_in, d);
            }
        }
        const Integer l2 = scale_ * scale_;
        RadiusBracket r;
        r.lo_sq = QNum::rational(detail::to_integer(best_in < 0 ? 0 : best_in), l2);
        r.hi_sq = QNum::rational(detail::to_integer(best_out < 0 ? 0 : best_out), l2);
        r.slack_sq = h_ * h_ / QNum(2);
        return r;
    }

private:
    static __int128 sq(long long v) { return static_cast<__int128>(v) * v; }

    static long long to_ll(const Integer& v) {
        if (boost::multiprecision::abs(v) > Integer(1LL << 40)) {
            throw std::out_of_range("grid covering range exceeded; use a coarser grid step");
        }
        return v.convert_to<long long>();
    }

    // largest a >= 0 with a^2 s2 <= r - yy, or -1
    static long long half_width(long long r, __int128 yy, __int128 s2) {
        const __int128 rem = static_cast<__int128>(r) - yy;
        if (rem < 0) return -1;
        const auto lim = static_cast<long long>(rem / s2);
        auto a = static_cast<long long>(detail::isqrt(Integer(lim)).convert_to<long long>());
        return a;
    }

    QNum h_;
    Integer scale_;
    long long stride_ = 1;
    long long rows_ = 0;
    std::vector<long long> half_out_;
    std::vector<long long> half_in_;
    std::vector<std::array<long long, 2>> fine_;
};

// Direct evaluation: every node against every center, value arithmetic.
inline RadiusBracket covering_radius_2d_bruteforce(const CoveringQuery& q) {
    if (q.centers.empty()) throw std::invalid_argument("covering radius of an empty center set");
    const QNum& rho = q.eval_radius;
    const QNum& h = q.grid_step;
    detail::check_grid_query(rho, h);
    const long long n = ((rho + h) / h).floor().convert_to<long long>();
    const QNum in2 = rho * rho;
    const QNum out2 = (rho + h) * (rho + h);
    QNum best_in = -1;
    QNum best_out = -1;
    for (long long i = -n; i <= n; ++i) {
        for (long long j = -n; j <= n; ++j) {
            const Point node{QNum(i) * h, QNum(j) * h};
            const QNum r2 = norm_sq(node);
            if (r2 > out2) continue;
            QNum best;
            bool have = false;
            for (const auto& c : q.centers) {
                const QNum d = sq_dist(node, c);
                if (!have || d < best) {
                    best = d;
                    have = true;
                }
            }
            if (best > best_out) best_out = best;
            if (r2 <= in2 && best > best_in) best_in = best;
        }
    }
    return RadiusBracket{max(best_in, QNum(0)), max(best_out, QNum(0)), h * h / QNum(2), std::nullopt};
}

inline RadiusBracket covering_radius_2d(const CoveringQuery& q) {
    if (q.centers.empty()) throw std::invalid_argument("covering radius of an empty center set");
    for (const auto& c : q.centers) {
        if (c.dimension() != 2) throw std::invalid_argument("covering_radius_2d needs 2D centers");
    }
    if (!GridCoverer::applicable(q.centers, q.eval_radius, q.grid_step)) return covering_radius_2d_bruteforce(q);
    GridCoverer cov(q.centers, q.eval_radius, q.grid_step);
    std::vector<std::size_t> all(q.centers.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return cov.evaluate(all);
}

inline RadiusBracket covering_radius(std::size_t d, const CoveringQuery& q) {
    if (d == 1) return RadiusBracket::exact_value(covering_radius_1d(q));
    return covering_radius_2d(q);
}

}  // namespace aplab

#endif  // APERIODIC_LAB_COVERING_HPP
