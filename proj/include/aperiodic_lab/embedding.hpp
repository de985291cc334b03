#ifndef APERIODIC_LAB_EMBEDDING_HPP
#define APERIODIC_LAB_EMBEDDING_HPP

// Integer embedding of a point set for the analysis kernels.
//
// Every coordinate is written as (A + B tau) / D with one common
// denominator D for the whole sample, so a point becomes the integer vector
// (A_0, B_0, A_1, B_1).  Differences, squared norms and ball tests are then
// integer computations decided by ring_sign().  Int = std::int64_t is the
// fast path (components bounded by 2^24, products in __int128); Int = Integer
// handles anything larger.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "aperiodic_lab/point.hpp"
#include "aperiodic_lab/point_set.hpp"
#include "aperiodic_lab/qnum.hpp"

namespace aplab {

namespace detail {

template <class Int>
struct WideOf;
template <>
struct WideOf<std::int64_t> {
    using type = __int128;
};
template <>
struct WideOf<Integer> {
    using type = Integer;
};

inline Integer to_integer(std::int64_t v) { return Integer(v); }
inline const Integer& to_integer(const Integer& v) { return v; }

template <class Int>
Int from_integer(const Integer& v);
template <>
inline std::int64_t from_integer<std::int64_t>(const Integer& v) {
    return v.convert_to<std::int64_t>();
}
template <>
inline Integer from_integer<Integer>(const Integer& v) {
    return v;
}

inline constexpr std::int64_t kFastComponentBound = std::int64_t{1} << 24;
inline const Integer& fast_threshold_bound() {
    static const Integer b = Integer(1) << 60;
    return b;
}

}  // namespace detail

template <class Int>
class Embedding {
public:
    using Wide = typename detail::WideOf<Int>::type;
    using Coords = std::array<Int, 4>;

    struct Norm {
        Wide sa{};  // rational part of |v|^2 * D^2
        Wide sb{};  // tau part
    };

    // r^2 * D^2 = (a + b tau) / den; `wide_ok` means the comparison
    // den * |v|^2 D^2 - (a + b tau) cannot overflow Wide.
    struct Threshold {
        Wide a{};
        Wide b{};
        Wide den{1};
        bool wide_ok = true;
        Integer big_a;
        Integer big_b;
        Integer big_den;
    };

    // Largest component magnitude after scaling to the common denominator.
    static Integer max_component(const PointSet& X) {
        const Integer D = common_denominator(X);
        Integer m = 0;
        for (const auto& p : X.points()) {
            for (const auto& c : p.coords) {
                const Integer k = D / c.den();
                m = std::max(m, Integer(boost::multiprecision::abs(c.a() * k)));
                m = std::max(m, Integer(boost::multiprecision::abs(c.b() * k)));
            }
        }
        return m;
    }

    static bool fits(const PointSet& X) {
        if constexpr (std::is_same_v<Int, Integer>) {
            return true;
        } else {
            return max_component(X) <= Integer(detail::kFastComponentBound);
        }
    }

    explicit Embedding(const PointSet& X) : d_(X.dimension()), scale_(common_denominator(X)) {
        if (!fits(X)) throw std::out_of_range("coordinates exceed the fast embedding range");
        coords_.reserve(X.size());
        floors_.reserve(X.size());
        for (const auto& p : X.points()) {
            Coords c{};
            std::array<long long, 2> fl{0, 0};
            for (std::size_t i = 0; i < d_; ++i) {
                const Integer k = scale_ / p[i].den();
                c[2 * i] = detail::from_integer<Int>(p[i].a() * k);
                c[2 * i + 1] = detail::from_integer<Int>(p[i].b() * k);
                fl[i] = p[i].floor().template convert_to<long long>();
            }
            coords_.push_back(c);
            floors_.push_back(fl);
        }
    }

    std::size_t dimension() const { return d_; }
    std::size_t size() const { return coords_.size(); }
    const Coords& operator[](std::size_t i) const { return coords_[i]; }
    const Integer& scale() const { return scale_; }
    // floor of each real coordinate; only used to bucket points
    const std::array<long long, 2>& floors(std::size_t i) const { return floors_[i]; }

    Coords diff(std::size_t to, std::size_t from) const {
        Coords r{};
        for (std::size_t k = 0; k < 2 * d_; ++k) r[k] = coords_[to][k] - coords_[from][k];
        return r;
    }

    Norm norm(const Coords& v) const {
        Norm n;
        for (std::size_t i = 0; i < d_; ++i) {
            const Wide A = Wide(v[2 * i]);
            const Wide B = Wide(v[2 * i + 1]);
            // (A + B tau)^2 = A^2 + B^2 + (2AB + B^2) tau
            n.sa += A * A + B * B;
            n.sb += Wide(2) * A * B + B * B;
        }
        return n;
    }

    Threshold threshold(const QNum& radius_sq) const {
        const QNum t = radius_sq * QNum(scale_ * scale_);
        Threshold th;
        th.big_a = t.a();
        th.big_b = t.b();
        th.big_den = t.den();
        if constexpr (std::is_same_v<Wide, Integer>) {
            th.a = t.a();
            th.b = t.b();
            th.den = t.den();
        } else {
            // |norm| <= 6 d (2 * 2^24)^2 < 2^53
            const Integer norm_bound = Integer(1) << 53;
            const Integer& lim = detail::fast_threshold_bound();
            th.wide_ok = t.den() * norm_bound + boost::multiprecision::abs(t.a()) <= lim &&
                         t.den() * norm_bound + boost::multiprecision::abs(t.b()) <= lim;
            if (th.wide_ok) {
                th.a = static_cast<Wide>(t.a().template convert_to<std::int64_t>());
                th.b = static_cast<Wide>(t.b().template convert_to<std::int64_t>());
                th.den = static_cast<Wide>(t.den().template convert_to<std::int64_t>());
            }
        }
        return th;
    }

    // |v|^2 <= radius^2
    bool within(const Coords& v, const Threshold& th) const { return compare(norm(v), th) <= 0; }

    // sign(|v|^2 - radius^2)
    int compare(const Norm& n, const Threshold& th) const {
        if (th.wide_ok) return detail::ring_sign<Wide>(th.den * n.sa - th.a, th.den * n.sb - th.b);
        const Integer sa = detail::to_integer(n.sa);
        const Integer sb = detail::to_integer(n.sb);
        return detail::ring_sign<Integer>(th.big_den * sa - th.big_a, th.big_den * sb - th.big_b);
    }

    int compare(const Norm& u, const Norm& v) const { return detail::ring_sign<Wide>(u.sa - v.sa, u.sb - v.sb); }

    QNum to_qnum(const Norm& n) const {
        return QNum(detail::to_integer(n.sa), detail::to_integer(n.sb), scale_ * scale_);
    }

    Point to_point(const Coords& c) const {
        Point p;
        for (std::size_t i = 0; i < d_; ++i) {
            p.coords.emplace_back(detail::to_integer(c[2 * i]), detail::to_integer(c[2 * i + 1]), scale_);
        }
        return p;
    }

    static Integer common_denominator(const PointSet& X) {
        Integer D = 1;
        for (const auto& p : X.points()) {
            for (const auto& c : p.coords) {
                if (D % c.den() != 0) D = detail::lcm(D, c.den());
            }
        }
        return D;
    }

private:
    std::size_t d_;
    Integer scale_;
    std::vector<Coords> coords_;
    std::vector<std::array<long long, 2>> floors_;
};

// Uniform bucket grid over the integer floors of the coordinates.  An
// accelerator only: callers run the exact ball test on every candidate.
class BucketGrid {
public:
    template <class Int>
    BucketGrid(const Embedding<Int>& emb, long long cell) : cell_(cell) {
        if (emb.dimension() != 2) throw std::logic_error("BucketGrid is two-dimensional");
        if (emb.size() == 0) return;
        lo_x_ = hi_x_ = bucket(emb.floors(0)[0]);
        lo_y_ = hi_y_ = bucket(emb.floors(0)[1]);
        for (std::size_t i = 0; i < emb.size(); ++i) {
            lo_x_ = std::min(lo_x_, bucket(emb.floors(i)[0]));
            hi_x_ = std::max(hi_x_, bucket(emb.floors(i)[0]));
            lo_y_ = std::min(lo_y_, bucket(emb.floors(i)[1]));
            hi_y_ = std::max(hi_y_, bucket(emb.floors(i)[1]));
        }
        nx_ = hi_x_ - lo_x_ + 1;
        ny_ = hi_y_ - lo_y_ + 1;
        offsets_.assign(static_cast<std::size_t>(nx_ * ny_ + 1), 0);
        for (std::size_t i = 0; i < emb.size(); ++i) ++offsets_[slot(emb.floors(i)) + 1];
        for (std::size_t k = 1; k < offsets_.size(); ++k) offsets_[k] += offsets_[k - 1];
        items_.resize(emb.size());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t i = 0; i < emb.size(); ++i) items_[fill[slot(emb.floors(i))]++] = i;
    }

    long long cell() const { return cell_; }

    // Visit every point whose bucket lies within `reach` buckets of the
    // bucket holding floor coordinates (fx, fy).
    template <class F>
    void visit(long long fx, long long fy, long long reach, F&& f) const {
        if (items_.empty()) return;
        const long long bx = bucket(fx);
        const long long by = bucket(fy);
        const long long x0 = std::max(lo_x_, bx - reach);
        const long long x1 = std::min(hi_x_, bx + reach);
        const long long y0 = std::max(lo_y_, by - reach);
        const long long y1 = std::min(hi_y_, by + reach);
        for (long long x = x0; x <= x1; ++x) {
            for (long long y = y0; y <= y1; ++y) {
                const auto s = static_cast<std::size_t>((x - lo_x_) * ny_ + (y - lo_y_));
                for (std::size_t k = offsets_[s]; k < offsets_[s + 1]; ++k) f(items_[k]);
            }
        }
    }

private:
    long long bucket(long long v) const {
        return v >= 0 ? v / cell_ : -((-v + cell_ - 1) / cell_);
    }
    std::size_t slot(const std::array<long long, 2>& fl) const {
        return static_cast<std::size_t>((bucket(fl[0]) - lo_x_) * ny_ + (bucket(fl[1]) - lo_y_));
    }

    long long cell_;
    long long lo_x_ = 0, hi_x_ = 0, lo_y_ = 0, hi_y_ = 0, nx_ = 0, ny_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> items_;
};

}  // namespace aplab

#endif  // APERIODIC_LAB_EMBEDDING_HPP
