#ifndef APERIODIC_LAB_CERTIFICATES_HPP
#define APERIODIC_LAB_CERTIFICATES_HPP

// Constant estimation and the lemma checklist.
//
// Squared lengths are kept exact.  Where a square root is unavoidable
// (kappa in the volume constant, N^(1/d) in d = 2) a rational bound is taken
// on the conservative side: lower bounds for kappa and N^(1/2), upper bounds
// for M.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aperiodic_lab/covering.hpp"
#include "aperiodic_lab/instrumentation.hpp"
#include "aperiodic_lab/parallel.hpp"
#include "aperiodic_lab/patch_engine.hpp"
#include "aperiodic_lab/repetitivity.hpp"

namespace aplab {

// ---------------------------------------------------------------- pairs

struct ClosestPair {
    std::optional<QNum> dist_sq;  // empty when fewer than two points
    std::array<std::size_t, 2> witness{0, 0};
};

namespace detail {

// Closest pair among sample indices `idx` (ascending, hence lexicographic).
// Sweep in x: once the x-gap alone reaches the best distance, stop.
template <class Int>
ClosestPair closest_pair(const Embedding<Int>& emb, std::span<const std::size_t> idx) {
    using Norm = typename Embedding<Int>::Norm;
    ClosestPair out;
    if (idx.size() < 2) return out;
    Norm best{};
    bool have = false;
    if (emb.dimension() == 1) {
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            const Norm n = emb.norm(emb.diff(idx[k + 1], idx[k]));
            if (!have || emb.compare(n, best) < 0) {
                best = n;
                have = true;
                out.witness = {idx[k], idx[k + 1]};
            }
        }
    } else {
        for (std::size_t k = 0; k < idx.size(); ++k) {
            for (std::size_t l = k + 1; l < idx.size(); ++l) {
                auto v = emb.diff(idx[l], idx[k]);
                auto vx = v;
                vx[2] = 0;
                vx[3] = 0;
                if (have && emb.compare(emb.norm(vx), best) >= 0) break;
                const Norm n = emb.norm(v);
                if (!have || emb.compare(n, best) < 0) {
                    best = n;
                    have = true;
                    out.witness = {idx[k], idx[l]};
                }
            }
        }
    }
    out.dist_sq = emb.to_qnum(best);
    return out;
}

inline std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

inline QNum power_d(const QNum& x, std::size_t d) { return d == 1 ? x : x * x; }

}  // namespace detail

inline ClosestPair closest_pair(const PatchEngine& engine, std::span<const std::size_t> idx) {
    return engine.visit([&](const auto& e) { return detail::closest_pair(e.embedding(), idx); });
}

// ---------------------------------------------------------------- Delone parameters

// r_hat = half the minimum nearest-neighbour distance; R_hat = covering
// radius of the whole sample over B(0, W / 2).
struct DeloneParams {
    QNum min_gap_sq;
    QNum r_sq;
    std::array<std::size_t, 2> witness{0, 0};
    RadiusBracket R;
    QNum R_eval_radius;
    QNum R_grid_step;  // 0 in d = 1
};

inline DeloneParams packing_covering(const PatchEngine& engine, const std::optional<QNum>& grid_step = std::nullopt) {
    const PointSet& X = engine.sample();
    if (X.size() < 2) throw std::invalid_argument("packing/covering radii need at least two points");
    const auto all = detail::iota_indices(X.size());
    const ClosestPair cp = closest_pair(engine, all);
    DeloneParams p;
    p.min_gap_sq = *cp.dist_sq;
    p.r_sq = p.min_gap_sq / QNum(4);
    p.witness = cp.witness;
    p.R_eval_radius = X.window_radius() / QNum(2);
    if (X.dimension() == 1) {
        std::vector<QNum> xs;
        xs.reserve(X.size());
        for (const auto& q : X.points()) xs.push_back(q[0]);
        p.R = RadiusBracket::exact_value(covering_radius_1d(xs, p.R_eval_radius));
        p.R_grid_step = 0;
    } else {
        p.R_grid_step = grid_step ? *grid_step : auto_grid_step(p.R_eval_radius);
        CoveringQuery q;
        q.centers = X.points();
        q.eval_radius = p.R_eval_radius;
        q.grid_step = p.R_grid_step;
        p.R = covering_radius_2d(q);
    }
    return p;
}

inline DeloneParams packing_covering(const PointSet& X) { return packing_covering(PatchEngine(X)); }

// ---------------------------------------------------------------- periods

namespace detail {

template <class Int>
std::optional<Point> detect_period(const Embedding<Int>& emb, const QNum& W, const QNum& max_norm,
                                   std::span<const int> labels) {
    using Coords = typename Embedding<Int>::Coords;
    const std::size_t n = emb.size();
    if (n == 0) return std::nullopt;
    const std::size_t width = 2 * emb.dimension();
    auto less = [width](const Coords& a, const Coords& b) {
        for (std::size_t k = 0; k < width; ++k) {
            if (a[k] != b[k]) return a[k] < b[k];
        }
        return false;
    };
    std::vector<std::pair<Coords, int>> table;
    table.reserve(n);
    for (std::size_t i = 0; i < n; ++i) table.emplace_back(emb[i], labels.empty() ? 0 : labels[i]);
    std::sort(table.begin(), table.end(), [&](const auto& a, const auto& b) { return less(a.first, b.first); });
    auto lookup = [&](const Coords& c) -> const int* {
        auto it = std::lower_bound(table.begin(), table.end(), c,
                                   [&](const auto& e, const Coords& key) { return less(e.first, key); });
        if (it == table.end() || less(c, it->first)) return nullptr;
        return &it->second;
    };
    auto label = [&](std::size_t i) { return labels.empty() ? 0 : labels[i]; };

    const auto th_m = emb.threshold(max_norm * max_norm);
    const QNum inner = W - max_norm;
    const auto th_in = emb.threshold(inner * inner);

    // a period t maps the point nearest the origin onto a sample point
    std::size_t x0 = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (emb.compare(emb.norm(emb[i]), emb.norm(emb[x0])) < 0) x0 = i;
    }
    if (!emb.within(emb[x0], th_in)) return std::nullopt;

    auto positive_first = [&](const Coords& c) {
        for (std::size_t i = 0; i < emb.dimension(); ++i) {
            const int s = ring_sign<Int>(c[2 * i], c[2 * i + 1]);
            if (s != 0) return s > 0;
        }
        return false;
    };
    std::vector<Coords> cands;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == x0) continue;
        Coords t = emb.diff(j, x0);
        if (!emb.within(t, th_m)) continue;
        if (!positive_first(t)) {
            for (std::size_t k = 0; k < width; ++k) t[k] = -t[k];
        }
        cands.push_back(t);
    }
    std::sort(cands.begin(), cands.end(), [&](const Coords& a, const Coords& b) {
        const int c = emb.compare(emb.norm(a), emb.norm(b));
        if (c != 0) return c < 0;
        return less(a, b);
    });
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    for (const Coords& t : cands) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            // x in B(0, W - m): x + t must be a sample point with the same label
            if (emb.within(emb[i], th_in)) {
                Coords s = emb[i];
                for (std::size_t k = 0; k < width; ++k) s[k] += t[k];
                const int* l = lookup(s);
                ok = l != nullptr && *l == label(i);
            }
            if (!ok) break;
            // y with y - t in B(0, W - m): y - t must be a sample point
            Coords s = emb[i];
            for (std::size_t k = 0; k < width; ++k) s[k] -= t[k];
            if (emb.within(s, th_in)) {
                const int* l = lookup(s);
                ok = l != nullptr && *l == label(i);
            }
        }
        if (ok) return emb.to_point(t);
    }
    return std::nullopt;
}

}  // namespace detail

// Shortest t (norm, then lexicographic; first nonzero coordinate positive)
// with 0 < |t| <= max_norm and (X - t) = X on B(0, W - max_norm).  With
// labels, both sets carry them and they must agree too.  max_norm is capped
// at W / 4 unless `allow_deep` (then anything below W).
inline std::optional<Point> detect_period(const PatchEngine& engine, const QNum& max_norm,
                                          std::span<const int> labels = {}, bool allow_deep = false) {
    const PointSet& X = engine.sample();
    if (qsign(max_norm) <= 0) throw std::invalid_argument("max_norm must be positive");
    if (!allow_deep && max_norm > X.window_radius() / QNum(4)) {
        throw std::invalid_argument("max_norm must not exceed W / 4");
    }
    if (!(max_norm < X.window_radius())) throw std::invalid_argument("max_norm must be below W");
    if (!labels.empty() && labels.size() != X.size()) throw std::invalid_argument("one label per point required");
    return engine.visit(
        [&](const auto& e) { return detail::detect_period(e.embedding(), X.window_radius(), max_norm, labels); });
}

inline std::optional<Point> detect_period(const PointSet& X, const QNum& max_norm, std::span<const int> labels = {},
                                          bool allow_deep = false) {
    return detect_period(PatchEngine(X), max_norm, labels, allow_deep);
}

// ---------------------------------------------------------------- repulsion

struct RepulsionRow {
    QNum T;
    std::optional<QNum> min_pair_sq;  // closest equal-patch pair; empty = all groups singletons
    std::array<std::size_t, 2> witness{0, 0};

    // (min pair / T)^2, empty meaning +infinity
    std::optional<QNum> ratio_sq() const {
        if (!min_pair_sq) return std::nullopt;
        return *min_pair_sq / (T * T);
    }
};

inline RepulsionRow repulsion_ratio(const PatchEngine& engine, const PatchCount& count, unsigned threads = 1) {
    if (!(count.radius > QNum(1))) throw std::invalid_argument("repulsion ratio needs T > 1");
    const auto& groups = count.occurrences.groups;
    std::vector<ClosestPair> per(groups.size());
    parallel_chunks(groups.size(), std::max(1U, threads), [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t g = b; g < e; ++g) per[g] = closest_pair(engine, groups[g].centers);
    });
    RepulsionRow row;
    row.T = count.radius;
    for (const auto& cp : per) {
        if (cp.dist_sq && (!row.min_pair_sq || *cp.dist_sq < *row.min_pair_sq)) {
            row.min_pair_sq = cp.dist_sq;
            row.witness = cp.witness;
        }
    }
    return row;
}

inline RepulsionRow repulsion_ratio(const PointSet& X, const QNum& T) {
    const PatchEngine engine(X);
    return repulsion_ratio(engine, engine.count(T));
}

// Rows with T in [lo, hi].
template <class Row>
std::vector<const Row*> rows_in(const std::vector<Row>& rows, const QNum& lo, const QNum& hi) {
    std::vector<const Row*> out;
    for (const auto& r : rows) {
        if (lo <= r.T && r.T <= hi) out.push_back(&r);
    }
    return out;
}

inline std::optional<QNum> min_ratio_sq(std::span<const RepulsionRow* const> rows) {
    std::optional<QNum> m;
    for (const auto* r : rows) {
        auto v = r->ratio_sq();
        if (v && (!m || *v < *m)) m = v;
    }
    return m;
}

struct KappaEstimate {
    std::optional<QNum> kappa_sq;  // empty = +infinity
    QNum kappa_T;                  // row attaining the minimum
    std::string trend;             // "bounded below", "decaying", "inconclusive"
    std::optional<QNum> low_min_sq;
    std::optional<QNum> high_min_sq;
    QNum low_lo, low_hi, high_lo, high_hi;
};

// Trend: the minimum over [high_lo, high_hi] against the minimum over
// [low_lo, low_hi].  Bounded below when it keeps at least 3/4 of the lower
// value (9/16 on squares); halving on doubling T is the periodic signature.
inline KappaEstimate kappa_hat(const std::vector<RepulsionRow>& rows, const QNum& low_lo, const QNum& low_hi,
                               const QNum& high_lo, const QNum& high_hi) {
    KappaEstimate k;
    k.low_lo = low_lo;
    k.low_hi = low_hi;
    k.high_lo = high_lo;
    k.high_hi = high_hi;
    for (const auto& r : rows) {
        if (!(r.T > QNum(1))) throw std::invalid_argument("kappa grid must satisfy T > 1");
        auto v = r.ratio_sq();
        if (v && (!k.kappa_sq || *v < *k.kappa_sq)) {
            k.kappa_sq = v;
            k.kappa_T = r.T;
        }
    }
    const auto low = rows_in(rows, low_lo, low_hi);
    const auto high = rows_in(rows, high_lo, high_hi);
    k.low_min_sq = min_ratio_sq(low);
    k.high_min_sq = min_ratio_sq(high);
    if (low.empty() || high.empty() || !k.low_min_sq || !k.high_min_sq) {
        k.trend = "inconclusive";
    } else if (*k.high_min_sq * QNum(16) >= *k.low_min_sq * QNum(9)) {
        k.trend = "bounded below";
    } else {
        k.trend = "decaying";
    }
    return k;
}

inline KappaEstimate kappa_hat(const std::vector<RepulsionRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("empty kappa grid");
    QNum tmax = rows.front().T;
    for (const auto& r : rows) tmax = max(tmax, r.T);
    return kappa_hat(rows, tmax / QNum(4), tmax / QNum(2), tmax / QNum(2), tmax);
}

// ---------------------------------------------------------------- repetitivity constants

inline QNum m_upper(const RepetitivityRow& r) { return r.M.is_exact() ? *r.M.exact : r.M.upper_bound(); }

// N^(1/d) from below (d = 2 via a rational square-root bound).
inline QNum count_root_lower(std::size_t N, std::size_t d) {
    const QNum n(static_cast<long long>(N));
    return d == 1 ? n : sqrt_lower(n);
}

struct ConstantEstimate {
    std::optional<QNum> value;  // empty = no valid rows
    QNum argmax_T;
    std::size_t rows_used = 0;
};

inline ConstantEstimate lr_constant(const std::vector<RepetitivityRow>& rows,
                                    const std::optional<std::pair<QNum, QNum>>& range = std::nullopt) {
    ConstantEstimate c;
    for (const auto& r : rows) {
        if (!r.valid) continue;
        if (range && (r.T < range->first || r.T > range->second)) continue;
        const QNum v = m_upper(r) / r.T;
        ++c.rows_used;
        if (!c.value || v > *c.value) {
            c.value = v;
            c.argmax_T = r.T;
        }
    }
    return c;
}

inline ConstantEstimate dr_constant(const std::vector<RepetitivityRow>& rows, std::size_t d,
                                    const std::optional<std::pair<QNum, QNum>>& range = std::nullopt) {
    ConstantEstimate c;
    for (const auto& r : rows) {
        if (!r.valid) continue;
        if (range && (r.T < range->first || r.T > range->second)) continue;
        const QNum v = m_upper(r) / count_root_lower(r.patch_types, d);
        ++c.rows_used;
        if (!c.value || v > *c.value) {
            c.value = v;
            c.argmax_T = r.T;
        }
    }
    return c;
}

inline std::optional<QNum> largest_valid_T(const std::vector<RepetitivityRow>& rows) {
    std::optional<QNum> t;
    for (const auto& r : rows) {
        if (r.valid && (!t || r.T > *t)) t = r.T;
    }
    return t;
}

// ---------------------------------------------------------------- liminf

struct LiminfReport {
    std::optional<QNum> high_min;  // min N/T^d over [Tmax/2, Tmax]
    std::optional<QNum> low_min;   // over [Tmax/4, Tmax/2]
    QNum t_max;
    bool positive = false;
    bool stable = false;
};

inline LiminfReport liminf_report(const std::vector<ComplexityRow>& rows, std::size_t d) {
    if (rows.empty()) throw std::invalid_argument("empty complexity profile");
    LiminfReport L;
    L.t_max = rows.front().T;
    for (const auto& r : rows) L.t_max = max(L.t_max, r.T);
    auto min_over = [&](const QNum& lo, const QNum& hi) {
        std::optional<QNum> m;
        for (const auto& r : rows) {
            if (r.T < lo || r.T > hi) continue;
            const QNum v = QNum(static_cast<long long>(r.count)) / detail::power_d(r.T, d);
            if (!m || v < *m) m = v;
        }
        return m;
    };
    L.high_min = min_over(L.t_max / QNum(2), L.t_max);
    L.low_min = min_over(L.t_max / QNum(4), L.t_max / QNum(2));
    L.positive = L.high_min && qsign(*L.high_min) > 0;
    L.stable = L.high_min && L.low_min && *L.high_min * QNum(4) >= *L.low_min * QNum(3) &&
               *L.high_min * QNum(4) <= *L.low_min * QNum(5);
    return L;
}

// ---------------------------------------------------------------- proof window check

struct Lemma1Row {
    QNum T;
    bool has_pair = false;
    QNum pair_sq;
    bool in_window = false;
    std::array<std::size_t, 2> witness{0, 0};
};

struct Lemma1Check {
    std::string status;  // pass / fail / inconclusive
    std::vector<Lemma1Row> rows;
    std::optional<Lemma1Row> first_violation;
};

// Does sqrt(a) lie in [sqrt(b), T sqrt(b) / ((C + 1)(1 + sqrt(b)))]?  The
// upper end is T / ((C + 1)(1/r + 1)) with r = sqrt(b).
inline bool in_lemma1_window(const QNum& a, const QNum& b, const QNum& T, const QNum& C) {
    if (a < b) return false;
    const QNum c1 = (C + QNum(1)) * (C + QNum(1));
    // sqrt(a) (C+1)(1 + sqrt b) <= T sqrt b  <=>  2 a c1 sqrt(b) <= T^2 b - a c1 (1 + b)
    const QNum L = T * T * b - a * c1 * (QNum(1) + b);
    if (qsign(L) < 0) return false;
    const QNum M = QNum(2) * a * c1;
    return M * M * b <= L * L;
}

// The closest equal-patch pair decides each row: every other pair is
// farther away, and all distinct points are at least 2 r apart.
inline Lemma1Check lemma1_proof_bound_check(const std::vector<RepulsionRow>& rows, const QNum& r_sq,
                                            const std::optional<QNum>& c_lr) {
    Lemma1Check out;
    if (!c_lr) {
        out.status = "inconclusive";
        return out;
    }
    for (const auto& r : rows) {
        Lemma1Row row;
        row.T = r.T;
        if (r.min_pair_sq) {
            row.has_pair = true;
            row.pair_sq = *r.min_pair_sq;
            row.witness = r.witness;
            row.in_window = in_lemma1_window(*r.min_pair_sq, r_sq, r.T, *c_lr);
        }
        if (row.in_window && !out.first_violation) out.first_violation = row;
        out.rows.push_back(row);
    }
    out.status = out.first_violation ? "fail" : "pass";
    return out;
}

// ---------------------------------------------------------------- ball counts and lambda_1

namespace detail {

inline unsigned __int128 isqrt_u128(unsigned __int128 v) {
    if (v < 2) return v;
    unsigned __int128 x = v;
    unsigned __int128 y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + v / x) / 2;
    }
    return x;
}

inline QNum van_der_corput(std::uint64_t k, std::uint64_t base) {
    Integer num = 0;
    Integer den = 1;
    while (k > 0) {
        den *= Integer(base);
        num = num * Integer(base) + Integer(k % base);
        k /= base;
    }
    return QNum::rational(num, den);
}

}  // namespace detail

// Deterministic probe points in B(0, radius): van der Corput in d = 1, the
// (2, 3) Halton sequence restricted to the disc in d = 2.
inline std::vector<Point> probe_points(std::size_t d, const QNum& radius, std::size_t count) {
    std::vector<Point> out;
    const QNum two = 2;
    for (std::uint64_t k = 1; out.size() < count; ++k) {
        const QNum u = detail::van_der_corput(k, 2);
        if (d == 1) {
            out.push_back(Point{(two * u - QNum(1)) * radius});
            continue;
        }
        const QNum v = detail::van_der_corput(k, 3);
        const QNum x = two * u - QNum(1);
        const QNum y = two * v - QNum(1);
        if (x * x + y * y <= QNum(1)) out.push_back(Point{x * radius, y * radius});
    }
    return out;
}

// #(X cap B(p, T)) for many queries.
class BallCounter {
public:
    explicit BallCounter(const PointSet& X) : X_(&X) {
        if (X.dimension() == 1) {
            for (const auto& p : X.points()) xs_.push_back(p[0]);
            return;
        }
        rational_ = true;
        Integer L = 1;
        for (const auto& p : X.points()) {
            for (const auto& c : p.coords) {
                if (!c.is_rational()) rational_ = false;
                if (L % c.den() != 0) L = detail::lcm(L, c.den());
            }
        }
        if (!rational_) return;
        scale_ = L;
        for (const auto& p : X.points()) {
            const long long x = small(p[0].a() * (L / p[0].den()));
            const long long y = small(p[1].a() * (L / p[1].den()));
            if (col_x_.empty() || col_x_.back() != x) {
                col_x_.push_back(x);
                col_begin_.push_back(ys_.size());
            }
            ys_.push_back(y);
        }
        col_begin_.push_back(ys_.size());
    }

    std::size_t count(const Point& p, const QNum& T) const {
        if (X_->dimension() == 1) {
            auto lo = std::lower_bound(xs_.begin(), xs_.end(), p[0] - T);
            auto hi = std::upper_bound(xs_.begin(), xs_.end(), p[0] + T);
            return static_cast<std::size_t>(hi - lo);
        }
        if (rational_ && p[0].is_rational() && p[1].is_rational() && T.is_rational()) return count_rational(p, T);
        const QNum t2 = T * T;
        std::size_t n = 0;
        for (const auto& q : X_->points()) {
            if (sq_dist(p, q) <= t2) ++n;
        }
        return n;
    }

private:
    static long long small(const Integer& v) {
        if (boost::multiprecision::abs(v) > Integer(1LL << 40)) throw std::out_of_range("ball counter range exceeded");
        return v.convert_to<long long>();
    }

    // Everything scaled to integers by S = lcm(L, probe and radius denominators).
    std::size_t count_rational(const Point& p, const QNum& T) const {
        Integer S = scale_;
        for (const Integer* den : {&p[0].den(), &p[1].den(), &T.den()}) {
            if (S % *den != 0) S = detail::lcm(S, *den);
        }
        const Integer k_big = S / scale_;
        if (k_big > Integer(1LL << 30) || S > Integer(1LL << 40)) {
            throw std::out_of_range("ball counter scale exceeded");
        }
        const auto k = static_cast<__int128>(k_big.convert_to<long long>());
        const auto px = static_cast<__int128>(small(p[0].a() * (S / p[0].den())));
        const auto py = static_cast<__int128>(small(p[1].a() * (S / p[1].den())));
        const auto R = static_cast<__int128>(small(T.a() * (S / T.den())));
        const __int128 R2 = R * R;
        // columns with |x k - px| <= R
        auto first = std::lower_bound(col_x_.begin(), col_x_.end(), px - R,
                                      [&](long long x, __int128 key) { return static_cast<__int128>(x) * k < key; });
        std::size_t n = 0;
        for (auto it = first; it != col_x_.end() && static_cast<__int128>(*it) * k <= px + R; ++it) {
            const __int128 dx = static_cast<__int128>(*it) * k - px;
            const __int128 rem = R2 - dx * dx;
            if (rem < 0) continue;
            const auto w = static_cast<__int128>(detail::isqrt_u128(static_cast<unsigned __int128>(rem)));
            const std::size_t c = static_cast<std::size_t>(it - col_x_.begin());
            auto yb = ys_.begin() + static_cast<std::ptrdiff_t>(col_begin_[c]);
            auto ye = ys_.begin() + static_cast<std::ptrdiff_t>(col_begin_[c + 1]);
            auto lo = std::lower_bound(yb, ye, py - w,
                                       [&](long long y, __int128 key) { return static_cast<__int128>(y) * k < key; });
            auto hi = std::upper_bound(lo, ye, py + w,
                                       [&](__int128 key, long long y) { return key < static_cast<__int128>(y) * k; });
            n += static_cast<std::size_t>(hi - lo);
        }
        return n;
    }

    const PointSet* X_;
    std::vector<QNum> xs_;
    bool rational_ = false;
    Integer scale_ = 1;
    std::vector<long long> col_x_;
    std::vector<std::size_t> col_begin_;
    std::vector<long long> ys_;
};

struct Lambda1Row {
    QNum T;
    QNum min_n;   // min over the first n probes of #(X cap B(p, T)) / T^d
    QNum min_2n;  // over all 2n probes
    std::size_t argmin_probe = 0;
    bool stable = false;  // min_2n >= 0.9 min_n
};

struct Lambda1Estimate {
    std::optional<QNum> lambda1;
    std::optional<QNum> t1;
    std::size_t probes = 0;
    QNum probe_radius;
    std::vector<Lambda1Row> rows;
};

// lambda1 = min over rows T >= T1 of min_2n, where T1 is the smallest grid
// value from which every row is stable under doubling the probe count.
inline Lambda1Estimate lambda1_hat(const PointSet& X, std::span<const QNum> grid, std::size_t probes,
                                   unsigned threads = 1) {
    if (probes < 100) throw std::invalid_argument("lambda1 estimation needs at least 100 probes");
    require_increasing_grid(grid);
    Lambda1Estimate est;
    est.probes = probes;
    est.probe_radius = X.window_radius() / QNum(2);
    if (grid.back() > est.probe_radius) throw std::invalid_argument("lambda1 grid must satisfy T <= W / 2");
    const auto pts = probe_points(X.dimension(), est.probe_radius, 2 * probes);
    const BallCounter counter(X);
    est.rows.resize(grid.size());
    parallel_chunks(grid.size(), std::max(1U, threads), [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t g = b; g < e; ++g) {
            const QNum& T = grid[g];
            std::size_t best_n = 0;
            std::size_t best_2n = 0;
            std::size_t arg = 0;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const std::size_t c = counter.count(pts[k], T);
                if (k < probes && (k == 0 || c < best_n)) best_n = c;
                if (k == 0 || c < best_2n) {
                    best_2n = c;
                    arg = k;
                }
            }
            Lambda1Row row;
            row.T = T;
            const QNum vol = detail::power_d(T, X.dimension());
            row.min_n = QNum(static_cast<long long>(best_n)) / vol;
            row.min_2n = QNum(static_cast<long long>(best_2n)) / vol;
            row.argmin_probe = arg;
            row.stable = row.min_2n * QNum(10) >= row.min_n * QNum(9);
            est.rows[g] = row;
        }
    });
    std::optional<std::size_t> from;
    for (std::size_t g = est.rows.size(); g-- > 0;) {
        if (!est.rows[g].stable) break;
        from = g;
    }
    if (from) {
        est.t1 = est.rows[*from].T;
        for (std::size_t g = *from; g < est.rows.size(); ++g) {
            if (!est.lambda1 || est.rows[g].min_2n < *est.lambda1) est.lambda1 = est.rows[g].min_2n;
        }
    }
    return est;
}

// ---------------------------------------------------------------- counting chain check

struct Lemma2Row {
    QNum T;
    std::size_t N = 0;
    bool ball_inside = false;        // kappa T / 3 <= W - T
    std::size_t ball_count = 0;      // #(X cap B(0, kappa T / 3))
    bool pairwise_distinct = false;  // (i)
    bool counting = false;           // (ii)
    bool volume_applicable = false;  // T >= T0
    bool volume = false;             // (iii)
};

struct Lemma2Check {
    std::string status;
    QNum kappa_lo;  // rational lower bound on kappa
    std::optional<QNum> lambda_hat;
    std::optional<QNum> t0_hat;
    std::vector<Lemma2Row> rows;
};

namespace detail {

template <class Int>
std::vector<std::size_t> inside_ball(const Embedding<Int>& emb, const QNum& radius_sq) {
    const auto th = emb.threshold(radius_sq);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < emb.size(); ++i) {
        if (emb.within(emb[i], th)) out.push_back(i);
    }
    return out;
}

}  // namespace detail

inline Lemma2Check lemma2_chain_check(const PatchEngine& engine, const std::vector<PatchCount>& counts,
                                      const KappaEstimate& kappa, const Lambda1Estimate& lambda1) {
    const PointSet& X = engine.sample();
    const std::size_t d = X.dimension();
    Lemma2Check out;
    if (!kappa.kappa_sq || !lambda1.lambda1 || !lambda1.t1) {
        out.status = "inconclusive";
        return out;
    }
    const QNum& kappa_sq = *kappa.kappa_sq;
    out.kappa_lo = sqrt_lower(kappa_sq);
    if (qsign(out.kappa_lo) <= 0) {
        out.status = "inconclusive";
        return out;
    }
    out.lambda_hat = *lambda1.lambda1 * detail::power_d(out.kappa_lo / QNum(3), d);
    out.t0_hat = QNum(3) * *lambda1.t1 / out.kappa_lo;

    bool all_ok = true;
    std::size_t volume_rows = 0;
    for (const auto& pc : counts) {
        Lemma2Row row;
        row.T = pc.radius;
        row.N = pc.count;
        const QNum ball_sq = kappa_sq * pc.radius * pc.radius / QNum(9);
        const QNum elig = X.window_radius() - pc.radius;
        row.ball_inside = ball_sq <= elig * elig;
        const auto inside =
            engine.visit([&](const auto& e) { return detail::inside_ball(e.embedding(), ball_sq); });
        row.ball_count = inside.size();
        if (row.ball_inside) {
            const auto group = pc.occurrences.group_of(X.size());
            std::vector<std::size_t> seen;
            for (std::size_t i : inside) seen.push_back(group[i]);
            std::sort(seen.begin(), seen.end());
            row.pairwise_distinct = std::adjacent_find(seen.begin(), seen.end()) == seen.end() &&
                                    (seen.empty() || seen.back() != static_cast<std::size_t>(-1));
            row.counting = row.N >= row.ball_count;
            all_ok = all_ok && row.pairwise_distinct && row.counting;
        }
        row.volume_applicable = row.T >= *out.t0_hat;
        if (row.volume_applicable) {
            ++volume_rows;
            row.volume = QNum(static_cast<long long>(row.N)) >= *out.lambda_hat * detail::power_d(row.T, d);
            all_ok = all_ok && row.volume && row.ball_inside;
        }
        out.rows.push_back(row);
    }
    if (!all_ok) {
        out.status = "fail";
    } else {
        out.status = volume_rows > 0 ? "pass" : "inconclusive";
    }
    return out;
}

}  // namespace aplab

#endif  // APERIODIC_LAB_CERTIFICATES_HPP
