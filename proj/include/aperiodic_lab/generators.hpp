#ifndef APERIODIC_LAB_GENERATORS_HPP
#define APERIODIC_LAB_GENERATORS_HPP

// Window samples of concrete Delone sets: periodic controls and aperiodic
// linearly repetitive examples built from substitutions and a
// cut-and-project scheme.  All coordinates are exact.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aperiodic_lab/point.hpp"
#include "aperiodic_lab/point_set.hpp"
#include "aperiodic_lab/qnum.hpp"

namespace aplab {

namespace detail {

inline long long to_ll(const Integer& v) {
    if (v > Integer(std::numeric_limits<long long>::max() / 4) ||
        v < Integer(std::numeric_limits<long long>::min() / 4)) {
        throw std::out_of_range("window too large for generator enumeration");
    }
    return v.convert_to<long long>();
}

}  // namespace detail

// (spacing Z)^d cap B(0, W).
inline PointSet gen_lattice(std::size_t d, const QNum& spacing, const QNum& W) {
    if (d != 1 && d != 2) throw std::invalid_argument("lattice dimension must be 1 or 2");
    if (!spacing.is_rational() || qsign(spacing) <= 0) {
        throw std::invalid_argument("lattice spacing must be a positive rational");
    }
    if (W < spacing) throw std::invalid_argument("empty window: W < spacing");
    const long long kmax = detail::to_ll((W / spacing).floor());
    const QNum w2 = W * W;
    std::vector<Point> pts;
    if (d == 1) {
        for (long long k = -kmax; k <= kmax; ++k) pts.push_back(Point{QNum(k) * spacing});
    } else {
        const QNum s2 = spacing * spacing;
        for (long long i = -kmax; i <= kmax; ++i) {
            for (long long j = -kmax; j <= kmax; ++j) {
                if (QNum(i * i + j * j) * s2 <= w2) pts.push_back(Point{QNum(i) * spacing, QNum(j) * spacing});
            }
        }
    }
    Json prov;
    prov["generator"] = "lattice";
    prov["dimension"] = d;
    prov["spacing"] = spacing.to_string();
    prov["window_radius"] = W.to_string();
    return PointSet(d, std::move(pts), W, std::move(prov));
}

// One-sided Fibonacci word (a -> ab, b -> a) long enough that its length
// under l(a) = 2, l(b) = 1 exceeds min_span.
inline std::string fibonacci_word(const QNum& min_span, int* iterations = nullptr) {
    std::string w = "a";
    long long span = 2;
    int n = 0;
    while (!(QNum(span) > min_span)) {
        std::string next;
        next.reserve(w.size() * 2);
        for (char c : w) next += (c == 'a') ? "ab" : "a";
        w = std::move(next);
        span = 0;
        for (char c : w) span += (c == 'a') ? 2 : 1;
        ++n;
    }
    if (iterations) *iterations = n;
    return w;
}

// Left endpoints of the letters of `word` with l(a) = 2, l(b) = 1.
inline std::vector<long long> fibonacci_left_endpoints(const std::string& word) {
    std::vector<long long> out;
    out.reserve(word.size());
    long long x = 0;
    for (char c : word) {
        out.push_back(x);
        x += (c == 'a') ? 2 : 1;
    }
    return out;
}

inline PointSet gen_fibonacci_integer(const QNum& W) {
    if (W < QNum(2)) throw std::invalid_argument("fibonacci-int requires W >= 2");
    int iterations = 0;
    const std::string word = fibonacci_word(QNum(4) * W, &iterations);
    const auto ends = fibonacci_left_endpoints(word);
    long long span = 0;
    for (char c : word) span += (c == 'a') ? 2 : 1;

    // point nearest the midpoint span/2; ties go left
    std::size_t best = 0;
    for (std::size_t i = 1; i < ends.size(); ++i) {
        if (std::llabs(2 * ends[i] - span) < std::llabs(2 * ends[best] - span)) best = i;
    }
    const long long shift = ends[best];
    const QNum w2 = W * W;
    std::vector<Point> pts;
    for (long long e : ends) {
        const long long x = e - shift;
        if (QNum(x) * QNum(x) <= w2) pts.push_back(Point{QNum(x)});
    }
    Json prov;
    prov["generator"] = "fibonacci-int";
    prov["window_radius"] = W.to_string();
    prov["substitution"] = "a->ab, b->a";
    prov["letter_lengths"] = {{"a", 2}, {"b", 1}};
    prov["seed"] = "a";
    prov["iterations"] = iterations;
    prov["word_length"] = word.size();
    prov["recenter_letter_index"] = best;
    return PointSet(1, std::move(pts), W, std::move(prov));
}

// {x = a + b tau : c <= x* < c + tau} cap B(0, W), where x* = a + b tau* and
// tau* = 1 - tau.  The acceptance interval has length tau, which yields the
// two gap lengths 1 and tau.
inline PointSet gen_fibonacci_cut_project(const QNum& c, const QNum& W) {
    if (!c.is_rational()) throw std::invalid_argument("acceptance offset c must be rational");
    if (qsign(W) <= 0) throw std::invalid_argument("window radius must be positive");
    const QNum tau = QNum::tau();
    const QNum w2 = W * W;
    // |b| sqrt5 = |x - x*| <= W + |c| + tau
    const long long bmax = detail::to_ll((W + abs(c)).floor()) + 3;
    std::vector<Point> pts;
    for (long long b = -bmax; b <= bmax; ++b) {
        // x* = (a + b) - b tau  in [c, c + tau)  <=>  a in [c - b + b tau, c - b + b tau + tau)
        const QNum lo = c - QNum(b) + QNum(b) * tau;
        const Integer a0 = lo.ceil();
        for (Integer a = a0; a <= a0 + 1; ++a) {
            const QNum star = QNum(a + b) - QNum(b) * tau;
            if (star < c || !(star < c + tau)) continue;
            const QNum x = QNum(a) + QNum(b) * tau;
            if (x * x <= w2) pts.push_back(Point{x});
        }
    }
    Json prov;
    prov["generator"] = "fibonacci-cp";
    prov["window_radius"] = W.to_string();
    prov["acceptance_offset"] = c.to_string();
    prov["acceptance_interval"] = "[c, c + tau)";
    prov["star_map"] = "tau -> 1 - tau";
    return PointSet(1, std::move(pts), W, std::move(prov));
}

// Chair-type 2x2 block substitution on four letters.  Letter k carries the
// diagonal direction kBlockDirections[k]; its image keeps the letter on the
// two quadrants along that diagonal and labels the two remaining quadrants
// by their own (outward) direction.
inline constexpr std::array<std::array<int, 2>, 4> kBlockDirections{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
inline constexpr std::array<char, 4> kBlockLetters{'A', 'B', 'C', 'D'};

inline int block_letter_index(char symbol) {
    for (int k = 0; k < 4; ++k) {
        if (kBlockLetters[static_cast<std::size_t>(k)] == symbol) return k;
    }
    throw std::invalid_argument(std::string("unknown block substitution symbol '") + symbol + "'");
}

inline std::uint8_t block_child(std::uint8_t letter, int qx, int qy) {
    const auto& d = kBlockDirections[letter];
    if ((qx == d[0] && qy == d[1]) || (qx == -d[0] && qy == -d[1])) return letter;
    for (std::uint8_t k = 0; k < 4; ++k) {
        if (kBlockDirections[k][0] == qx && kBlockDirections[k][1] == qy) return k;
    }
    return letter;  // unreachable
}

// Letters on the integer grid [-half, half)^2 after `levels` substitution
// steps from a single A, shifted so the supertile center is the origin.
struct BlockColoring {
    long long half = 0;
    int levels = 0;
    std::vector<std::uint8_t> cells;  // row-major in x, then y

    std::uint8_t at(long long x, long long y) const {
        return cells[static_cast<std::size_t>((x + half) * (2 * half) + (y + half))];
    }
    bool inside(long long x, long long y) const { return x >= -half && x < half && y >= -half && y < half; }
};

inline BlockColoring block_coloring(long long min_half) {
    std::vector<std::uint8_t> g{0};
    long long size = 1;
    int levels = 0;
    while (size < 2 * min_half) {
        std::vector<std::uint8_t> h(static_cast<std::size_t>(4 * size * size));
        const long long ns = 2 * size;
        for (long long i = 0; i < size; ++i) {
            for (long long j = 0; j < size; ++j) {
                const std::uint8_t l = g[static_cast<std::size_t>(i * size + j)];
                for (int qx : {-1, 1}) {
                    for (int qy : {-1, 1}) {
                        const long long ci = 2 * i + (qx > 0 ? 1 : 0);
                        const long long cj = 2 * j + (qy > 0 ? 1 : 0);
                        h[static_cast<std::size_t>(ci * ns + cj)] = block_child(l, qx, qy);
                    }
                }
            }
        }
        g = std::move(h);
        size = ns;
        ++levels;
    }
    BlockColoring out;
    out.half = size / 2;
    out.levels = levels;
    out.cells = std::move(g);
    return out;
}

inline PointSet gen_block_substitution_2d(char symbol, const QNum& W) {
    const int letter = block_letter_index(symbol);
    if (qsign(W) <= 0) throw std::invalid_argument("window radius must be positive");
    const long long wceil = detail::to_ll(W.ceil());
    const BlockColoring col = block_coloring(2 * wceil + 2);

    // recenter on the symbol cell nearest the supertile center (ties: lexicographically smallest)
    long long cheb = 0;
    auto has_letter_in = [&](long long r) {
        for (long long x = -r; x <= r; ++x) {
            for (long long y = -r; y <= r; ++y) {
                if (col.inside(x, y) && col.at(x, y) == letter) return true;
            }
        }
        return false;
    };
    while (!has_letter_in(cheb)) ++cheb;
    // the Euclidean nearest cell lies within Chebyshev radius 2 * cheb
    long long best_x = 0;
    long long best_y = 0;
    long long best_d = -1;
    for (long long x = -2 * cheb; x <= 2 * cheb; ++x) {
        for (long long y = -2 * cheb; y <= 2 * cheb; ++y) {
            if (!col.inside(x, y) || col.at(x, y) != letter) continue;
            const long long dd = x * x + y * y;
            if (best_d < 0 || dd < best_d) {
                best_d = dd;
                best_x = x;
                best_y = y;
            }
        }
    }

    const QNum w2 = W * W;
    std::vector<Point> pts;
    for (long long x = -wceil; x <= wceil; ++x) {
        for (long long y = -wceil; y <= wceil; ++y) {
            if (QNum(x * x + y * y) > w2) continue;
            const long long gx = x + best_x;
            const long long gy = y + best_y;
            if (col.inside(gx, gy) && col.at(gx, gy) == letter) pts.push_back(Point{QNum(x), QNum(y)});
        }
    }
    Json prov;
    prov["generator"] = "block2d";
    prov["symbol"] = std::string(1, symbol);
    prov["window_radius"] = W.to_string();
    prov["substitution"] = "chair-type 2x2 block substitution, letters A,B,C,D = diagonal directions (+,+),(-,+),(-,-),(+,-)";
    prov["seed"] = "A";
    prov["levels"] = col.levels;
    prov["recenter_offset"] = {best_x, best_y};
    return PointSet(2, std::move(pts), W, std::move(prov));
}

// The full four-letter coloring on Z^2 cap B(0, W), unrecentered, with one
// letter index per point (for period checks on the coloring itself).
struct LabeledSample {
    PointSet points;
    std::vector<int> labels;
};

inline LabeledSample block_coloring_sample(const QNum& W) {
    if (qsign(W) <= 0) throw std::invalid_argument("window radius must be positive");
    const long long wceil = detail::to_ll(W.ceil());
    const BlockColoring col = block_coloring(wceil + 1);
    const QNum w2 = W * W;
    std::vector<Point> pts;
    for (long long x = -wceil; x <= wceil; ++x) {
        for (long long y = -wceil; y <= wceil; ++y) {
            if (QNum(x * x + y * y) <= w2) pts.push_back(Point{QNum(x), QNum(y)});
        }
    }
    Json prov;
    prov["generator"] = "block2d-coloring";
    prov["window_radius"] = W.to_string();
    prov["levels"] = col.levels;
    PointSet X(2, std::move(pts), W, std::move(prov));
    std::vector<int> labels;
    labels.reserve(X.size());
    for (const auto& p : X.points()) {
        labels.push_back(col.at(detail::to_ll(p[0].a()), detail::to_ll(p[1].a())));
    }
    return {std::move(X), std::move(labels)};
}

// motif + (cell_1 Z x ... x cell_d Z), cap B(0, W).  The motif must lie in
// the half-open cell [0, cell_1) x ... x [0, cell_d).
inline PointSet gen_periodic_superlattice(const std::vector<Point>& motif, const Point& cell, const QNum& W) {
    const std::size_t d = cell.dimension();
    if (d != 1 && d != 2) throw std::invalid_argument("superlattice dimension must be 1 or 2");
    if (motif.empty()) throw std::invalid_argument("superlattice motif is empty");
    for (const auto& c : cell.coords) {
        if (qsign(c) <= 0) throw std::invalid_argument("cell lengths must be positive");
    }
    for (const auto& m : motif) {
        if (m.dimension() != d) throw std::invalid_argument("motif point dimension mismatch");
        for (std::size_t i = 0; i < d; ++i) {
            if (qsign(m[i]) < 0 || !(m[i] < cell[i])) throw std::invalid_argument("motif larger than cell");
        }
    }
    const QNum w2 = W * W;
    std::vector<Point> pts;
    for (const auto& m : motif) {
        std::array<long long, 2> lo{0, 0};
        std::array<long long, 2> hi{0, 0};
        for (std::size_t i = 0; i < d; ++i) {
            lo[i] = detail::to_ll(((-W - m[i]) / cell[i]).floor());
            hi[i] = detail::to_ll(((W - m[i]) / cell[i]).ceil());
        }
        if (d == 1) {
            for (long long k = lo[0]; k <= hi[0]; ++k) {
                Point p{m[0] + QNum(k) * cell[0]};
                if (norm_sq(p) <= w2) pts.push_back(std::move(p));
            }
        } else {
            for (long long k = lo[0]; k <= hi[0]; ++k) {
                for (long long l = lo[1]; l <= hi[1]; ++l) {
                    Point p{m[0] + QNum(k) * cell[0], m[1] + QNum(l) * cell[1]};
                    if (norm_sq(p) <= w2) pts.push_back(std::move(p));
                }
            }
        }
    }
    Json prov;
    prov["generator"] = "superlattice";
    prov["window_radius"] = W.to_string();
    Json jm = Json::array();
    for (const auto& m : motif) {
        Json row = Json::array();
        for (const auto& c : m.coords) row.push_back(c.to_string());
        jm.push_back(std::move(row));
    }
    prov["motif"] = std::move(jm);
    Json jc = Json::array();
    for (const auto& c : cell.coords) jc.push_back(c.to_string());
    prov["cell"] = std::move(jc);
    return PointSet(d, std::move(pts), W, std::move(prov));
}

}  // namespace aplab

#endif  // APERIODIC_LAB_GENERATORS_HPP
