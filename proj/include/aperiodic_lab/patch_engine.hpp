#ifndef APERIODIC_LAB_PATCH_ENGINE_HPP
#define APERIODIC_LAB_PATCH_ENGINE_HPP

// T-patches, their classes up to translation, and the windowed patch
// counting function.
//
// Only centers whose T-ball lies inside the sample window are used, so the
// count N^(T) is a lower bound for the patch count of the infinite set.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "aperiodic_lab/embedding.hpp"
#include "aperiodic_lab/parallel.hpp"
#include "aperiodic_lab/point.hpp"
#include "aperiodic_lab/point_set.hpp"
#include "aperiodic_lab/qnum.hpp"

namespace aplab {

class WindowExhausted : public std::runtime_error {
public:
    WindowExhausted() : std::runtime_error("window exhausted") {}
    explicit WindowExhausted(const std::string& what) : std::runtime_error("window exhausted: " + what) {}
};

// (X - x) cap B(0, T), displacements sorted lexicographically by value.
struct Patch {
    QNum radius;
    std::vector<Point> displacements;

    bool contains_origin() const {
        return std::any_of(displacements.begin(), displacements.end(), [](const Point& p) { return is_zero(p); });
    }
    friend bool operator==(const Patch&, const Patch&) = default;
};

// One translation class of T-patches: the (sorted) indices of the sample
// points whose T-patch belongs to it.
struct PatchGroup {
    std::vector<std::size_t> centers;
    std::uint64_t key_hash = 0;
};

// Groups are ordered by their first center.  Center lists are disjoint and
// their union is the set of eligible centers.
struct OccurrenceMap {
    std::vector<PatchGroup> groups;

    std::size_t center_count() const {
        std::size_t n = 0;
        for (const auto& g : groups) n += g.centers.size();
        return n;
    }

    // sample index -> group index (npos for non-centers)
    std::vector<std::size_t> group_of(std::size_t sample_size) const {
        std::vector<std::size_t> out(sample_size, static_cast<std::size_t>(-1));
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (std::size_t c : groups[g].centers) out[c] = g;
        }
        return out;
    }

    // Same partition of the same centers (hashes ignored).
    friend bool same_grouping(const OccurrenceMap& x, const OccurrenceMap& y) {
        if (x.groups.size() != y.groups.size()) return false;
        for (std::size_t g = 0; g < x.groups.size(); ++g) {
            if (x.groups[g].centers != y.groups[g].centers) return false;
        }
        return true;
    }
};

struct PatchCount {
    QNum radius;
    std::size_t count = 0;
    OccurrenceMap occurrences;
};

struct CountOptions {
    unsigned threads = 1;
    // Use only centers with |x| <= center_radius (must not exceed W - T).
    std::optional<QNum> center_radius;
};

// FNV-1a over the integer components of a canonical patch.
struct PatchHash {
    template <class Int>
    std::uint64_t operator()(std::span<const std::array<Int, 4>> patch, std::size_t dim) const {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](std::uint64_t v) {
            for (int k = 0; k < 8; ++k) {
                h ^= (v >> (8 * k)) & 0xffU;
                h *= 1099511628211ULL;
            }
        };
        mix(patch.size());
        for (const auto& c : patch) {
            for (std::size_t k = 0; k < 2 * dim; ++k) {
                if constexpr (std::is_same_v<Int, Integer>) {
                    mix(static_cast<std::uint64_t>((c[k] % Integer(1000000007)).template convert_to<long long>()));
                } else {
                    mix(static_cast<std::uint64_t>(c[k]));
                }
            }
        }
        return h;
    }
};

namespace detail {

inline void check_radius(const QNum& T) {
    if (qsign(T) <= 0) throw std::invalid_argument("patch radius must be positive");
}

inline QNum eligibility_radius(const PointSet& X, const QNum& T) {
    check_radius(T);
    const QNum r = X.window_radius() - T;
    if (qsign(r) < 0) throw WindowExhausted("T exceeds the window radius");
    return r;
}

}  // namespace detail

template <class Int>
class BasicPatchEngine {
public:
    using Emb = Embedding<Int>;
    using Coords = typename Emb::Coords;

    explicit BasicPatchEngine(const PointSet& X) : X_(&X), emb_(X) {}

    const PointSet& sample() const { return *X_; }
    const Emb& embedding() const { return emb_; }

    std::vector<std::size_t> eligible(const QNum& T, const std::optional<QNum>& center_radius = std::nullopt) const {
        QNum r = detail::eligibility_radius(*X_, T);
        if (center_radius) {
            if (*center_radius > r) throw std::invalid_argument("center radius exceeds W - T");
            r = *center_radius;
        }
        const auto th = emb_.threshold(r * r);
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < emb_.size(); ++i) {
            if (emb_.within(emb_[i], th)) out.push_back(i);
        }
        return out;
    }

    // Canonical displacement list of the T-patch at sample index i: value
    // order in d = 1, component-lexicographic order in d = 2.
    void patch(std::size_t i, const QNum& T, std::vector<Coords>& out) const {
        patch(i, emb_.threshold(T * T), reach_for(T), out);
    }

    template <class Hasher = PatchHash>
    PatchCount count(const QNum& T, const CountOptions& opts = {}, Hasher hasher = {}) const {
        const auto centers = eligible(T, opts.center_radius);
        if (centers.empty()) throw WindowExhausted("no eligible centers");
        const auto th = emb_.threshold(T * T);
        const long long reach = reach_for(T);
        if (emb_.dimension() == 2) grid_for(cell_for(reach));  // built before workers start

        struct Local {
            std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;
            std::vector<std::vector<Coords>> reps;
            std::vector<PatchGroup> groups;
        };
        const unsigned workers = std::max(1U, opts.threads);
        std::vector<Local> locals(workers);
        parallel_chunks(centers.size(), workers, [&](unsigned w, std::size_t b, std::size_t e) {
            Local& L = locals[w];
            std::vector<Coords> buf;
            for (std::size_t k = b; k < e; ++k) {
                const std::size_t c = centers[k];
                patch(c, th, reach, buf);
                const std::uint64_t h = hasher(std::span<const Coords>(buf), emb_.dimension());
                insert(L.by_hash, L.reps, L.groups, h, buf, c);
            }
        });

        // merge in worker order; chunks are contiguous so center lists stay sorted
        Local merged = std::move(locals[0]);
        for (unsigned w = 1; w < workers; ++w) {
            Local& L = locals[w];
            for (std::size_t g = 0; g < L.groups.size(); ++g) {
                const std::size_t at = insert(merged.by_hash, merged.reps, merged.groups, L.groups[g].key_hash,
                                              L.reps[g], L.groups[g].centers.front());
                auto& dst = merged.groups[at].centers;
                dst.insert(dst.end(), L.groups[g].centers.begin() + 1, L.groups[g].centers.end());
            }
        }
        for (auto& g : merged.groups) std::sort(g.centers.begin(), g.centers.end());
        std::sort(merged.groups.begin(), merged.groups.end(),
                  [](const PatchGroup& a, const PatchGroup& b) { return a.centers.front() < b.centers.front(); });

        PatchCount out;
        out.radius = T;
        out.count = merged.groups.size();
        out.occurrences.groups = std::move(merged.groups);
        return out;
    }

private:
    long long reach_for(const QNum& T) const {
        if (emb_.dimension() != 2) return 0;
        const long long t = T.ceil().template convert_to<long long>();
        return t + 1;
    }

    // cell size about T / 4
    static long long cell_for(long long reach) { return std::max(1LL, (reach - 1) / 4); }

    const BucketGrid& grid_for(long long cell) const {
        auto it = grids_.find(cell);
        if (it == grids_.end()) it = grids_.emplace(cell, std::make_unique<BucketGrid>(emb_, cell)).first;
        return *it->second;
    }

    void patch(std::size_t i, const typename Emb::Threshold& th, long long reach, std::vector<Coords>& out) const {
        out.clear();
        if (emb_.dimension() == 1) {
            std::size_t lo = i;
            while (lo > 0 && emb_.within(emb_.diff(lo - 1, i), th)) --lo;
            for (std::size_t j = lo; j < emb_.size(); ++j) {
                Coords v = emb_.diff(j, i);
                if (j > i && !emb_.within(v, th)) break;
                out.push_back(v);
            }
            return;
        }
        const long long cell = cell_for(reach);
        const BucketGrid& grid = grid_for(cell);
        const long long bucket_reach = (reach + cell - 1) / cell + 1;
        const auto& f = emb_.floors(i);
        grid.visit(f[0], f[1], bucket_reach, [&](std::size_t j) {
            Coords v = emb_.diff(j, i);
            if (emb_.within(v, th)) out.push_back(v);
        });
        std::sort(out.begin(), out.end());
    }

    static std::size_t insert(std::unordered_map<std::uint64_t, std::vector<std::size_t>>& by_hash,
                              std::vector<std::vector<Coords>>& reps, std::vector<PatchGroup>& groups,
                              std::uint64_t h, const std::vector<Coords>& patch, std::size_t center) {
        auto& bucket = by_hash[h];
        for (std::size_t g : bucket) {
            if (reps[g] == patch) {  // exact confirmation; the hash only narrows the search
                groups[g].centers.push_back(center);
                return g;
            }
        }
        bucket.push_back(groups.size());
        reps.push_back(patch);
        groups.push_back(PatchGroup{{center}, h});
        return groups.size() - 1;
    }

    const PointSet* X_;
    Emb emb_;
    mutable std::map<long long, std::unique_ptr<BucketGrid>> grids_;
};

// Chooses the int64 kernel when coordinates are small enough, otherwise the
// arbitrary-precision one.
class PatchEngine {
    using Impl = std::variant<BasicPatchEngine<std::int64_t>, BasicPatchEngine<Integer>>;

public:
    explicit PatchEngine(const PointSet& X) : impl_(make(X)) {}

    bool uses_big_integers() const { return impl_.index() == 1; }

    const PointSet& sample() const {
        return std::visit([](const auto& e) -> const PointSet& { return e.sample(); }, impl_);
    }

    std::vector<std::size_t> eligible(const QNum& T, const std::optional<QNum>& center_radius = std::nullopt) const {
        return std::visit([&](const auto& e) { return e.eligible(T, center_radius); }, impl_);
    }

    template <class Hasher = PatchHash>
    PatchCount count(const QNum& T, const CountOptions& opts = {}, Hasher hasher = {}) const {
        return std::visit([&](const auto& e) { return e.count(T, opts, hasher); }, impl_);
    }

    template <class F>
    decltype(auto) visit(F&& f) const {
        return std::visit(std::forward<F>(f), impl_);
    }

private:
    static Impl make(const PointSet& X) {
        if (Embedding<std::int64_t>::fits(X)) return Impl(std::in_place_index<0>, X);
        return Impl(std::in_place_index<1>, X);
    }

    Impl impl_;
};

inline std::vector<Point> eligible_centers(const PointSet& X, const QNum& T) {
    const QNum r = detail::eligibility_radius(X, T);
    const QNum r2 = r * r;
    std::vector<Point> out;
    for (const auto& p : X.points()) {
        if (norm_sq(p) <= r2) out.push_back(p);
    }
    return out;
}

// Direct evaluation with value arithmetic.  Points are scanned in sorted
// order, so the displacements come out sorted.
inline Patch patch_at(const PointSet& X, const Point& x, const QNum& T) {
    if (!X.contains(x)) throw std::invalid_argument("patch center is not a point of the sample");
    const QNum r = detail::eligibility_radius(X, T);
    if (norm_sq(x) > r * r) throw WindowExhausted("patch center is not eligible at this radius");
    const QNum t2 = T * T;
    Patch p;
    p.radius = T;
    // restrict to the slab |y_0 - x_0| <= T
    auto first = std::lower_bound(X.points().begin(), X.points().end(), x[0] - T,
                                  [](const Point& q, const QNum& v) { return q[0] < v; });
    for (auto it = first; it != X.points().end() && (*it)[0] <= x[0] + T; ++it) {
        if (sq_dist(*it, x) <= t2) p.displacements.push_back(*it - x);
    }
    return p;
}

// Quadratic oracle: every eligible center's patch is built by scanning the
// whole sample and compared against one representative of every class found
// so far.  No hashing, no spatial index.
inline PatchCount count_patches_bruteforce(const PointSet& X, const QNum& T,
                                           const std::optional<QNum>& center_radius = std::nullopt) {
    QNum r = detail::eligibility_radius(X, T);
    if (center_radius) {
        if (*center_radius > r) throw std::invalid_argument("center radius exceeds W - T");
        r = *center_radius;
    }
    const QNum r2 = r * r;
    const QNum t2 = T * T;
    std::vector<std::vector<Point>> reps;
    std::vector<PatchGroup> groups;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const Point& x = X[i];
        if (norm_sq(x) > r2) continue;
        std::vector<Point> disp;
        for (const auto& y : X.points()) {
            Point v = y - x;
            if (norm_sq(v) <= t2) disp.push_back(std::move(v));
        }
        bool placed = false;
        for (std::size_t g = 0; g < reps.size(); ++g) {
            if (reps[g] == disp) {
                groups[g].centers.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) {
            reps.push_back(std::move(disp));
            groups.push_back(PatchGroup{{i}, 0});
        }
    }
    if (groups.empty()) throw WindowExhausted("no eligible centers");
    PatchCount out;
    out.radius = T;
    out.count = groups.size();
    out.occurrences.groups = std::move(groups);
    return out;
}

inline PatchCount count_patches(const PointSet& X, const QNum& T, const CountOptions& opts = {}) {
    return PatchEngine(X).count(T, opts);
}

struct ComplexityRow {
    QNum T;
    std::size_t count = 0;
    QNum normalized;  // count / T^d, exact
};

struct ComplexityProfile {
    std::size_t dimension = 1;
    std::vector<ComplexityRow> rows;
};

inline void require_increasing_grid(std::span<const QNum> grid) {
    if (grid.empty()) throw std::invalid_argument("empty T grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        detail::check_radius(grid[i]);
        if (i > 0 && !(grid[i - 1] < grid[i])) throw std::invalid_argument("T grid must be strictly increasing");
    }
}

// N^(T) over a grid.  By default the grid may not exceed W / 2.
inline ComplexityProfile complexity_profile(const PatchEngine& engine, std::span<const QNum> grid,
                                            const CountOptions& opts = {}, bool allow_shallow = false) {
    const PointSet& X = engine.sample();
    require_increasing_grid(grid);
    if (!allow_shallow && grid.back() > X.window_radius() / QNum(2)) {
        throw std::invalid_argument("T grid exceeds W / 2");
    }
    ComplexityProfile prof;
    prof.dimension = X.dimension();
    for (const auto& T : grid) {
        const auto pc = engine.count(T, opts);
        prof.rows.push_back({T, pc.count, QNum(static_cast<long long>(pc.count)) /
                                              pow(T, static_cast<unsigned>(X.dimension()))});
    }
    return prof;
}

inline ComplexityProfile complexity_profile(const PointSet& X, std::span<const QNum> grid,
                                            const CountOptions& opts = {}, bool allow_shallow = false) {
    return complexity_profile(PatchEngine(X), grid, opts, allow_shallow);
}

}  // namespace aplab

#endif  // APERIODIC_LAB_PATCH_ENGINE_HPP
