#ifndef APERIODIC_LAB_REPETITIVITY_HPP
#define APERIODIC_LAB_REPETITIVITY_HPP

// Windowed repetitivity M(T): the largest covering radius, over B(0, rho)
// with rho = (W - T) / 2, of the occurrence set of any T-patch type.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aperiodic_lab/covering.hpp"
#include "aperiodic_lab/parallel.hpp"
#include "aperiodic_lab/patch_engine.hpp"

namespace aplab {

struct RepetitivityOptions {
    // d = 2 grid step; unset picks a power of two, at most rho/8, starting
    // from 1/8 and coarsened while a radius spans more than 128 steps.
    std::optional<QNum> grid_step;
    unsigned threads = 1;
};

struct RepetitivityRow {
    QNum T;
    QNum eval_radius;
    QNum grid_step;  // 0 in d = 1
    RadiusBracket M;
    bool valid = false;
    std::string status;  // "ok" or "window too small"
    std::size_t patch_types = 0;
};

struct RepetitivityProfile {
    std::size_t dimension = 1;
    std::vector<RepetitivityRow> rows;
};

inline QNum repetitivity_eval_radius(const QNum& W, const QNum& T) { return (W - T) / QNum(2); }

inline QNum auto_grid_step(const QNum& rho) {
    if (qsign(rho) <= 0) throw std::invalid_argument("evaluation radius must be positive");
    QNum h = QNum::rational(1, 8);
    while (h > rho / QNum(8)) h /= QNum(2);
    while (rho / h > QNum(128) && h * QNum(2) <= rho / QNum(8)) h *= QNum(2);
    return h;
}

namespace detail {

inline RepetitivityRow finish_row(const QNum& W, const QNum& T, RepetitivityRow row) {
    row.valid = row.M.upper_at_most(repetitivity_eval_radius(W, T));
    row.status = row.valid ? "ok" : "window too small";
    return row;
}

}  // namespace detail

// Uses a precomputed count when given (it must be for the same T and all
// eligible centers).
inline RepetitivityRow repetitivity_at(const PatchEngine& engine, const QNum& T, const RepetitivityOptions& opts = {},
                                       const PatchCount* precomputed = nullptr) {
    const PointSet& X = engine.sample();
    PatchCount local;
    if (precomputed == nullptr) {
        CountOptions co;
        co.threads = opts.threads;
        local = engine.count(T, co);
        precomputed = &local;
    }
    const auto& groups = precomputed->occurrences.groups;
    if (groups.empty()) throw WindowExhausted("no eligible centers");

    RepetitivityRow row;
    row.T = T;
    row.eval_radius = repetitivity_eval_radius(X.window_radius(), T);
    if (qsign(row.eval_radius) <= 0) throw WindowExhausted("evaluation radius (W - T) / 2 is not positive");
    row.patch_types = groups.size();

    std::vector<RadiusBracket> per(groups.size());
    const unsigned workers = std::max(1U, opts.threads);
    if (X.dimension() == 1) {
        row.grid_step = 0;
        parallel_chunks(groups.size(), workers, [&](unsigned, std::size_t b, std::size_t e) {
            std::vector<QNum> xs;
            for (std::size_t g = b; g < e; ++g) {
                xs.clear();
                for (std::size_t c : groups[g].centers) xs.push_back(X[c][0]);
                per[g] = RadiusBracket::exact_value(covering_radius_1d(xs, row.eval_radius));
            }
        });
    } else {
        row.grid_step = opts.grid_step ? *opts.grid_step : auto_grid_step(row.eval_radius);
        if (GridCoverer::applicable(X.points(), row.eval_radius, row.grid_step)) {
            const GridCoverer cov(X.points(), row.eval_radius, row.grid_step);
            parallel_chunks(groups.size(), workers, [&](unsigned, std::size_t b, std::size_t e) {
                for (std::size_t g = b; g < e; ++g) per[g] = cov.evaluate(groups[g].centers);
            });
        } else {
            parallel_chunks(groups.size(), workers, [&](unsigned, std::size_t b, std::size_t e) {
                for (std::size_t g = b; g < e; ++g) {
                    CoveringQuery q;
                    q.eval_radius = row.eval_radius;
                    q.grid_step = row.grid_step;
                    for (std::size_t c : groups[g].centers) q.centers.push_back(X[c]);
                    per[g] = covering_radius_2d_bruteforce(q);
                }
            });
        }
    }
    row.M = per[0];
    for (std::size_t g = 1; g < per.size(); ++g) row.M = max_of(row.M, per[g]);
    return detail::finish_row(X.window_radius(), T, std::move(row));
}

inline RepetitivityRow repetitivity_at(const PointSet& X, const QNum& T, const RepetitivityOptions& opts = {}) {
    return repetitivity_at(PatchEngine(X), T, opts);
}

inline RepetitivityProfile repetitivity_profile(const PatchEngine& engine, std::span<const QNum> grid,
                                                const RepetitivityOptions& opts = {}) {
    require_increasing_grid(grid);
    RepetitivityProfile p;
    p.dimension = engine.sample().dimension();
    for (const auto& T : grid) p.rows.push_back(repetitivity_at(engine, T, opts));
    return p;
}

inline RepetitivityProfile repetitivity_profile(const PointSet& X, std::span<const QNum> grid,
                                                const RepetitivityOptions& opts = {}) {
    return repetitivity_profile(PatchEngine(X), grid, opts);
}

}  // namespace aplab

#endif  // APERIODIC_LAB_REPETITIVITY_HPP
