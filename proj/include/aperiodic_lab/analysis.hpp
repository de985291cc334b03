#ifndef APERIODIC_LAB_ANALYSIS_HPP
#define APERIODIC_LAB_ANALYSIS_HPP

// One pass over a T grid: patch counts are computed once and shared by the
// complexity, repetitivity and certificate stages.  Every decision is made
// inside a DecisionScope; rendering happens afterwards.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aperiodic_lab/certificates.hpp"
#include "aperiodic_lab/instrumentation.hpp"

namespace aplab {

struct AnalysisConfig {
    std::vector<QNum> grid;
    std::size_t probes = 100;
    std::optional<QNum> grid_step;  // d = 2 covering grid
    std::optional<QNum> period_max_norm;  // default W / 4
    unsigned threads = 1;
    bool allow_shallow = false;
};

struct Verdict {
    std::string name;
    std::string status;  // pass / fail / inconclusive
    std::string summary;
};

struct Analysis {
    const PointSet* sample = nullptr;
    AnalysisConfig config;
    std::vector<PatchCount> counts;
    ComplexityProfile complexity;
    RepetitivityProfile repetitivity;
    DeloneParams delone;
    QNum period_max_norm;
    std::optional<Point> period;
    std::vector<RepulsionRow> repulsion;
    KappaEstimate kappa;
    ConstantEstimate c_lr;
    ConstantEstimate c_dr;
    std::optional<QNum> valid_t_max;
    ConstantEstimate c_lr_low, c_lr_high, c_dr_low, c_dr_high;
    Lemma1Check lemma1;
    Lambda1Estimate lambda1;
    Lemma2Check lemma2;
    LiminfReport liminf;
    std::vector<Verdict> verdicts;

    std::size_t invalid_rows() const {
        std::size_t n = 0;
        for (const auto& r : repetitivity.rows) n += r.valid ? 0 : 1;
        return n;
    }
    bool passed() const {
        for (const auto& v : verdicts) {
            if (v.status != "pass") return false;
        }
        return true;
    }
    const Verdict* verdict(const std::string& name) const {
        for (const auto& v : verdicts) {
            if (v.name == name) return &v;
        }
        return nullptr;
    }
};

namespace detail {

inline std::string status_of(bool known, bool ok) { return !known ? "inconclusive" : (ok ? "pass" : "fail"); }

// a within a factor 2 of b
inline bool within_factor_two(const QNum& a, const QNum& b) { return a <= QNum(2) * b && b <= QNum(2) * a; }

inline void add_verdicts(Analysis& A) {
    const std::size_t d = A.sample->dimension();
    auto& V = A.verdicts;
    V.clear();

    V.push_back({"delone_parameters",
                 status_of(true, qsign(A.delone.r_sq) > 0 && qsign(A.delone.R.lo_sq) > 0),
                 "r_hat > 0 and R_hat > 0"});

    V.push_back({"non_periodicity", A.period ? "fail" : "pass",
                 A.period ? "a period consistent with the window was found"
                          : "no period up to max_norm is consistent with the window"});

    V.push_back({"repulsion_signature",
                 A.kappa.trend == "inconclusive" ? "inconclusive" : (A.kappa.trend == "bounded below" ? "pass" : "fail"),
                 "repulsion ratio trend: " + A.kappa.trend});

    V.push_back({"lemma1_proof_window", A.lemma1.status,
                 "no equal-patch pair at distance in [r_hat, T / ((C_LR + 1)(1 / r_hat + 1))]"});

    V.push_back({"lemma2_chain", A.lemma2.status,
                 "patches centred in B(0, kappa T / 3) distinct; N >= ball count; N >= lambda T^d for T >= T0"});

    {
        const bool known = A.c_lr_low.value && A.c_lr_high.value;
        const bool ok = known && *A.c_lr_high.value <= QNum(2) * *A.c_lr_low.value;
        V.push_back({"linear_repetitivity", status_of(known, ok),
                     "M/T on the top half of the valid rows at most twice its value on the quarter below"});
    }
    {
        const bool known = A.c_dr_low.value && A.c_dr_high.value;
        const bool ok = known && within_factor_two(*A.c_dr_high.value, *A.c_dr_low.value);
        V.push_back({"dense_repetitivity", status_of(known, ok),
                     std::string("M / N^(1/") + std::to_string(d) +
                         ") on the top half of the valid rows within a factor 2 of the quarter below"});
    }
    {
        const bool known = A.liminf.high_min.has_value() && A.liminf.low_min.has_value();
        V.push_back({"liminf_complexity", status_of(known, A.liminf.positive && A.liminf.stable),
                     std::string("min N / T^") + std::to_string(d) +
                         " over the top half positive and within 25% of the quarter below"});
    }
}

}  // namespace detail

inline Analysis run_analysis(const PatchEngine& engine, const AnalysisConfig& cfg) {
    instrumentation::DecisionScope scope;
    const PointSet& X = engine.sample();
    const std::size_t d = X.dimension();
    Analysis A;
    A.sample = &X;
    A.config = cfg;
    const auto& grid = cfg.grid;
    require_increasing_grid(grid);
    if (!(grid.front() > QNum(1))) throw std::invalid_argument("the T grid must satisfy T > 1");
    if (!cfg.allow_shallow && grid.back() > X.window_radius() / QNum(2)) {
        throw std::invalid_argument("T grid exceeds W / 2 (use --allow-shallow-window to override)");
    }

    CountOptions co;
    co.threads = cfg.threads;
    RepetitivityOptions ro;
    ro.grid_step = cfg.grid_step;
    ro.threads = cfg.threads;
    for (const auto& T : grid) {
        PatchCount pc = engine.count(T, co);
        A.complexity.rows.push_back(
            {T, pc.count, QNum(static_cast<long long>(pc.count)) / detail::power_d(T, d)});
        A.repetitivity.rows.push_back(repetitivity_at(engine, T, ro, &pc));
        A.repulsion.push_back(repulsion_ratio(engine, pc, cfg.threads));
        A.counts.push_back(std::move(pc));
    }
    A.complexity.dimension = d;
    A.repetitivity.dimension = d;

    A.delone = packing_covering(engine, cfg.grid_step);
    A.period_max_norm = cfg.period_max_norm ? *cfg.period_max_norm : X.window_radius() / QNum(4);
    A.period = detect_period(engine, A.period_max_norm);
    A.kappa = kappa_hat(A.repulsion);

    A.c_lr = lr_constant(A.repetitivity.rows);
    A.c_dr = dr_constant(A.repetitivity.rows, d);
    A.valid_t_max = largest_valid_T(A.repetitivity.rows);
    if (A.valid_t_max) {
        const QNum& t = *A.valid_t_max;
        const std::pair<QNum, QNum> low{t / QNum(4), t / QNum(2)};
        const std::pair<QNum, QNum> high{t / QNum(2), t};
        A.c_lr_low = lr_constant(A.repetitivity.rows, low);
        A.c_lr_high = lr_constant(A.repetitivity.rows, high);
        A.c_dr_low = dr_constant(A.repetitivity.rows, d, low);
        A.c_dr_high = dr_constant(A.repetitivity.rows, d, high);
    }

    A.lemma1 = lemma1_proof_bound_check(A.repulsion, A.delone.r_sq, A.c_lr.value);
    std::vector<QNum> lgrid;
    for (const auto& T : grid) {
        if (T <= X.window_radius() / QNum(2)) lgrid.push_back(T);
    }
    if (!lgrid.empty()) A.lambda1 = lambda1_hat(X, lgrid, cfg.probes, cfg.threads);
    A.lemma2 = lemma2_chain_check(engine, A.counts, A.kappa, A.lambda1);
    A.liminf = liminf_report(A.complexity.rows, d);
    detail::add_verdicts(A);
    return A;
}

}  // namespace aplab

#endif  // APERIODIC_LAB_ANALYSIS_HPP
