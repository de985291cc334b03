// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aperiodic_lab.hpp"

using namespace aplab;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::vector<QNum> int_grid(long long lo, long long hi, long long step = 1) { return make_grid(lo, hi, step); }

// min of a squared ratio over rows with T in [lo, hi]
std::optional<QNum> min_sq_in(const std::vector<RepulsionRow>& rows, const QNum& lo, const QNum& hi) {
    const auto sel = rows_in(rows, lo, hi);
    return min_ratio_sq(sel);
}

void criterion_oracle(Outcome& o) {
    const auto F = gen_fibonacci_integer(200);
    const PatchEngine EF(F);
    std::size_t checked = 0;
    for (const auto& T : int_grid(2, 30)) {
        const auto a = EF.count(T);
        const auto b = count_patches_bruteforce(F, T);
        o.require(a.count == b.count && same_grouping(a.occurrences, b.occurrences), "fibonacci T=" + display(T));
        ++checked;
    }
    const auto B = gen_block_substitution_2d('A', 64);
    const PatchEngine EB(B);
    for (int T : {4, 8, 12, 16}) {
        const auto a = EB.count(T);
        const auto b = count_patches_bruteforce(B, T);
        o.require(a.count == b.count && same_grouping(a.occurrences, b.occurrences), "block T=" + std::to_string(T));
        ++checked;
    }
    o.detail << checked << " radii matched";
}

void criterion_lattices(Outcome& o) {
    const auto Z = gen_lattice(1, 1, 50);
    const PatchEngine EZ(Z);
    std::size_t rows = 0;
    for (const auto& T : int_grid(1, 49)) {
        const auto pc = EZ.count(T);
        const auto r = repetitivity_at(EZ, T, {}, &pc);
        o.require(pc.count == 1, "Z N(" + display(T) + ") = 1");
        o.require(r.valid && r.M.is_exact() && *r.M.exact == QNum::rational(1, 2), "Z M(" + display(T) + ") = 1/2");
        ++rows;
    }
    const auto Z2 = gen_lattice(2, 1, 32);
    const PatchEngine E2(Z2);
    for (const auto& T : int_grid(1, 16)) {
        const auto pc = E2.count(T);
        const auto r = repetitivity_at(E2, T, {}, &pc);
        o.require(pc.count == 1, "Z2 N(" + display(T) + ") = 1");
        o.require(r.M.contains_sqrt(QNum::rational(1, 2)), "Z2 bracket contains sqrt2/2 at T=" + display(T));
        // hi - lo <= sqrt(h^2 / 2) = h sqrt2 / 2
        o.require(r.M.width_at_most_slack() && r.M.slack_sq == r.grid_step * r.grid_step / QNum(2),
                  "Z2 bracket width at T=" + display(T));
        ++rows;
    }
    o.detail << rows << " rows exact";
}

void criterion_repulsion(Outcome& o) {
    const auto grid = int_grid(2, 50);
    const auto Z = gen_lattice(1, 1, 200);
    const auto S = gen_periodic_superlattice({Point{QNum(0)}, Point{QNum::rational(1, 3)}}, Point{QNum(1)}, 200);
    for (const PointSet* X : {&Z, &S}) {
        const PatchEngine E(*X);
        const auto period = detect_period(E, 3);
        o.require(period.has_value(), "control has a period");
        for (const auto& T : grid) {
            const auto r = repulsion_ratio(E, E.count(T));
            // (ratio * T)^2 equals the squared minimal period
            o.require(r.min_pair_sq && period && *r.min_pair_sq == norm_sq(*period),
                      "ratio*T constant at T=" + display(T));
        }
    }
    const auto F = gen_fibonacci_integer(2000);
    const PatchEngine EF(F);
    std::vector<RepulsionRow> rows;
    for (const auto& T : int_grid(2, 100)) rows.push_back(repulsion_ratio(EF, EF.count(T)));
    const auto all = min_sq_in(rows, 2, 100);
    const auto low = min_sq_in(rows, 20, 50);
    const auto high = min_sq_in(rows, 50, 100);
    o.require(all && qsign(*all) > 0, "fibonacci min ratio > 0");
    // within 25%: 9/16 <= high^2 / low^2 <= 25/16
    o.require(low && high && *high * QNum(16) >= *low * QNum(9) && *high * QNum(16) <= *low * QNum(25),
              "fibonacci [50,100] within 25% of [20,50]");
    if (all && low && high) {
        o.detail << "fibonacci min ratio " << display_sqrt(*all) << ", [20,50] " << display_sqrt(*low) << ", [50,100] "
                 << display_sqrt(*high);
    }
}

void lemma2_case(Outcome& o, const PointSet& X, const std::vector<QNum>& grid, const std::string& name) {
    const PatchEngine E(X);
    std::vector<PatchCount> counts;
    std::vector<RepulsionRow> rep;
    for (const auto& T : grid) {
        counts.push_back(E.count(T, {4, std::nullopt}));
        rep.push_back(repulsion_ratio(E, counts.back(), 4));
    }
    const auto kappa = kappa_hat(rep);
    const auto lam = lambda1_hat(X, grid, 100, 4);
    const auto chk = lemma2_chain_check(E, counts, kappa, lam);
    std::size_t volume_rows = 0;
    for (const auto& r : chk.rows) {
        if (!r.volume_applicable) continue;
        ++volume_rows;
        o.require(r.ball_inside && r.pairwise_distinct && r.counting && r.volume, name + " row T=" + display(r.T));
    }
    o.require(chk.status == "pass", name + " status " + chk.status);
    o.require(volume_rows > 0, name + " has rows with T >= T0");
    o.require(chk.lambda_hat && qsign(*chk.lambda_hat) > 0, name + " lambda > 0");
    o.detail << name << ": " << volume_rows << " rows T >= T0 = " << (chk.t0_hat ? display(*chk.t0_hat) : "-")
             << ", lambda = " << (chk.lambda_hat ? display(*chk.lambda_hat) : "-") << "; ";
}

void criterion_lemma2(Outcome& o) {
    const auto F = gen_fibonacci_integer(2000);
    lemma2_case(o, F, default_grid(F.window_radius()), "fibonacci W=2000");
    const auto B = gen_block_substitution_2d('A', 256);
    lemma2_case(o, B, int_grid(2, 32, 2), "block W=256");
}

void dense_case(Outcome& o, const PointSet& X, const std::vector<QNum>& grid, const std::string& name) {
    AnalysisConfig cfg;
    cfg.grid = grid;
    cfg.threads = 4;
    const PatchEngine E(X);
    const Analysis A = run_analysis(E, cfg);
    const bool known = A.c_dr_low.value && A.c_dr_high.value;
    o.require(known, name + " both halves have valid rows");
    if (known) {
        const QNum& lo = *A.c_dr_low.value;
        const QNum& hi = *A.c_dr_high.value;
        o.require(hi <= QNum(2) * lo && lo <= QNum(2) * hi, name + " C_DR halves within factor 2");
        o.detail << name << ": C_DR " << display(lo) << " / " << display(hi);
    }
    o.require(A.liminf.positive && A.liminf.stable, name + " liminf positive and stable");
    if (A.liminf.low_min && A.liminf.high_min) {
        o.detail << ", min N/T^d " << display(*A.liminf.low_min) << " / " << display(*A.liminf.high_min) << "; ";
    }
}

void criterion_dense(Outcome& o) {
    const auto F = gen_fibonacci_integer(1000);
    dense_case(o, F, default_grid(F.window_radius()), "fibonacci W=1000");
    // valid rows stop near T = 11 at this window, so the grid stays below that
    const auto B = gen_block_substitution_2d('A', 256);
    dense_case(o, B, int_grid(2, 12), "block W=256");
}

void criterion_window(Outcome& o) {
    const auto F1 = gen_fibonacci_integer(1000);
    const auto F2 = gen_fibonacci_integer(2000);
    const PatchEngine E1(F1), E2(F2);
    std::size_t valid = 0;
    for (const auto& T : int_grid(2, 100)) {
        const auto c1 = E1.count(T);
        const auto c2 = E2.count(T);
        o.require(c1.count == c2.count, "N(" + display(T) + ") unchanged");
        const auto r1 = repetitivity_at(E1, T, {}, &c1);
        const auto r2 = repetitivity_at(E2, T, {}, &c2);
        if (r1.valid) {
            ++valid;
            o.require(r1.M.is_exact() && r2.M.is_exact() && *r1.M.exact == *r2.M.exact,
                      "M(" + display(T) + ") unchanged");
        }
    }
    o.detail << "99 radii, " << valid << " valid rows compared";
}

void criterion_cross(Outcome& o) {
    const auto I = gen_fibonacci_integer(500);
    const auto C = gen_fibonacci_cut_project(0, 500);
    const PatchEngine EI(I), EC(C);
    // equal expected point counts per ball: mean gaps tau and 3 - tau
    const QNum scale = QNum(3) * QNum::tau() - QNum(4);
    long long worst = 0;
    for (const auto& T : int_grid(2, 30)) {
        const long long a = static_cast<long long>(EI.count(T).count);
        const long long b = static_cast<long long>(EC.count(T * scale).count);
        worst = std::max(worst, std::llabs(a - b));
        o.require(std::llabs(a - b) <= 2, "T=" + display(T));
    }
    o.detail << "max |difference| = " << worst;
}

void criterion_exactness(Outcome& o) {
    const auto F = gen_fibonacci_integer(1000);
    AnalysisConfig cfg;
    cfg.grid = default_grid(F.window_radius());
    instrumentation::reset();
    const Analysis A = run_analysis(PatchEngine(F), cfg);
    const auto floats = instrumentation::float_in_decision.load();
    const auto signs = instrumentation::exact_sign_evaluations.load();
    o.require(floats == 0, "no float conversions inside decisions");
    o.require(signs > 0, "exact comparisons were counted");
    o.require(A.passed(), "verify verdicts all pass");
    o.detail << "float_in_decision = " << floats << ", exact_sign_evaluations = " << signs;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_s;  // 0 = none
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "oracle equivalence", 60, criterion_oracle},
        {2, "lattice controls exact", 10, criterion_lattices},
        {3, "repulsion dichotomy", 30, criterion_repulsion},
        {4, "counting chain", 120, criterion_lemma2},
        {5, "dense repetitivity consistency", 0, criterion_dense},
        {6, "window stability", 0, criterion_window},
        {7, "cross-construction agreement", 0, criterion_cross},
        {8, "exactness regression", 0, criterion_exactness},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            o.ok = false;
            o.detail << " [over the " << c.budget_s << " s budget]";
        }
        std::printf("%s criterion %d (%s): %s (%.1f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.title, o.detail.str().c_str(),
                    secs);
        std::fflush(stdout);
        failures += o.ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
