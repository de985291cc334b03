#ifndef APERIODIC_LAB_REPORT_HPP
#define APERIODIC_LAB_REPORT_HPP

// CSV, JSON and text output.  CSV cells are 12-significant-digit displays;
// the JSON report carries the exact value ("a b den") next to each display.

#include <sstream>
#include <string>

#include "aperiodic_lab/analysis.hpp"
#include "aperiodic_lab/display.hpp"

namespace aplab {

namespace report {

inline Json exact(const QNum& q) {
    Json j;
    j["exact"] = q.to_string();
    j["display"] = display(q);
    return j;
}

inline Json squared(const QNum& sq) {
    Json j;
    j["squared"] = sq.to_string();
    j["display"] = display_sqrt(sq);
    return j;
}

inline Json optional_exact(const std::optional<QNum>& q) { return q ? exact(*q) : Json(nullptr); }

inline std::string m_lo_display(const RadiusBracket& b) {
    return b.exact ? display(*b.exact) : display_sqrt(b.lo_sq);
}
inline std::string m_hi_display(const RadiusBracket& b) {
    return b.exact ? display(*b.exact) : display(b.upper_bound());
}

inline Json bracket(const RadiusBracket& b) {
    Json j;
    if (b.exact) {
        j["exact"] = b.exact->to_string();
        j["display"] = display(*b.exact);
        return j;
    }
    j["lo_squared"] = b.lo_sq.to_string();
    j["hi_squared"] = b.hi_sq.to_string();
    j["slack_squared"] = b.slack_sq.to_string();
    j["upper_bound"] = b.upper_bound().to_string();
    j["display_lo"] = display_sqrt(b.lo_sq);
    j["display_hi"] = display(b.upper_bound());
    return j;
}

inline Json point(const Point& p) {
    Json j = Json::array();
    for (const auto& c : p.coords) j.push_back(c.to_string());
    return j;
}

inline Json constant(const ConstantEstimate& c) {
    Json j;
    j["value"] = optional_exact(c.value);
    j["argmax_T"] = c.value ? Json(c.argmax_T.to_string()) : Json(nullptr);
    j["rows_used"] = c.rows_used;
    return j;
}

}  // namespace report

// "T,value_lo,value_hi,normalized"
inline std::string complexity_csv(const ComplexityProfile& p) {
    std::ostringstream o;
    o << "T,value_lo,value_hi,normalized\n";
    for (const auto& r : p.rows) {
        o << display(r.T) << ',' << r.count << ',' << r.count << ',' << display(r.normalized) << '\n';
    }
    return o.str();
}

// "T,M_lo,M_hi,valid,M_over_T,M_over_Nroot"
inline std::string repetitivity_csv(const RepetitivityProfile& p) {
    std::ostringstream o;
    o << "T,M_lo,M_hi,valid,M_over_T,M_over_Nroot\n";
    for (const auto& r : p.rows) {
        const QNum hi = m_upper(r);
        const QNum n(static_cast<long long>(r.patch_types));
        const std::string over_root = p.dimension == 1 ? display(hi / n) : display_sqrt(hi * hi / n);
        o << display(r.T) << ',' << report::m_lo_display(r.M) << ',' << display(hi) << ','
          << (r.valid ? "true" : "false") << ',' << display(hi / r.T) << ',' << over_root << '\n';
    }
    return o.str();
}

inline Json verdicts_json(const Analysis& A) {
    Json j;
    j["overall"] = A.passed() ? "pass" : "fail";
    Json v = Json::object();
    for (const auto& x : A.verdicts) {
        Json e;
        e["status"] = x.status;
        e["summary"] = x.summary;
        v[x.name] = std::move(e);
    }
    j["verdicts"] = std::move(v);
    if (A.period) j["period_witness"] = report::point(*A.period);
    return j;
}

inline Json certificate_json(const Analysis& A) {
    using namespace report;
    const PointSet& X = *A.sample;
    const std::size_t d = X.dimension();
    Json j;
    j["semantics"] = {
        {"patch_count", "N_hat(T) counts T-patch classes over centers x with |x| <= W - T; it is a lower bound "
                        "for the count of the infinite set"},
        {"repetitivity", "M_hat(T) is the largest covering radius over B(0, rho), rho = (W - T) / 2, of the "
                         "occurrence set of a patch class; a row is valid iff M_hat_hi <= (W - T) / 2"},
        {"packing_radius", "r_hat is half the minimum nearest-neighbour distance; balls of radius below r_hat "
                           "meet at most one point"},
        {"covering_radius", "R_hat is the covering radius of the sample over B(0, W / 2)"},
        {"estimates", "all constants are window estimates; verdicts check consistency, they prove nothing "
                      "about the infinite set"},
        {"display", "display values are rounded to 12 significant digits, round-half-even"}};
    j["sample"] = {{"dimension", d},
                   {"window_radius", X.window_radius().to_string()},
                   {"points", X.size()},
                   {"provenance", X.provenance()}};
    Json grid = Json::array();
    for (const auto& T : A.config.grid) grid.push_back(T.to_string());
    j["grid"] = std::move(grid);
    j["probes"] = A.config.probes;

    j["delone"] = {{"r_hat", squared(A.delone.r_sq)},
                   {"min_gap", squared(A.delone.min_gap_sq)},
                   {"min_gap_witness", {point(X[A.delone.witness[0]]), point(X[A.delone.witness[1]])}},
                   {"R_hat", bracket(A.delone.R)},
                   {"R_eval_radius", A.delone.R_eval_radius.to_string()},
                   {"R_grid_step", A.delone.R_grid_step.to_string()}};

    {
        Json k;
        k["kappa_hat"] = A.kappa.kappa_sq ? squared(*A.kappa.kappa_sq) : Json("infinity");
        k["attained_at_T"] = A.kappa.kappa_sq ? Json(A.kappa.kappa_T.to_string()) : Json(nullptr);
        k["trend"] = A.kappa.trend;
        k["low_range"] = {A.kappa.low_lo.to_string(), A.kappa.low_hi.to_string()};
        k["high_range"] = {A.kappa.high_lo.to_string(), A.kappa.high_hi.to_string()};
        k["low_min"] = A.kappa.low_min_sq ? squared(*A.kappa.low_min_sq) : Json(nullptr);
        k["high_min"] = A.kappa.high_min_sq ? squared(*A.kappa.high_min_sq) : Json(nullptr);
        j["kappa"] = std::move(k);
    }
    j["lambda1_hat"] = optional_exact(A.lambda1.lambda1);
    j["t1_hat"] = optional_exact(A.lambda1.t1);
    j["lambda_hat"] = optional_exact(A.lemma2.lambda_hat);
    j["t0_hat"] = optional_exact(A.lemma2.t0_hat);
    j["kappa_lower_bound"] = exact(A.lemma2.kappa_lo);
    j["c_lr_hat"] = constant(A.c_lr);
    j["c_dr_hat"] = constant(A.c_dr);
    j["c_lr_halves"] = {{"low", constant(A.c_lr_low)}, {"high", constant(A.c_lr_high)}};
    j["c_dr_halves"] = {{"low", constant(A.c_dr_low)}, {"high", constant(A.c_dr_high)}};
    j["valid_T_max"] = optional_exact(A.valid_t_max);
    j["period_max_norm"] = A.period_max_norm.to_string();
    j["period"] = A.period ? point(*A.period) : Json(nullptr);
    j["liminf"] = {{"T_max", A.liminf.t_max.to_string()},
                   {"high_min", optional_exact(A.liminf.high_min)},
                   {"low_min", optional_exact(A.liminf.low_min)},
                   {"positive", A.liminf.positive},
                   {"stable", A.liminf.stable}};

    Json rows = Json::array();
    for (std::size_t i = 0; i < A.complexity.rows.size(); ++i) {
        const auto& c = A.complexity.rows[i];
        const auto& m = A.repetitivity.rows[i];
        const auto& rp = A.repulsion[i];
        Json r;
        r["T"] = exact(c.T);
        r["N_hat"] = c.count;
        r["N_over_Td"] = exact(c.normalized);
        r["M_hat"] = bracket(m.M);
        r["M_eval_radius"] = m.eval_radius.to_string();
        r["M_grid_step"] = m.grid_step.to_string();
        r["valid"] = m.valid;
        r["status"] = m.status;
        r["repulsion_ratio"] = rp.ratio_sq() ? squared(*rp.ratio_sq()) : Json("infinity");
        if (rp.min_pair_sq) r["repulsion_witness"] = {point(X[rp.witness[0]]), point(X[rp.witness[1]])};
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);

    Json verdicts = Json::object();
    for (const auto& v : A.verdicts) verdicts[v.name] = {{"status", v.status}, {"summary", v.summary}};

    Json l1 = Json::array();
    for (const auto& r : A.lemma1.rows) {
        Json e;
        e["T"] = r.T.to_string();
        e["closest_equal_patch_pair"] = r.has_pair ? squared(r.pair_sq) : Json(nullptr);
        e["in_window"] = r.in_window;
        if (r.in_window) e["witness"] = {point(X[r.witness[0]]), point(X[r.witness[1]])};
        l1.push_back(std::move(e));
    }
    verdicts["lemma1_proof_window"]["evidence"] = std::move(l1);

    Json l2 = Json::array();
    for (const auto& r : A.lemma2.rows) {
        l2.push_back({{"T", r.T.to_string()},
                      {"N_hat", r.N},
                      {"ball_inside_eligible_region", r.ball_inside},
                      {"ball_count", r.ball_count},
                      {"pairwise_distinct", r.pairwise_distinct},
                      {"counting", r.counting},
                      {"volume_applicable", r.volume_applicable},
                      {"volume", r.volume}});
    }
    verdicts["lemma2_chain"]["evidence"] = std::move(l2);

    Json lam = Json::array();
    for (const auto& r : A.lambda1.rows) {
        lam.push_back({{"T", r.T.to_string()},
                       {"min_n", exact(r.min_n)},
                       {"min_2n", exact(r.min_2n)},
                       {"stable", r.stable}});
    }
    j["lambda1_rows"] = std::move(lam);
    j["verdicts"] = std::move(verdicts);
    j["overall"] = A.passed() ? "pass" : "fail";
    return j;
}

inline std::string render_text(const Analysis& A) {
    const PointSet& X = *A.sample;
    std::ostringstream o;
    o << "sample: d=" << X.dimension() << " W=" << display(X.window_radius()) << " points=" << X.size() << "\n";
    o << "note: all quantities are window estimates; N_hat is a lower bound, M_hat is measured over B(0, (W-T)/2)\n";
    o << "Delone parameters: r_hat=" << display_sqrt(A.delone.r_sq) << " R_hat in [" << report::m_lo_display(A.delone.R)
      << ", " << report::m_hi_display(A.delone.R) << "]\n";
    o << "period (max norm " << display(A.period_max_norm) << "): ";
    if (A.period) {
        o << "t = (";
        for (std::size_t i = 0; i < A.period->dimension(); ++i) o << (i ? ", " : "") << display((*A.period)[i]);
        o << ")\n";
    } else {
        o << "none\n";
    }
    o << "Repulsion: kappa_hat=" << (A.kappa.kappa_sq ? display_sqrt(*A.kappa.kappa_sq) : "infinity")
      << " trend=" << A.kappa.trend << "\n";
    o << "Proof window: " << A.lemma1.status << "\n";
    o << "Counting chain: lambda1_hat=" << (A.lambda1.lambda1 ? display(*A.lambda1.lambda1) : "n/a")
      << " T1_hat=" << (A.lambda1.t1 ? display(*A.lambda1.t1) : "n/a")
      << " lambda_hat=" << (A.lemma2.lambda_hat ? display(*A.lemma2.lambda_hat) : "n/a")
      << " T0_hat=" << (A.lemma2.t0_hat ? display(*A.lemma2.t0_hat) : "n/a") << " -> " << A.lemma2.status << "\n";
    o << "C_LR_hat=" << (A.c_lr.value ? display(*A.c_lr.value) : "n/a")
      << " C_DR_hat=" << (A.c_dr.value ? display(*A.c_dr.value) : "n/a") << " (valid rows: "
      << A.repetitivity.rows.size() - A.invalid_rows() << "/" << A.repetitivity.rows.size() << ")\n";
    o << "liminf N/T^d: top half min=" << (A.liminf.high_min ? display(*A.liminf.high_min) : "n/a")
      << " lower quarter min=" << (A.liminf.low_min ? display(*A.liminf.low_min) : "n/a") << "\n";
    o << "verdicts:\n";
    for (const auto& v : A.verdicts) o << "  " << v.name << ": " << v.status << "  (" << v.summary << ")\n";
    o << "overall: " << (A.passed() ? "pass" : "fail") << "\n";
    return o.str();
}

}  // namespace aplab

#endif  // APERIODIC_LAB_REPORT_HPP
