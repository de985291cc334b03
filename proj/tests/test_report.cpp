#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "aperiodic_lab/analysis.hpp"
#include "aperiodic_lab/config.hpp"
#include "aperiodic_lab/display.hpp"
#include "aperiodic_lab/generators.hpp"
#include "aperiodic_lab/report.hpp"

using namespace aplab;

namespace {

std::string printf12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

AnalysisConfig config_for(const PointSet& X, unsigned threads = 1) {
    AnalysisConfig c;
    c.grid = default_grid(X.window_radius());
    c.threads = threads;
    return c;
}

}  // namespace

TEST(Display, MatchesPrintfOnRationals) {
    // p/q with q a power of two and small p is exact in binary, so printf is a valid oracle
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long long> num(-(1LL << 40), 1LL << 40);
    for (int i = 0; i < 2000; ++i) {
        const long long p = num(rng);
        const int k = static_cast<int>(rng() % 40);
        const QNum q = QNum::rational(p, Integer(1) << k);
        ASSERT_EQ(display(q), printf12(std::ldexp(static_cast<double>(p), -k))) << q;
    }
}

TEST(Display, Examples) {
    EXPECT_EQ(display(QNum(0)), "0");
    EXPECT_EQ(display(QNum(42)), "42");
    EXPECT_EQ(display(QNum::rational(1, 3)), "0.333333333333");
    EXPECT_EQ(display(QNum::tau()), "1.61803398875");
    EXPECT_EQ(display(QNum(Integer("1000000000000000"))), "1e+15");
    EXPECT_EQ(display(QNum::rational(1, 100000)), "1e-05");
    EXPECT_EQ(display_sqrt(QNum(2)), "1.41421356237");
    EXPECT_EQ(display_sqrt(QNum::rational(1, 2)), "0.707106781187");
    EXPECT_EQ(display_sqrt(QNum(9)), "3");
    EXPECT_THROW(display_sqrt(QNum(-1)), std::domain_error);
}

TEST(Display, RoundHalfEven) {
    EXPECT_EQ(display(QNum::rational(25, 10), 1), "2");
    EXPECT_EQ(display(QNum::rational(35, 10), 1), "4");
    EXPECT_EQ(display(QNum::rational(-25, 10), 1), "-2");
    EXPECT_EQ(display(QNum::rational(125, 100), 2), "1.2");
    EXPECT_EQ(display(QNum::rational(1251, 1000), 2), "1.3");
    EXPECT_EQ(display(QNum::rational(95, 10), 1), "1e+01");
}

TEST(Display, NoFloatInDecisions) {
    instrumentation::reset();
    {
        instrumentation::DecisionScope scope;
        (void)display(QNum::tau() * QNum(1000));
        (void)display_sqrt(QNum(7));
    }
    EXPECT_EQ(instrumentation::float_in_decision.load(), 0u);
    {
        instrumentation::DecisionScope scope;
        (void)QNum::tau().to_double();
    }
    EXPECT_EQ(instrumentation::float_in_decision.load(), 1u);
}

TEST(Config, ParseNumber) {
    EXPECT_EQ(parse_number("7"), QNum(7));
    EXPECT_EQ(parse_number("-3/4"), QNum::rational(-3, 4));
    EXPECT_EQ(parse_number("2.125"), QNum::rational(17, 8));
    EXPECT_EQ(parse_number(".5"), QNum::rational(1, 2));
    EXPECT_EQ(parse_number("0 1 1"), QNum::tau());
    EXPECT_EQ(parse_number(" 12 "), QNum(12));
    for (const char* bad : {"", "1e3", "1/0", "abc", "1/-2", "--1", "."}) {
        EXPECT_THROW(parse_number(bad), std::exception) << bad;
    }
}

TEST(Config, NumberFromJson) {
    EXPECT_EQ(number_from_json(Json(5)), QNum(5));
    EXPECT_EQ(number_from_json(Json("1/3")), QNum::rational(1, 3));
    EXPECT_THROW(number_from_json(Json(0.5)), std::invalid_argument);
}

TEST(Config, Grids) {
    EXPECT_EQ(parse_grid("2:6:2"), (std::vector<QNum>{2, 4, 6}));
    EXPECT_EQ(parse_grid("1/2,3,7/2"), (std::vector<QNum>{QNum::rational(1, 2), 3, QNum::rational(7, 2)}));
    EXPECT_THROW(parse_grid("1:2"), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 2, 0), std::invalid_argument);
    const auto g = default_grid(1000);
    EXPECT_EQ(g.front(), QNum(2));
    EXPECT_LE(g.back(), QNum(250));
    EXPECT_LE(g.size(), 48u);
    EXPECT_GT(g.size(), 40u);
    EXPECT_EQ(default_grid(20), (std::vector<QNum>{2, 3, 4, 5}));
    EXPECT_THROW(default_grid(7), std::invalid_argument);
}

TEST(Csv, HeadersAndRows) {
    const auto Z = gen_lattice(1, 1, 40);
    const std::vector<QNum> grid{2, 4};
    const auto c = complexity_csv(complexity_profile(Z, grid));
    EXPECT_EQ(c, "T,value_lo,value_hi,normalized\n2,1,1,0.5\n4,1,1,0.25\n");
    const auto r = repetitivity_csv(repetitivity_profile(Z, grid));
    EXPECT_EQ(r, "T,M_lo,M_hi,valid,M_over_T,M_over_Nroot\n2,0.5,0.5,true,0.25,0.5\n4,0.5,0.5,true,0.125,0.5\n");
}

TEST(Analysis, FibonacciPassesAndIsDeterministic) {
    const auto F = gen_fibonacci_integer(400);
    const PatchEngine E(F);
    instrumentation::reset();
    const auto A = run_analysis(E, config_for(F));
    EXPECT_EQ(instrumentation::float_in_decision.load(), 0u);
    EXPECT_GT(instrumentation::exact_sign_evaluations.load(), 0u);
    for (const auto& v : A.verdicts) EXPECT_EQ(v.status, "pass") << v.name;
    EXPECT_TRUE(A.passed());
    const auto B = run_analysis(E, config_for(F, 4));
    EXPECT_EQ(certificate_json(A).dump(), certificate_json(B).dump());
    EXPECT_EQ(repetitivity_csv(A.repetitivity), repetitivity_csv(B.repetitivity));
    EXPECT_EQ(complexity_csv(A.complexity), complexity_csv(B.complexity));
}

TEST(Analysis, IntegerLineFails) {
    const auto Z = gen_lattice(1, 1, 50);
    const auto A = run_analysis(PatchEngine(Z), config_for(Z));
    EXPECT_FALSE(A.passed());
    EXPECT_EQ(A.verdict("non_periodicity")->status, "fail");
    EXPECT_EQ(A.verdict("repulsion_signature")->status, "fail");
    EXPECT_EQ(A.verdict("lemma1_proof_window")->status, "fail");
    EXPECT_NE(A.verdict("lemma2_chain")->status, "pass");
    ASSERT_TRUE(A.period.has_value());
    EXPECT_EQ(*A.period, Point{QNum(1)});
    EXPECT_EQ(verdicts_json(A)["overall"], "fail");
}

TEST(Analysis, Guards) {
    const auto Z = gen_lattice(1, 1, 50);
    const PatchEngine E(Z);
    AnalysisConfig c;
    c.grid = {2, 30};
    EXPECT_THROW(run_analysis(E, c), std::invalid_argument);
    c.grid = {1, 4};
    EXPECT_THROW(run_analysis(E, c), std::invalid_argument);
}

TEST(CertificateJson, CarriesExactCounterparts) {
    const auto F = gen_fibonacci_integer(300);
    const auto A = run_analysis(PatchEngine(F), config_for(F));
    const Json j = certificate_json(A);
    EXPECT_EQ(j["delone"]["r_hat"]["squared"], QNum::rational(1, 4).to_string());
    EXPECT_EQ(j["delone"]["r_hat"]["display"], "0.5");
    ASSERT_EQ(j["rows"].size(), A.complexity.rows.size());
    for (const char* key : {"semantics", "kappa", "lambda1_hat", "c_lr_hat", "c_dr_hat", "liminf", "verdicts",
                            "lambda1_rows", "period", "overall"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    // the exact value parses back to the value in the analysis
    EXPECT_EQ(QNum::parse(j["c_lr_hat"]["value"]["exact"].get<std::string>()), *A.c_lr.value);
    EXPECT_EQ(j["c_lr_hat"]["value"]["display"], display(*A.c_lr.value));
}
