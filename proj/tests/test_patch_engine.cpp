#include <gtest/gtest.h>

#include "aperiodic_lab/generators.hpp"
#include "aperiodic_lab/patch_engine.hpp"

using namespace aplab;

namespace {

// Every group must agree with the oracle's partition of the same centers.
void expect_same_as_oracle(const PointSet& X, const QNum& T, unsigned threads = 1) {
    CountOptions o;
    o.threads = threads;
    const auto fast = PatchEngine(X).count(T, o);
    const auto slow = count_patches_bruteforce(X, T);
    EXPECT_EQ(fast.count, slow.count) << "T=" << T.to_string();
    EXPECT_TRUE(same_grouping(fast.occurrences, slow.occurrences)) << "T=" << T.to_string();
}

PointSet translate_and_clip(const PointSet& X, const Point& v) {
    const QNum W = X.window_radius() - sqrt_upper(norm_sq(v));
    std::vector<Point> out;
    for (const auto& p : X.points()) {
        Point q = p - v;
        if (norm_sq(q) <= W * W) out.push_back(std::move(q));
    }
    return PointSet(X.dimension(), std::move(out), W);
}

}  // namespace

TEST(EligibleCenters, IntegerLineExamples) {
    const auto Z = gen_lattice(1, 1, 10);
    EXPECT_EQ(eligible_centers(Z, 10), (std::vector<Point>{Point{QNum(0)}}));
    EXPECT_EQ(eligible_centers(Z, 4).size(), 13u);
    EXPECT_THROW(eligible_centers(Z, 11), WindowExhausted);
}

TEST(EligibleCenters, FibonacciWithinRadius) {
    const auto F = gen_fibonacci_integer(500);
    const auto c = eligible_centers(F, 100);
    ASSERT_FALSE(c.empty());
    for (const auto& p : c) EXPECT_LE(abs(p[0]), QNum(400));
    EXPECT_EQ(PatchEngine(F).eligible(100).size(), c.size());
}

TEST(PatchAt, Examples) {
    const auto Z = gen_lattice(1, 1, 10);
    const auto p = patch_at(Z, Point{QNum(3)}, 2);
    EXPECT_EQ(p.displacements, (std::vector<Point>{Point{QNum(-2)}, Point{QNum(-1)}, Point{QNum(0)}, Point{QNum(1)},
                                                   Point{QNum(2)}}));
    EXPECT_TRUE(p.contains_origin());
    // radius below the minimal gap isolates the center
    EXPECT_EQ(patch_at(Z, Point{QNum(0)}, QNum::rational(1, 2)).displacements, (std::vector<Point>{Point{QNum(0)}}));
    EXPECT_THROW(patch_at(Z, Point{QNum::rational(1, 2)}, 2), std::invalid_argument);
    EXPECT_THROW(patch_at(Z, Point{QNum(9)}, 2), WindowExhausted);
}

TEST(PatchAt, FibonacciPointFollowedByGapsTwoOne) {
    const auto F = gen_fibonacci_integer(100);
    bool found = false;
    for (const auto& x : F.points()) {
        const Point n1{x[0] + QNum(2)}, n2{x[0] + QNum(3)};
        if (!F.contains(n1) || !F.contains(n2) || abs(x[0]) > QNum(90)) continue;
        const auto p = patch_at(F, x, 3);
        // the left neighbour sits 1 or 2 away; the right side is 0, 2, 3
        ASSERT_GE(p.displacements.size(), 4u);
        const QNum left = p.displacements[p.displacements.size() - 4][0];
        EXPECT_TRUE(left == QNum(-1) || left == QNum(-2));
        EXPECT_EQ(p.displacements.back(), Point{QNum(3)});
        EXPECT_TRUE(p.contains_origin());
        found = true;
        break;
    }
    EXPECT_TRUE(found);
}

TEST(CountPatches, LatticesHaveOneType) {
    const auto Z = gen_lattice(1, 1, 50);
    for (int T = 1; T <= 40; ++T) EXPECT_EQ(count_patches(Z, T).count, 1u) << T;
    EXPECT_EQ(count_patches(gen_lattice(2, 1, 30), 5).count, 1u);
}

TEST(CountPatches, OracleEquivalenceFibonacci) {
    const auto F = gen_fibonacci_integer(200);
    for (int T = 2; T <= 30; ++T) expect_same_as_oracle(F, T);
    expect_same_as_oracle(F, QNum::rational(7, 2), 3);
}

TEST(CountPatches, OracleEquivalenceCutProject) {
    const auto C = gen_fibonacci_cut_project(QNum::rational(1, 5), 80);
    for (QNum T : {QNum(2), QNum::tau() * QNum(3), QNum(10), QNum(17)}) expect_same_as_oracle(C, T);
}

TEST(CountPatches, OracleEquivalence2D) {
    const auto B = gen_block_substitution_2d('A', 40);
    for (int T : {2, 4, 7}) expect_same_as_oracle(B, T, 2);
    const auto S = gen_periodic_superlattice({Point{QNum(0), QNum(0)}, Point{QNum::rational(1, 3), QNum(0)}},
                                             Point{QNum(1), QNum(1)}, 12);
    expect_same_as_oracle(S, 3);
}

TEST(CountPatches, FibonacciComplexityIsCrossChecked) {
    const auto F = gen_fibonacci_integer(500);
    const auto c = count_patches(F, 10);
    EXPECT_EQ(c.count, count_patches_bruteforce(F, 10).count);
    EXPECT_EQ(c.count, 13u);
}

TEST(CountPatches, ThreadCountDoesNotChangeGrouping) {
    const auto F = gen_fibonacci_integer(1000);
    const PatchEngine E(F);
    for (int T : {5, 40, 120}) {
        CountOptions one, many;
        many.threads = 5;
        const auto a = E.count(T, one);
        const auto b = E.count(T, many);
        EXPECT_EQ(a.count, b.count);
        EXPECT_TRUE(same_grouping(a.occurrences, b.occurrences));
    }
}

TEST(CountPatches, CollidingHashStillExact) {
    const auto F = gen_fibonacci_integer(200);
    const auto B = gen_block_substitution_2d('C', 30);
    auto constant = [](auto, std::size_t) -> std::uint64_t { return 42; };
    for (const PointSet* X : {&F, &B}) {
        const PatchEngine E(*X);
        for (int T : {2, 5, 9}) {
            const auto a = E.count(T, {}, constant);
            const auto b = count_patches_bruteforce(*X, T);
            EXPECT_EQ(a.count, b.count);
            EXPECT_TRUE(same_grouping(a.occurrences, b.occurrences));
        }
    }
}

TEST(CountPatches, TranslationMapsGroupsIntoGroups) {
    const auto F = gen_fibonacci_integer(300);
    std::size_t k = F.find(Point{QNum(0)});
    ASSERT_NE(k, PointSet::npos);
    const Point v = F[k + 4];
    const auto Y = translate_and_clip(F, v);
    const QNum T = 12;
    const auto cy = count_patches(Y, T);
    const auto cx = count_patches(F, T);
    const auto gx = cx.occurrences.group_of(F.size());
    for (const auto& g : cy.occurrences.groups) {
        std::size_t target = static_cast<std::size_t>(-1);
        for (std::size_t c : g.centers) {
            const std::size_t i = F.find(Y[c] + v);
            ASSERT_NE(i, PointSet::npos);
            ASSERT_NE(gx[i], static_cast<std::size_t>(-1));
            if (target == static_cast<std::size_t>(-1)) target = gx[i];
            EXPECT_EQ(gx[i], target);
        }
        EXPECT_EQ(patch_at(Y, Y[g.centers.front()], T).displacements,
                  patch_at(F, Y[g.centers.front()] + v, T).displacements);
    }
    EXPECT_LE(cy.count, cx.count);
}

TEST(CountPatches, MonotoneOnCommonCenters) {
    const auto F = gen_fibonacci_integer(400);
    const auto B = gen_block_substitution_2d('A', 48);
    for (const PointSet* X : {&F, &B}) {
        const PatchEngine E(*X);
        const QNum big = X->dimension() == 1 ? QNum(100) : QNum(12);
        CountOptions o;
        o.center_radius = X->window_radius() - big;
        std::size_t prev = 0;
        for (QNum T = 1; T <= big; T += 1) {
            const auto n = E.count(T, o).count;
            EXPECT_GE(n, prev) << T.to_string();
            prev = n;
        }
    }
}

TEST(CountPatches, BigIntegerPath) {
    const QNum s(Integer(1) << 30);
    const auto X = gen_lattice(1, s, s * QNum(20));
    const PatchEngine E(X);
    EXPECT_TRUE(E.uses_big_integers());
    EXPECT_EQ(E.count(s * QNum(5)).count, 1u);

    // a scaled copy of Fibonacci: same counts at scaled radii
    const auto F = gen_fibonacci_integer(100);
    std::vector<Point> scaled;
    for (const auto& p : F.points()) scaled.push_back(s * p);
    const PointSet G(1, scaled, s * F.window_radius());
    const PatchEngine EG(G);
    ASSERT_TRUE(EG.uses_big_integers());
    for (int T : {2, 6, 20}) {
        const auto a = EG.count(s * QNum(T));
        const auto b = count_patches(F, T);
        EXPECT_EQ(a.count, b.count);
        EXPECT_TRUE(same_grouping(a.occurrences, b.occurrences));
    }
}

TEST(CountPatches, ExhaustedWindow) {
    const auto Z = gen_lattice(1, 1, 10);
    EXPECT_THROW(count_patches(Z, 11), WindowExhausted);
    EXPECT_THROW(count_patches(Z, 0), std::invalid_argument);
}

TEST(ComplexityProfile, GuardsAndValues) {
    const auto Z = gen_lattice(1, 1, 40);
    const std::vector<QNum> grid{2, 4, 8};
    const auto p = complexity_profile(Z, grid);
    for (const auto& r : p.rows) {
        EXPECT_EQ(r.count, 1u);
        EXPECT_EQ(r.normalized, QNum(1) / r.T);
    }
    const std::vector<QNum> deep{2, 30};
    EXPECT_THROW(complexity_profile(Z, deep), std::invalid_argument);
    EXPECT_NO_THROW(complexity_profile(Z, deep, {}, true));
    const std::vector<QNum> bad{4, 2};
    EXPECT_THROW(complexity_profile(Z, bad), std::invalid_argument);
}
