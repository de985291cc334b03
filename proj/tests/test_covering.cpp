#include <gtest/gtest.h>

#include <random>
#include <set>

#include "aperiodic_lab/covering.hpp"
#include "aperiodic_lab/generators.hpp"
#include "aperiodic_lab/repetitivity.hpp"

using namespace aplab;

namespace {

std::vector<QNum> ints(std::initializer_list<long long> v) {
    std::vector<QNum> out;
    for (long long x : v) out.emplace_back(x);
    return out;
}

// max over the nodes of (hZ)^2 cap B(0, rho) of the squared distance to the
// nearest center; the lower end of any grid bracket must equal it.
QNum node_max_sq(const std::vector<Point>& centers, const QNum& rho, const QNum& h) {
    const long long n = (rho / h).floor().convert_to<long long>();
    QNum best = -1;
    for (long long i = -n; i <= n; ++i) {
        for (long long j = -n; j <= n; ++j) {
            const Point node{QNum(i) * h, QNum(j) * h};
            if (norm_sq(node) > rho * rho) continue;
            QNum m = sq_dist(node, centers.front());
            for (const auto& c : centers) m = min(m, sq_dist(node, c));
            best = max(best, m);
        }
    }
    return best;
}

}  // namespace

TEST(Covering1D, KnownValues) {
    std::vector<QNum> z;
    for (int k = -10; k <= 10; ++k) z.emplace_back(k);
    EXPECT_EQ(covering_radius_1d(z, 5), QNum::rational(1, 2));
    EXPECT_EQ(covering_radius_1d(ints({0}), 3), QNum(3));
    EXPECT_EQ(covering_radius_1d(ints({-4, 0, 1}), 4), QNum(3));
    EXPECT_THROW(covering_radius_1d(std::vector<QNum>{}, 3), std::invalid_argument);
}

TEST(Covering1D, ProbeProperty) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long long> pos(-400, 400);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<QNum> c;
        for (int k = 0; k < 12; ++k) c.push_back(QNum::rational(pos(rng), 7));
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        const QNum rho = QNum::rational(std::uniform_int_distribution<long long>(1, 400)(rng), 9);
        const QNum r = covering_radius_1d(c, rho);
        auto nearest = [&](const QNum& y) {
            QNum m = abs(y - c.front());
            for (const auto& x : c) m = min(m, abs(y - x));
            return m;
        };
        std::uniform_int_distribution<long long> probe(-1000000, 1000000);
        for (int k = 0; k < 350; ++k) {
            const QNum y = rho * QNum::rational(probe(rng), 1000000);
            ASSERT_LE(nearest(y), r);
        }
        // attained at an end of the interval or at a midpoint
        bool attained = nearest(rho) == r || nearest(-rho) == r;
        for (std::size_t i = 1; i < c.size(); ++i) {
            const QNum m = (c[i] + c[i - 1]) / QNum(2);
            if (abs(m) <= rho && nearest(m) == r) attained = true;
        }
        EXPECT_TRUE(attained);
    }
}

TEST(Covering1D, IrrationalCenters) {
    const QNum t = QNum::tau();
    EXPECT_EQ(covering_radius_1d(std::vector<QNum>{-t, QNum(0), QNum(1)}, 1), t / QNum(2));
}

TEST(Covering2D, SquareLatticeBracket) {
    CoveringQuery q;
    q.centers = gen_lattice(2, 1, 20).points();
    q.eval_radius = 5;
    q.grid_step = QNum::rational(1, 8);
    const auto b = covering_radius_2d(q);
    EXPECT_TRUE(b.contains_sqrt(QNum::rational(1, 2)));
    EXPECT_TRUE(b.width_at_most_slack());
    // width <= h sqrt2 / 2
    EXPECT_LE(b.upper_bound() - b.lower_bound(), QNum::rational(884, 10000));
}

TEST(Covering2D, SinglePoint) {
    CoveringQuery q;
    q.centers = {Point{QNum(0), QNum(0)}};
    q.eval_radius = 2;
    const auto b = covering_radius_2d(q);
    EXPECT_TRUE(b.contains_sqrt(QNum(4)));
    EXPECT_EQ(b.lo_sq, QNum(4));
}

TEST(Covering2D, StepTooCoarse) {
    CoveringQuery q;
    q.centers = {Point{QNum(0), QNum(0)}};
    q.eval_radius = 2;
    q.grid_step = QNum::rational(1, 2);
    EXPECT_THROW(covering_radius_2d(q), std::invalid_argument);
}

TEST(Covering2D, GridCovererMatchesBruteForce) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long long> pos(-60, 60);
    for (int trial = 0; trial < 6; ++trial) {
        CoveringQuery q;
        std::set<Point> seen;
        while (seen.size() < 25) seen.insert(Point{QNum::rational(pos(rng), 4), QNum::rational(pos(rng), 3)});
        q.centers.assign(seen.begin(), seen.end());
        q.eval_radius = QNum::rational(std::uniform_int_distribution<long long>(6, 10)(rng), 1);
        q.grid_step = QNum::rational(1, 4);
        const auto fast = covering_radius_2d(q);
        const auto slow = covering_radius_2d_bruteforce(q);
        EXPECT_EQ(fast.lo_sq, slow.lo_sq);
        EXPECT_EQ(fast.hi_sq, slow.hi_sq);
        EXPECT_EQ(fast.lo_sq, node_max_sq(q.centers, q.eval_radius, q.grid_step));
    }
}

TEST(Covering2D, ProbesStayUnderUpperEnd) {
    std::mt19937_64 rng(29);
    const auto B = gen_block_substitution_2d('A', 40);
    CoveringQuery q;
    q.centers = B.points();
    q.eval_radius = 16;
    q.grid_step = QNum::rational(1, 4);
    const auto b = covering_radius_2d(q);
    std::uniform_int_distribution<long long> u(-16000, 16000);
    int tested = 0;
    while (tested < 300) {
        const Point p{QNum::rational(u(rng), 1000), QNum::rational(u(rng), 1000)};
        if (norm_sq(p) > QNum(256)) continue;
        QNum m = sq_dist(p, q.centers.front());
        for (const auto& c : q.centers) m = min(m, sq_dist(p, c));
        ASSERT_TRUE(sqrt_at_most_sum(m, b.hi_sq, b.slack_sq));
        ++tested;
    }
}

TEST(Covering2D, HalvingTheStepNests) {
    const auto B = gen_block_substitution_2d('B', 40);
    CoveringQuery q;
    q.centers = B.points();
    q.eval_radius = 12;
    q.grid_step = QNum::rational(1, 2);
    const auto coarse = covering_radius_2d(q);
    q.grid_step = QNum::rational(1, 4);
    const auto fine = covering_radius_2d(q);
    // finer nodes include the coarse ones; the upper end can only tighten
    EXPECT_GE(fine.lo_sq, coarse.lo_sq);
    EXPECT_LE(fine.upper_bound(), coarse.upper_bound());
    EXPECT_EQ(fine.slack_sq * QNum(4), coarse.slack_sq);
}

TEST(Covering2D, IrrationalDataFallsBackToBruteForce) {
    CoveringQuery q;
    q.centers = {Point{QNum(0), QNum(0)}, Point{QNum::tau(), QNum(0)}};
    q.eval_radius = 2;
    q.grid_step = QNum::rational(1, 4);
    EXPECT_FALSE(GridCoverer::applicable(q.centers, q.eval_radius, q.grid_step));
    const auto b = covering_radius_2d(q);
    EXPECT_EQ(b, covering_radius_2d_bruteforce(q));
}

TEST(Repetitivity, IntegerLine) {
    const auto Z = gen_lattice(1, 1, 50);
    for (int T : {2, 10, 24}) {
        const auto r = repetitivity_at(Z, T);
        ASSERT_TRUE(r.M.is_exact());
        EXPECT_EQ(*r.M.exact, QNum::rational(1, 2));
        EXPECT_TRUE(r.valid);
        EXPECT_EQ(r.patch_types, 1u);
    }
}

TEST(Repetitivity, SquareLattice) {
    const auto Z2 = gen_lattice(2, 1, 64);
    const auto r = repetitivity_at(Z2, 4);
    EXPECT_TRUE(r.M.contains_sqrt(QNum::rational(1, 2)));
    EXPECT_TRUE(r.valid);
}

TEST(Repetitivity, FibonacciWindowStable) {
    const auto F1 = gen_fibonacci_integer(1000);
    const auto F2 = gen_fibonacci_integer(2000);
    const auto a = repetitivity_at(F1, 20);
    const auto b = repetitivity_at(F2, 20);
    ASSERT_TRUE(a.M.is_exact() && b.M.is_exact());
    EXPECT_EQ(*a.M.exact, *b.M.exact);
    EXPECT_EQ(*a.M.exact, QNum::rational(89, 2));
}

TEST(Repetitivity, MonotoneOverCommonRadius) {
    // all T use the centers and evaluation radius of the largest T
    const auto F = gen_fibonacci_integer(600);
    const PatchEngine E(F);
    const QNum Tmax = 80;
    const QNum rho = repetitivity_eval_radius(F.window_radius(), Tmax);
    CountOptions o;
    o.center_radius = F.window_radius() - Tmax;
    QNum prev = 0;
    for (int T = 2; T <= 80; T += 6) {
        const auto pc = E.count(T, o);
        QNum m = 0;
        for (const auto& g : pc.occurrences.groups) {
            std::vector<QNum> c;
            for (auto i : g.centers) c.push_back(F[i][0]);
            m = max(m, covering_radius_1d(c, rho));
        }
        EXPECT_GE(m, prev) << T;
        prev = m;
    }
}

TEST(Repetitivity, SmallWindowFlagged) {
    const auto F = gen_fibonacci_integer(60);
    const auto r = repetitivity_at(F, 25);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.status, "window too small");
}

TEST(Repetitivity, AutoGridStep) {
    EXPECT_EQ(auto_grid_step(4), QNum::rational(1, 8));
    EXPECT_EQ(auto_grid_step(QNum::rational(1, 2)), QNum::rational(1, 16));
    EXPECT_THROW(auto_grid_step(0), std::invalid_argument);
    EXPECT_EQ(auto_grid_step(100), QNum(1));
    const QNum h = auto_grid_step(1000);
    EXPECT_LE(QNum(1000) / h, QNum(128));
    EXPECT_LE(h * QNum(8), QNum(1000));
}
