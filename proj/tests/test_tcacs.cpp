#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "aes/config.hpp"
#include "aes/scenario.hpp"
#include "aes/tcacs.hpp"

using namespace aes;

namespace {

double sphere(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rosenbrock(const std::vector<double>& x) {
    double a = 1.0 - x[0];
    double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
}

std::vector<Interval> square_bounds(double lo, double hi, int d) {
    return std::vector<Interval>(static_cast<size_t>(d), Interval{lo, hi});
}

bool within_bounds(const std::vector<double>& p, const std::vector<Interval>& bounds) {
    for (size_t j = 0; j < p.size(); ++j)
        if (p[j] < bounds[j].lo || p[j] > bounds[j].hi) return false;
    return true;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("sphere: median final cost under 1e-2 across 30 seeds") {
    std::vector<double> finals;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        OptProblem problem{sphere, square_bounds(-5, 5, 2), 300};
        TcacsParams params;
        params.seed = seed;
        OptResult result = optimize(problem, params);
        finals.push_back(result.best_cost);
        CHECK(result.history.back().evaluations <= 300);
        CHECK(within_bounds(result.best_point, problem.bounds));
    }
    CHECK(median(finals) < 1e-2);
}

TEST_CASE("rosenbrock: incumbent is monotone and improves") {
    OptProblem problem{rosenbrock, square_bounds(-2, 2, 2), 300};
    TcacsParams params;
    params.seed = 5;
    OptResult result = optimize(problem, params);
    REQUIRE(!result.history.empty());
    for (size_t i = 1; i < result.history.size(); ++i)
        CHECK(result.history[i].best_cost <= result.history[i - 1].best_cost);
    CHECK(result.best_cost < result.history.front().best_cost);
    CHECK(result.best_cost < 1.0);  // near the (1, 1) valley
}

TEST_CASE("sample_ants") {
    std::vector<Interval> bounds = square_bounds(0, 1, 2);
    TcacsParams params;
    params.n_ants = 8;

    SUBCASE("first iteration is uniform over the box, deterministic per seed") {
        TcacsState state = make_initial_state(bounds);
        SplitMix64 rng_a = derive_stream(3, kDomainOptimizer, 0, 0);
        SplitMix64 rng_b = derive_stream(3, kDomainOptimizer, 0, 0);
        auto ants_a = sample_ants(state, params, bounds, rng_a);
        auto ants_b = sample_ants(state, params, bounds, rng_b);
        REQUIRE(ants_a.size() == 8);
        CHECK(ants_a == ants_b);
        for (const auto& p : ants_a) CHECK(within_bounds(p, bounds));
    }
    SUBCASE("vanishing spread collapses every ant onto the incumbent") {
        TcacsState state = make_initial_state(bounds);
        state.iteration = 1;
        state.best_point = {0.25, 0.75};
        state.best_cost = 1.0;
        state.sigma = {0.0, 0.0};
        SplitMix64 rng{9};
        for (const auto& p : sample_ants(state, params, bounds, rng)) {
            CHECK(p[0] == doctest::Approx(0.25));
            CHECK(p[1] == doctest::Approx(0.75));
        }
    }
    SUBCASE("a tabu ball over the whole box falls back to surface projection") {
        TcacsState state = make_initial_state(bounds);
        state.iteration = 1;
        state.best_point = {0.5, 0.5};
        state.best_cost = 1.0;
        state.sigma = {0.1, 0.1};
        state.tabu.push_back({{0.5, 0.5}, 10.0});
        SplitMix64 rng{4};
        auto ants = sample_ants(state, params, bounds, rng);
        REQUIRE(ants.size() == 8);
        for (const auto& p : ants) {
            CHECK(within_bounds(p, bounds));
            bool on_box_edge = p[0] == 0.0 || p[0] == 1.0 || p[1] == 0.0 || p[1] == 1.0;
            CHECK(on_box_edge);
        }
    }
    SUBCASE("samples avoid a small tabu ball") {
        TcacsState state = make_initial_state(bounds);
        state.iteration = 1;
        state.best_point = {0.5, 0.5};
        state.best_cost = 1.0;
        state.sigma = {0.2, 0.2};
        state.tabu.push_back({{0.5, 0.5}, 0.05});
        SplitMix64 rng{4};
        for (const auto& p : sample_ants(state, params, bounds, rng)) {
            double d = std::hypot(p[0] - 0.5, p[1] - 0.5);
            CHECK(d >= 0.05 * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("update_pheromone") {
    std::vector<Interval> bounds = square_bounds(0, 10, 2);

    SUBCASE("ants collapsed on the incumbent floor the spread") {
        TcacsState state = make_initial_state(bounds);
        std::vector<EvaluatedPoint> ants(5, {{2.0, 2.0}, 1.0});
        update_pheromone(state, ants, 0.5, bounds);
        CHECK(state.best_cost == 1.0);
        CHECK(state.sigma[0] == doctest::Approx(1e-6 * 10.0));
        CHECK(state.sigma[1] == doctest::Approx(1e-6 * 10.0));
    }
    SUBCASE("symmetric pair about the incumbent gives gamma * s") {
        TcacsState state = make_initial_state(bounds);
        state.best_point = {5.0, 5.0};
        state.best_cost = 0.5;  // incumbent from an earlier iteration
        std::vector<EvaluatedPoint> ants = {{{5.0 + 1.5, 5.0}, 2.0}, {{5.0 - 1.5, 5.0}, 3.0}};
        update_pheromone(state, ants, 0.5, bounds);
        CHECK(state.best_cost == 0.5);
        CHECK(state.sigma[0] == doctest::Approx(0.5 * 1.5).epsilon(1e-12));
    }
    SUBCASE("incumbent never worsens") {
        TcacsState state = make_initial_state(bounds);
        std::vector<EvaluatedPoint> ants = {{{1.0, 1.0}, 4.0}, {{2.0, 2.0}, 7.0}};
        update_pheromone(state, ants, 0.5, bounds);
        CHECK(state.best_cost == 4.0);
        std::vector<EvaluatedPoint> worse = {{{3.0, 3.0}, 9.0}};
        update_pheromone(state, worse, 0.5, bounds);
        CHECK(state.best_cost == 4.0);
        CHECK(state.best_point[0] == 1.0);
    }
}

TEST_CASE("update_tabu") {
    std::vector<Interval> bounds = square_bounds(0, 1, 2);
    TcacsParams params;
    params.n_ants = 4;
    params.tabu_capacity = 5;
    params.tabu_radius_init = 0.05;
    const double diag = std::sqrt(2.0);

    SUBCASE("worst ant becomes a ball; balls shrink geometrically") {
        TcacsState state = make_initial_state(bounds);
        state.best_point = {0.0, 0.0};
        state.best_cost = 0.1;
        std::vector<EvaluatedPoint> ants = {{{1.0, 1.0}, 9.0}, {{0.2, 0.2}, 1.0}};
        update_tabu(state, ants, params, bounds);
        REQUIRE(state.tabu.size() == 1);
        CHECK(state.tabu[0].center[0] == 1.0);
        CHECK(state.tabu[0].radius == doctest::Approx(0.05 * diag));
        for (int i = 0; i < 3; ++i) {
            std::vector<EvaluatedPoint> more = {{{0.9, 0.1}, 5.0}, {{0.3, 0.3}, 1.0}};
            update_tabu(state, more, params, bounds);
        }
        CHECK(state.tabu.front().radius == doctest::Approx(0.05 * diag * 0.125));  // gamma^3
    }
    SUBCASE("capacity bounds the list FIFO") {
        TcacsState state = make_initial_state(bounds);
        state.best_point = {0.0, 0.0};
        state.best_cost = 0.0;
        for (int it = 0; it < 7; ++it) {
            std::vector<EvaluatedPoint> ants = {{{0.1 + 0.1 * it, 0.9}, 5.0 + it}};
            update_tabu(state, ants, params, bounds);
        }
        CHECK(state.tabu.size() == 5);
        CHECK(state.tabu.front().center[0] == doctest::Approx(0.3));  // two oldest evicted
        CHECK(state.tabu.back().center[0] == doctest::Approx(0.7));
    }
    SUBCASE("the incumbent stays outside every ball") {
        SplitMix64 rng{31};
        TcacsState state = make_initial_state(bounds);
        state.best_point = {rng.next_double(), rng.next_double()};
        state.best_cost = 0.0;
        for (int it = 0; it < 50; ++it) {
            std::vector<EvaluatedPoint> ants;
            for (int a = 0; a < 4; ++a)
                ants.push_back({{rng.next_double(), rng.next_double()}, 1.0 + rng.next_double()});
            update_pheromone(state, ants, 0.5, bounds);
            update_tabu(state, ants, params, bounds);
            for (const TabuBall& ball : state.tabu) {
                double d = std::hypot(state.best_point[0] - ball.center[0],
                                      state.best_point[1] - ball.center[1]);
                CHECK(d >= ball.radius);
                CHECK(ball.radius > 0.0);
            }
        }
    }
    SUBCASE("promising archive keeps the best, capacity bounded") {
        TcacsState state = make_initial_state(bounds);
        params.promising_capacity = 3;
        std::vector<EvaluatedPoint> ants = {
            {{0.1, 0.1}, 4.0}, {{0.2, 0.2}, 1.0}, {{0.3, 0.3}, 3.0}, {{0.4, 0.4}, 2.0}};
        update_tabu(state, ants, params, bounds);
        REQUIRE(state.promising.size() == 3);
        CHECK(state.promising[0].cost == 1.0);
        CHECK(state.promising[1].cost == 2.0);
        CHECK(state.promising[2].cost == 3.0);
    }
}

TEST_CASE("pca_transform") {
    SUBCASE("points on the line y = x align the dominant axis with (1,1)/sqrt(2)") {
        std::vector<EvaluatedPoint> cloud;
        for (int i = 0; i < 10; ++i)
            cloud.push_back({{0.1 * i, 0.1 * i}, 0.0});
        PcaFrame frame = pca_transform(cloud, 2.0);
        size_t dominant = frame.axis_scale[0] > frame.axis_scale[1] ? 0 : 1;
        Eigen::Vector2d axis = frame.axes.col(static_cast<Eigen::Index>(dominant));
        double along = std::abs(axis.dot(Eigen::Vector2d(1, 1) / std::sqrt(2.0)));
        CHECK(along == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("a single point yields the identity frame") {
        std::vector<EvaluatedPoint> one = {{{0.3, 0.4}, 0.0}};
        PcaFrame frame = pca_transform(one, 2.0);
        CHECK(frame.axes.isIdentity(1e-15));
        CHECK(frame.axis_scale[0] == 1.0);
        CHECK(frame.axis_scale[1] == 1.0);
    }
    SUBCASE("coincident points yield the identity frame") {
        std::vector<EvaluatedPoint> cloud(4, {{0.3, 0.4, 0.5}, 0.0});
        PcaFrame frame = pca_transform(cloud, 2.0);
        CHECK(frame.axes.isIdentity(1e-15));
    }
    SUBCASE("columns are orthonormal for random clouds (Gram-Schmidt oracle)") {
        SplitMix64 rng{8};
        for (int trial = 0; trial < 50; ++trial) {
            int d = 2 + static_cast<int>(rng.next_double() * 3);
            std::vector<EvaluatedPoint> cloud;
            for (int p = 0; p < 12; ++p) {
                std::vector<double> x(static_cast<size_t>(d));
                for (double& c : x) c = rng.next_double() * 4 - 2;
                cloud.push_back({x, 0.0});
            }
            PcaFrame frame = pca_transform(cloud, 2.0);
            // Independent check: Gram-Schmidt coefficients of each column
            // against the previous ones must vanish, and norms must be 1.
            std::vector<Eigen::VectorXd> basis;
            for (int j = 0; j < d; ++j) {
                Eigen::VectorXd v = frame.axes.col(j);
                for (const Eigen::VectorXd& b : basis) {
                    double coeff = v.dot(b);
                    CHECK(std::abs(coeff) <= 1e-10);
                    v -= coeff * b;
                }
                CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-10));
                basis.push_back(v / v.norm());
            }
        }
    }
}

TEST_CASE("optimize bookkeeping") {
    SUBCASE("budget is exhausted exactly, never exceeded") {
        OptProblem problem{sphere, square_bounds(-1, 1, 2), 301};
        TcacsParams params;
        params.seed = 2;
        OptResult result = optimize(problem, params);
        CHECK(result.history.back().evaluations == 301);
        int prev = 0;
        for (const HistoryEntry& h : result.history) {
            CHECK(h.evaluations <= 301);
            CHECK(h.evaluations > prev);
            prev = h.evaluations;
        }
    }
    SUBCASE("identical seeds reproduce the history exactly") {
        OptProblem problem{rosenbrock, square_bounds(-2, 2, 2), 150};
        TcacsParams params;
        params.seed = 11;
        OptResult a = optimize(problem, params);
        OptResult b = optimize(problem, params);
        REQUIRE(a.history.size() == b.history.size());
        for (size_t i = 0; i < a.history.size(); ++i) {
            CHECK(a.history[i].best_cost == b.history[i].best_cost);
            CHECK(a.history[i].sigma == b.history[i].sigma);
            CHECK(a.history[i].tabu_count == b.history[i].tabu_count);
        }
        CHECK(a.best_point == b.best_point);
    }
    SUBCASE("returned points stay within bounds on random problems") {
        SplitMix64 rng{1234};
        for (int trial = 0; trial < 1000; ++trial) {
            int d = 1 + static_cast<int>(rng.next_double() * 3);
            std::vector<Interval> bounds;
            std::vector<double> target;
            for (int j = 0; j < d; ++j) {
                double lo = rng.next_double() * 10 - 5;
                bounds.push_back({lo, lo + 0.5 + rng.next_double() * 5});
                target.push_back(bounds.back().lo + rng.next_double() * bounds.back().extent());
            }
            auto quadratic = [target](const std::vector<double>& x) {
                double s = 0.0;
                for (size_t j = 0; j < x.size(); ++j) s += (x[j] - target[j]) * (x[j] - target[j]);
                return s;
            };
            OptProblem problem{quadratic, bounds, 12};
            TcacsParams params;
            params.n_ants = 4;
            params.seed = static_cast<uint64_t>(trial);
            OptResult result = optimize(problem, params);
            CHECK(within_bounds(result.best_point, bounds));
        }
    }
    SUBCASE("sigma shrinks by 10x within 20 iterations on a 1-D quadratic") {
        OptProblem problem{[](const std::vector<double>& x) { return x[0] * x[0]; },
                           square_bounds(-3, 3, 1), 300};
        TcacsParams params;
        params.seed = 6;
        OptResult result = optimize(problem, params);
        REQUIRE(result.history.size() == 20);
        CHECK(result.history.back().sigma[0] < result.history.front().sigma[0] / 10.0);
    }
    SUBCASE("NaN objective values are recorded as the penalty cost") {
        auto spiky = [](const std::vector<double>& x) {
            if (x[0] > 0.0) return std::nan("");
            return x[0] + 1.0;
        };
        OptProblem problem{spiky, square_bounds(-1, 1, 1), 60};
        TcacsParams params;
        params.n_ants = 6;
        params.seed = 3;
        OptResult result = optimize(problem, params);
        CHECK(std::isfinite(result.best_cost));
        CHECK(result.best_cost < kNanCost);
        CHECK(result.best_point[0] <= 0.0);
    }
    SUBCASE("invalid setups are rejected") {
        OptProblem problem{sphere, square_bounds(-1, 1, 2), 300};
        TcacsParams params;
        params.n_ants = 1;
        CHECK_THROWS_AS(optimize(problem, params), std::invalid_argument);
        params = TcacsParams{};
        problem.max_evaluations = 5;  // below one iteration
        CHECK_THROWS_AS(optimize(problem, params), std::invalid_argument);
        problem.max_evaluations = 300;
        problem.bounds[0] = {1.0, 1.0};
        CHECK_THROWS_AS(optimize(problem, params), std::invalid_argument);
    }
}

TEST_CASE("tuning run beats a 5x5x5 grid scan of the bounds") {
    ScenarioConfig cfg = setup_config(3);
    cfg.seed = 2025;

    auto objective = [&cfg](const std::vector<double>& x) {
        return evaluate_objective({x[0], x[1], x[2]}, cfg);
    };

    std::vector<Interval> bounds = {{0.001, 1.0}, {0.01, 5.0}, {0.1, 10.0}};
    OptProblem problem{objective, bounds, 300};
    TcacsParams params;
    params.seed = 2025;
    OptResult result = optimize(problem, params);

    double grid_best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            for (int c = 0; c < 5; ++c) {
                std::vector<double> p = {
                    bounds[0].lo + a * bounds[0].extent() / 4.0,
                    bounds[1].lo + b * bounds[1].extent() / 4.0,
                    bounds[2].lo + c * bounds[2].extent() / 4.0,
                };
                grid_best = std::min(grid_best, objective(p));
            }
    CHECK(result.best_cost <= grid_best);
}
