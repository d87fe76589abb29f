#include "aes/tcacs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aes {

namespace {

constexpr double kRouletteDelta = 1e-12;
constexpr double kSigmaFloorFraction = 1e-6;
constexpr double kAxisScaleFloor = 0.1;

double clamp_to(double v, const Interval& b) { return std::clamp(v, b.lo, b.hi); }

double bounds_diagonal(const std::vector<Interval>& bounds) {
    double sq = 0.0;
    for (const Interval& b : bounds) sq += b.extent() * b.extent();
    return std::sqrt(sq);
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double sq = 0.0;
    for (size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sq);
}

bool inside_any_ball(const std::vector<double>& p, const std::deque<TabuBall>& tabu) {
    for (const TabuBall& ball : tabu)
        if (distance(p, ball.center) < ball.radius) return true;
    return false;
}

/// Push a point out of the first ball that contains it, along the ray from
/// the ball center, then clamp back to the bounds. Accepted as-is afterwards.
std::vector<double> project_to_surface(std::vector<double> p, const std::deque<TabuBall>& tabu,
                                       const std::vector<Interval>& bounds, SplitMix64& rng) {
    for (const TabuBall& ball : tabu) {
        double d = distance(p, ball.center);
        if (d >= ball.radius) continue;
        std::vector<double> dir(p.size());
        if (d > 0.0) {
            for (size_t i = 0; i < p.size(); ++i) dir[i] = (p[i] - ball.center[i]) / d;
        } else {
            double norm_sq = 0.0;
            for (double& c : dir) {
                c = rng.normal();
                norm_sq += c * c;
            }
            double norm = std::sqrt(std::max(norm_sq, 1e-300));
            for (double& c : dir) c /= norm;
        }
        for (size_t i = 0; i < p.size(); ++i)
            p[i] = clamp_to(ball.center[i] + ball.radius * dir[i], bounds[i]);
        break;
    }
    return p;
}

std::vector<double> ant_weights(const std::vector<EvaluatedPoint>& ants, double best_cost,
                                WeightingStrategy weighting) {
    const size_t n = ants.size();
    std::vector<double> w(n, 0.0);
    if (weighting == WeightingStrategy::roulette) {
        for (size_t a = 0; a < n; ++a) w[a] = 1.0 / (ants[a].cost - best_cost + kRouletteDelta);
    } else {
        // Linear rank weights: best ant gets n, worst gets 1.
        std::vector<size_t> order(n);
        for (size_t a = 0; a < n; ++a) order[a] = a;
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t l, size_t r) { return ants[l].cost < ants[r].cost; });
        for (size_t rank = 0; rank < n; ++rank)
            w[order[rank]] = static_cast<double>(n - rank);
    }
    return w;
}

}  // namespace

void OptProblem::validate(int n_ants) const {
    if (!objective) throw std::invalid_argument("optimizer needs an objective");
    if (bounds.empty()) throw std::invalid_argument("optimizer needs at least one dimension");
    for (const Interval& b : bounds)
        if (!(b.lo < b.hi)) throw std::invalid_argument("bounds need lo < hi per dimension");
    if (max_evaluations < n_ants)
        throw std::invalid_argument("evaluation budget must cover at least one iteration");
}

void TcacsParams::validate() const {
    if (n_ants < 2) throw std::invalid_argument("n_ants must be >= 2");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0, 1]");
    if (!(pca_factor >= 1.0)) throw std::invalid_argument("pca factor must be >= 1");
    if (!(tabu_radius_init > 0.0)) throw std::invalid_argument("tabu radius must be > 0");
    if (tabu_capacity < 0) throw std::invalid_argument("tabu capacity must be >= 0");
    if (resample_retries < 0) throw std::invalid_argument("retry cap must be >= 0");
}

TcacsState make_initial_state(const std::vector<Interval>& bounds) {
    const int d = static_cast<int>(bounds.size());
    TcacsState state;
    state.sigma.resize(bounds.size());
    for (size_t j = 0; j < bounds.size(); ++j) state.sigma[j] = 0.5 * bounds[j].extent();
    state.axes = Eigen::MatrixXd::Identity(d, d);
    state.axis_scale.assign(bounds.size(), 1.0);
    return state;
}

std::vector<std::vector<double>> sample_ants(const TcacsState& state, const TcacsParams& params,
                                             const std::vector<Interval>& bounds,
                                             SplitMix64& rng) {
    const size_t d = bounds.size();
    std::vector<std::vector<double>> ants;
    ants.reserve(static_cast<size_t>(params.n_ants));

    if (state.iteration == 0) {
        for (int a = 0; a < params.n_ants; ++a) {
            std::vector<double> p(d);
            for (size_t j = 0; j < d; ++j)
                p[j] = bounds[j].lo + rng.next_double() * bounds[j].extent();
            ants.push_back(std::move(p));
        }
        return ants;
    }

    // Std along PCA axis j: the per-dimension pheromone widths projected onto
    // the axis, then stretched by the axis variance-ratio scale.
    std::vector<double> axis_sigma(d, 0.0);
    for (size_t j = 0; j < d; ++j) {
        double sq = 0.0;
        for (size_t i = 0; i < d; ++i) {
            double contrib = state.sigma[i] * state.axes(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(j));
            sq += contrib * contrib;
        }
        axis_sigma[j] = std::sqrt(sq) * state.axis_scale[j];
    }

    for (int a = 0; a < params.n_ants; ++a) {
        std::vector<double> candidate(d);
        bool accepted = false;
        for (int attempt = 0; attempt <= params.resample_retries && !accepted; ++attempt) {
            // Axis-frame draws, rotated into the original frame.
            std::vector<double> z(d);
            for (size_t ax = 0; ax < d; ++ax) z[ax] = rng.normal() * axis_sigma[ax];
            for (size_t j = 0; j < d; ++j) {
                double offset = 0.0;
                for (size_t ax = 0; ax < d; ++ax)
                    offset += state.axes(static_cast<Eigen::Index>(j),
                                         static_cast<Eigen::Index>(ax)) *
                              z[ax];
                candidate[j] = clamp_to(state.best_point[j] + offset, bounds[j]);
            }
            accepted = !inside_any_ball(candidate, state.tabu);
        }
        if (!accepted) candidate = project_to_surface(std::move(candidate), state.tabu, bounds, rng);
        ants.push_back(std::move(candidate));
    }
    return ants;
}

void update_pheromone(TcacsState& state, const std::vector<EvaluatedPoint>& ants, double gamma,
                      const std::vector<Interval>& bounds, WeightingStrategy weighting) {
    if (ants.empty()) throw std::invalid_argument("update_pheromone needs evaluated ants");

    for (const EvaluatedPoint& ant : ants) {
        if (ant.cost < state.best_cost) {
            state.best_cost = ant.cost;
            state.best_point = ant.point;
        }
    }

    std::vector<double> weights = ant_weights(ants, state.best_cost, weighting);

    for (size_t j = 0; j < bounds.size(); ++j) {
        double weighted_sq = 0.0;
        double weight_sum = 0.0;
        for (size_t a = 0; a < ants.size(); ++a) {
            // The incumbent (and exact cost ties) would dominate the roulette
            // weights at zero distance and collapse the spread; skip them.
            if (ants[a].cost - state.best_cost <= kRouletteDelta) continue;
            double dist = ants[a].point[j] - state.best_point[j];
            weighted_sq += weights[a] * dist * dist;
            weight_sum += weights[a];
        }
        double floor = kSigmaFloorFraction * bounds[j].extent();
        state.sigma[j] =
            weight_sum > 0.0 ? std::max(gamma * std::sqrt(weighted_sq / weight_sum), floor)
                             : floor;
    }
}

void update_tabu(TcacsState& state, const std::vector<EvaluatedPoint>& ants,
                 const TcacsParams& params, const std::vector<Interval>& bounds) {
    for (TabuBall& ball : state.tabu) ball.radius *= params.gamma;

    if (!ants.empty() && params.tabu_capacity > 0) {
        const EvaluatedPoint* worst = &ants.front();
        for (const EvaluatedPoint& ant : ants)
            if (ant.cost > worst->cost) worst = &ant;

        double radius = params.tabu_radius_init * bounds_diagonal(bounds);
        if (!state.best_point.empty()) {
            // The incumbent must stay outside every ball.
            double to_best = distance(worst->point, state.best_point);
            radius = std::min(radius, 0.999 * to_best);
        }
        if (radius > 0.0) {
            state.tabu.push_back({worst->point, radius});
            while (static_cast<int>(state.tabu.size()) > params.tabu_capacity)
                state.tabu.pop_front();
        }
    }

    const int capacity =
        params.promising_capacity > 0 ? params.promising_capacity : 2 * params.n_ants;
    state.promising.insert(state.promising.end(), ants.begin(), ants.end());
    std::stable_sort(state.promising.begin(), state.promising.end(),
                     [](const EvaluatedPoint& a, const EvaluatedPoint& b) {
                         return a.cost < b.cost;
                     });
    if (static_cast<int>(state.promising.size()) > capacity)
        state.promising.resize(static_cast<size_t>(capacity));
}

PcaFrame pca_transform(const std::vector<EvaluatedPoint>& promising, double m) {
    if (promising.empty()) throw std::invalid_argument("pca_transform needs points");
    const int d = static_cast<int>(promising.front().point.size());
    PcaFrame identity{Eigen::MatrixXd::Identity(d, d), std::vector<double>(static_cast<size_t>(d), 1.0)};
    if (promising.size() < 2) return identity;

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (const EvaluatedPoint& p : promising)
        for (int j = 0; j < d; ++j) mean(j) += p.point[static_cast<size_t>(j)];
    mean /= static_cast<double>(promising.size());

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (const EvaluatedPoint& p : promising) {
        Eigen::VectorXd delta(d);
        for (int j = 0; j < d; ++j) delta(j) = p.point[static_cast<size_t>(j)] - mean(j);
        cov += delta * delta.transpose();
    }
    cov /= static_cast<double>(promising.size() - 1);

    if (!cov.allFinite()) return identity;
    double trace = cov.trace();
    if (!(trace > 0.0)) return identity;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) return identity;

    PcaFrame frame;
    frame.axes = solver.eigenvectors();
    frame.axis_scale.resize(static_cast<size_t>(d));
    double mean_var = trace / static_cast<double>(d);
    for (int j = 0; j < d; ++j) {
        double ratio = std::max(solver.eigenvalues()(j), 0.0) / mean_var;
        frame.axis_scale[static_cast<size_t>(j)] =
            std::max(std::pow(ratio, 1.0 / m), kAxisScaleFloor);
    }
    return frame;
}

OptResult optimize(const OptProblem& problem, const TcacsParams& params) {
    params.validate();
    problem.validate(params.n_ants);

    TcacsState state = make_initial_state(problem.bounds);
    SplitMix64 rng = derive_stream(params.seed, kDomainOptimizer, 0, 0);

    OptResult result;
    while (state.evaluations < problem.max_evaluations) {
        std::vector<std::vector<double>> points = sample_ants(state, params, problem.bounds, rng);
        const int remaining = problem.max_evaluations - state.evaluations;
        const int count = std::min<int>(static_cast<int>(points.size()), remaining);

        std::vector<EvaluatedPoint> ants(static_cast<size_t>(count));
#pragma omp parallel for schedule(dynamic)
        for (int a = 0; a < count; ++a) {
            double cost = problem.objective(points[static_cast<size_t>(a)]);
            if (std::isnan(cost)) cost = kNanCost;
            ants[static_cast<size_t>(a)] = {std::move(points[static_cast<size_t>(a)]), cost};
        }
        state.evaluations += count;
        state.population = ants;

        update_pheromone(state, ants, params.gamma, problem.bounds, params.weighting);
        update_tabu(state, ants, params, problem.bounds);
        PcaFrame frame = pca_transform(state.promising, params.pca_factor);
        state.axes = std::move(frame.axes);
        state.axis_scale = std::move(frame.axis_scale);
        ++state.iteration;

        result.history.push_back({state.iteration, state.evaluations, state.best_cost,
                                  state.sigma, static_cast<int>(state.tabu.size())});
    }

    result.best_point = state.best_point;
    result.best_cost = state.best_cost;
    return result;
}

}  // namespace aes
