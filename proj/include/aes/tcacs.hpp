#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "aes/rng.hpp"

namespace aes {

// Tabu Continuous Ant Colony System: a CACS-style sampler (per-dimension
// normal "pheromone" distributions around the incumbent best) hybridized with
// tabu-search exclusion balls around poor solutions, plus a PCA rotation of
// the sampling frame derived from an archive of elite points.

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double extent() const { return hi - lo; }
};

struct OptProblem {
    std::function<double(const std::vector<double>&)> objective;
    std::vector<Interval> bounds;
    int max_evaluations = 300;

    int dimension() const { return static_cast<int>(bounds.size()); }
    /// Throws std::invalid_argument on invalid bounds or budget.
    void validate(int n_ants) const;
};

enum class WeightingStrategy { roulette, rank };

struct TcacsParams {
    int n_ants = 15;
    double gamma = 0.5;          // weighting factor: sigma scale and tabu shrink
    double pca_factor = 2.0;     // m; axis scales use the m-th root of variance ratios
    WeightingStrategy weighting = WeightingStrategy::roulette;
    double tabu_radius_init = 0.05;  // fraction of the bounds-box diagonal
    int tabu_capacity = 10;
    int promising_capacity = 0;      // 0 means 2 * n_ants
    int resample_retries = 20;       // per ant, before surface projection
    uint64_t seed = 0;

    void validate() const;
};

struct EvaluatedPoint {
    std::vector<double> point;
    double cost = std::numeric_limits<double>::infinity();
};

struct TabuBall {
    std::vector<double> center;
    double radius = 0.0;
};

struct TcacsState {
    std::vector<double> best_point;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> sigma;              // per-dimension pheromone std
    std::vector<EvaluatedPoint> population; // last evaluated iteration
    std::deque<TabuBall> tabu;              // FIFO, capacity-bounded
    std::vector<EvaluatedPoint> promising;  // elite archive, cost-ascending
    Eigen::MatrixXd axes;                   // orthonormal columns (PCA frame)
    std::vector<double> axis_scale;         // per-axis std multiplier
    int iteration = 0;
    int evaluations = 0;
};

struct HistoryEntry {
    int iteration = 0;
    int evaluations = 0;
    double best_cost = 0.0;
    std::vector<double> sigma;
    int tabu_count = 0;
};

struct OptResult {
    std::vector<double> best_point;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<HistoryEntry> history;
};

/// Cost substituted when the objective returns NaN.
inline constexpr double kNanCost = 1e9;

/// Initial state for a problem: half-extent sigma, identity frame.
TcacsState make_initial_state(const std::vector<Interval>& bounds);

/// Candidate points for one iteration. First iteration: uniform over the
/// bounds. Later: normal around the best point in the PCA frame, clamped to
/// the bounds; candidates inside a tabu ball are resampled up to the retry
/// cap and then projected onto the ball surface.
std::vector<std::vector<double>> sample_ants(const TcacsState& state, const TcacsParams& params,
                                             const std::vector<Interval>& bounds,
                                             SplitMix64& rng);

/// Move the incumbent to the iteration minimum and refresh sigma as the
/// gamma-scaled weighted RMS distance of the ants to the incumbent
/// (per dimension). Ants whose cost ties the incumbent are excluded from the
/// spread estimate; sigma is floored at 1e-6 of each dimension extent.
void update_pheromone(TcacsState& state, const std::vector<EvaluatedPoint>& ants, double gamma,
                      const std::vector<Interval>& bounds,
                      WeightingStrategy weighting = WeightingStrategy::roulette);

/// Place a tabu ball on the iteration's worst ant (radius tabu_radius_init
/// times the bounds diagonal), shrink existing balls by gamma, evict beyond
/// capacity, and merge the iteration into the promising archive. The ball
/// radius is capped so the incumbent never lies inside a ball.
void update_tabu(TcacsState& state, const std::vector<EvaluatedPoint>& ants,
                 const TcacsParams& params, const std::vector<Interval>& bounds);

struct PcaFrame {
    Eigen::MatrixXd axes;            // orthonormal columns
    std::vector<double> axis_scale;  // m-th root of variance ratio per axis
};

/// Principal axes of the promising-point cloud. Fewer than two points, or a
/// degenerate covariance, yields the identity frame with unit scales.
PcaFrame pca_transform(const std::vector<EvaluatedPoint>& promising, double m);

/// Run the full loop until the evaluation budget is exhausted.
/// Deterministic for a fixed params.seed.
OptResult optimize(const OptProblem& problem, const TcacsParams& params);

}  // namespace aes
