#ifndef TEMPODISC_IMPATIENCE_HPP
#define TEMPODISC_IMPATIENCE_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tempodisc/discount.hpp"

namespace tempodisc {

// The impatience measures of a two-variable discount surface: a lambda is
// the convexity of ln F against its own slope in one coordinate,
//   lambda_1 = -(d2 ln F / dt2) / (d ln F / dt),   lambda_2 analogous in T,
// and a mu is the same ratio scaled by the coordinate (mu_1 = t lambda_1,
// mu_2 = T lambda_2). Exponential decay in a coordinate makes the lambda
// there constant; power-law decay makes the mu constant.

enum class MeasureStatus {
    Constant,    // equal to `value` everywhere on the domain
    NotConstant, // well defined but varies with (t,T)
    NotDefined   // degenerate (no dependence on that coordinate)
};

struct AnalyticMeasure {
    MeasureStatus status = MeasureStatus::NotDefined;
    double value = 0.0; // meaningful only when status == Constant
};

struct PrelecMeasures {
    AnalyticMeasure lambda1; // per day, in t
    AnalyticMeasure lambda2; // per day, in T
    AnalyticMeasure mu1;     // dimensionless, in t
    AnalyticMeasure mu2;     // dimensionless, in T
    bool theory_warning = false; // set when the model violates its sign constraints
};

/// Closed-form measures per family. Theory-violating parameter sets get the
/// same formulas with `theory_warning` set.
PrelecMeasures analytic_measures(const DiscountModel& model);

/// Central-difference stencil on ln F. The effective step at coordinate c is
/// min(max(step, 1e-4 |c|), c/4): relative growth for large coordinates, a
/// cap keeping the stencil interior near zero. Richardson halves the step
/// once and extrapolates the two estimates.
struct FdScheme {
    double step = 0.05; // days
    bool richardson = false;
};

/// Black-box discount surface (t,T) -> F. Must be positive wherever probed.
using Surface = std::function<double(double, double)>;

/// A surface in log space, (t,T) -> ln F. Distinct type: everything
/// downstream differentiates and compares in ln F, where ratios of strongly
/// discounted values stay well conditioned.
struct LogSurface {
    std::function<double(double, double)> fn;
    double operator()(double t, double T) const { return fn(t, T); }
};

LogSurface log_surface(const DiscountModel& model, EpsilonPolicy eps = {});
LogSurface log_surface(Surface f); // wraps with log(); throws DomainError on F <= 0

/// Point estimates of all four measures. A coordinate whose first
/// log-derivative is below 1e-12 in magnitude yields nullopt for its two
/// measures instead of dividing by noise.
struct PointMeasures {
    std::optional<double> lambda1, lambda2, mu1, mu2;
};

PointMeasures numeric_measures(const LogSurface& log_f, TimePoint at, FdScheme scheme = {});
PointMeasures numeric_measures(const Surface& f, TimePoint at, FdScheme scheme = {});

enum class MeasureKind { Lambda1, Lambda2, Mu1, Mu2 };

/// Single-measure variant; throws DegenerateDerivativeError where the bulk
/// form would return nullopt.
double numeric_measure(const LogSurface& log_f, MeasureKind kind, TimePoint at,
                       FdScheme scheme = {});

struct ConstancyTolerances {
    double lambda = 1e-5; // absolute, per day
    double mu = 1e-4;     // absolute, dimensionless
};

/// Scan outcome for one measure.
struct MeasureScan {
    AnalyticMeasure analytic;
    double numeric_min = 0.0;
    double numeric_max = 0.0;
    double max_abs_dev = 0.0;    // vs analytic constant; 0 when not applicable
    double relative_range = 0.0; // (max-min)/max(|max|,|min|)
    bool constant = false;       // analytic constant reproduced within tolerance
    int points = 0;              // points contributing a numeric value
};

struct ConstancyReport {
    MeasureScan lambda1, lambda2, mu1, mu2;
    bool pass = false; // every analytically constant measure within tolerance
    int points_evaluated = 0;
    int points_failed = 0; // degenerate stencils, recorded not fatal
};

/// Compares finite-difference measures against the family's closed-form
/// constants over a grid of interior points. Throws EmptyGridError.
ConstancyReport constancy_scan(const DiscountModel& model, std::span<const TimePoint> grid,
                               FdScheme scheme = {}, ConstancyTolerances tol = {},
                               EpsilonPolicy eps = {});

/// Rectangular grid helper: n x n points with coordinates evenly spaced over
/// [t_min,t_max] x [T_min,T_max].
std::vector<TimePoint> rectangular_grid(double t_min, double t_max, double T_min, double T_max,
                                        int n);

void to_json(nlohmann::json& j, const ConstancyReport& report);

} // namespace tempodisc

#endif // TEMPODISC_IMPATIENCE_HPP
