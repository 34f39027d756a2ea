#include "tempodisc/impatience.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace tempodisc {

namespace {

constexpr double kDegenerateSlope = 1e-12;

AnalyticMeasure constant(double v) { return {MeasureStatus::Constant, v}; }
AnalyticMeasure not_constant() { return {MeasureStatus::NotConstant, 0.0}; }
AnalyticMeasure not_defined() { return {MeasureStatus::NotDefined, 0.0}; }

// Measures for one coordinate given its decay shape. An exponential shape
// e^{-k c} has lambda = k everywhere; a power shape c^a has mu = 1 - a.
// Degenerate decay (k = 0 or a = 0) leaves ln F independent of the
// coordinate, so the ratio of derivatives is undefined.
struct CoordinateMeasures {
    AnalyticMeasure lambda, mu;
};

CoordinateMeasures exponential_coordinate(double k) {
    if (k == 0.0) return {not_defined(), not_defined()};
    return {constant(k), not_constant()};
}

CoordinateMeasures power_coordinate(double a) {
    if (a == 0.0) return {not_defined(), not_defined()};
    return {not_constant(), constant(1.0 - a)};
}

// T-part of the CADI integral (1-e^{-gamma T})/gamma: the log-derivatives in
// T are those of e^{-gamma T}, so lambda_2 = gamma including gamma = 0, where
// the surface is log-linear in T and both T-measures vanish.
CoordinateMeasures cadi_interval_coordinate(double gamma) {
    if (gamma == 0.0) return {constant(0.0), constant(0.0)};
    return {constant(gamma), not_constant()};
}

// T-part of the CRDI integral T^{beta+1}/(beta+1): log-derivatives in T are
// those of T^beta, so mu_2 = -beta; beta = 0 is again log-linear.
CoordinateMeasures crdi_interval_coordinate(double beta) {
    if (beta == 0.0) return {constant(0.0), constant(0.0)};
    return {not_constant(), constant(-beta)};
}

double effective_step(double base, double coordinate) {
    double h = std::max(base, 1e-4 * std::abs(coordinate));
    if (coordinate > 0.0) h = std::min(h, coordinate / 4.0);
    return h;
}

// lambda estimate along one axis by second-order central differences.
std::optional<double> fd_lambda(const std::function<double(double)>& g, double c, double h) {
    const double gp = g(c + h);
    const double g0 = g(c);
    const double gm = g(c - h);
    const double d1 = (gp - gm) / (2.0 * h);
    if (std::abs(d1) < kDegenerateSlope) return std::nullopt;
    const double d2 = (gp - 2.0 * g0 + gm) / (h * h);
    return -d2 / d1;
}

std::optional<double> fd_lambda_scheme(const std::function<double(double)>& g, double c,
                                       FdScheme scheme) {
    const double h = effective_step(scheme.step, c);
    auto est = fd_lambda(g, c, h);
    if (!scheme.richardson || !est) return est;
    auto half = fd_lambda(g, c, h / 2.0);
    if (!half) return est;
    // both estimates carry O(h^2) error; eliminate the leading term
    return (4.0 * *half - *est) / 3.0;
}

} // namespace

PrelecMeasures analytic_measures(const DiscountModel& model) {
    PrelecMeasures out;
    out.theory_warning = !validate(model).theory_valid;

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CadiCadi>) {
                auto tpart = exponential_coordinate(m.delta);
                auto Tpart = cadi_interval_coordinate(m.gamma);
                out.lambda1 = tpart.lambda;
                out.mu1 = tpart.mu;
                out.lambda2 = Tpart.lambda;
                out.mu2 = Tpart.mu;
            } else if constexpr (std::is_same_v<M, CrdiCrdi>) {
                auto tpart = power_coordinate(m.alpha);
                auto Tpart = crdi_interval_coordinate(m.beta);
                out.lambda1 = tpart.lambda;
                out.mu1 = tpart.mu;
                out.lambda2 = Tpart.lambda;
                out.mu2 = Tpart.mu;
            } else if constexpr (std::is_same_v<M, CadiCrdi>) {
                auto tpart = exponential_coordinate(m.delta);
                auto Tpart = crdi_interval_coordinate(m.beta);
                out.lambda1 = tpart.lambda;
                out.mu1 = tpart.mu;
                out.lambda2 = Tpart.lambda;
                out.mu2 = Tpart.mu;
            } else if constexpr (std::is_same_v<M, CrdiCadi>) {
                auto tpart = power_coordinate(m.alpha);
                auto Tpart = cadi_interval_coordinate(m.gamma);
                out.lambda1 = tpart.lambda;
                out.mu1 = tpart.mu;
                out.lambda2 = Tpart.lambda;
                out.mu2 = Tpart.mu;
            } else if constexpr (std::is_same_v<M, Hyperbolic>) {
                // ln F is a difference of shifted logarithms; every measure
                // depends on (t,T).
                out.lambda1 = not_constant();
                out.lambda2 = not_constant();
                out.mu1 = not_constant();
                out.mu2 = not_constant();
            } else {
                // no t-dependence; log-linear in T
                out.lambda1 = not_defined();
                out.mu1 = not_defined();
                out.lambda2 = constant(0.0);
                out.mu2 = constant(0.0);
            }
        },
        model);
    return out;
}

LogSurface log_surface(const DiscountModel& model, EpsilonPolicy eps) {
    return {[model, eps](double t, double T) { return log_evaluate(model, {t, T}, eps); }};
}

LogSurface log_surface(Surface f) {
    return {[f = std::move(f)](double t, double T) {
        const double v = f(t, T);
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("surface must be positive and finite over the stencil");
        return std::log(v);
    }};
}

PointMeasures numeric_measures(const LogSurface& log_f, TimePoint at, FdScheme scheme) {
    PointMeasures out;
    auto along_t = [&](double t) { return log_f(t, at.T); };
    auto along_T = [&](double T) { return log_f(at.t, T); };
    if (auto l1 = fd_lambda_scheme(along_t, at.t, scheme)) {
        out.lambda1 = *l1;
        out.mu1 = at.t * *l1;
    }
    if (auto l2 = fd_lambda_scheme(along_T, at.T, scheme)) {
        out.lambda2 = *l2;
        out.mu2 = at.T * *l2;
    }
    return out;
}

PointMeasures numeric_measures(const Surface& f, TimePoint at, FdScheme scheme) {
    return numeric_measures(log_surface(f), at, scheme);
}

double numeric_measure(const LogSurface& log_f, MeasureKind kind, TimePoint at, FdScheme scheme) {
    const PointMeasures m = numeric_measures(log_f, at, scheme);
    const std::optional<double>* slot = nullptr;
    switch (kind) {
        case MeasureKind::Lambda1: slot = &m.lambda1; break;
        case MeasureKind::Lambda2: slot = &m.lambda2; break;
        case MeasureKind::Mu1: slot = &m.mu1; break;
        case MeasureKind::Mu2: slot = &m.mu2; break;
    }
    if (!slot->has_value())
        throw DegenerateDerivativeError("first log-derivative below 1e-12 at stencil center");
    return slot->value();
}

std::vector<TimePoint> rectangular_grid(double t_min, double t_max, double T_min, double T_max,
                                        int n) {
    if (n < 2) throw DomainError("grid needs n >= 2");
    std::vector<TimePoint> grid;
    grid.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double t = t_min + (t_max - t_min) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double T = T_min + (T_max - T_min) * j / (n - 1);
            grid.push_back({t, T});
        }
    }
    return grid;
}

ConstancyReport constancy_scan(const DiscountModel& model, std::span<const TimePoint> grid,
                               FdScheme scheme, ConstancyTolerances tol, EpsilonPolicy eps) {
    if (grid.empty()) throw EmptyGridError("constancy scan needs a nonempty grid");

    ConstancyReport report;
    const PrelecMeasures analytic = analytic_measures(model);
    report.lambda1.analytic = analytic.lambda1;
    report.lambda2.analytic = analytic.lambda2;
    report.mu1.analytic = analytic.mu1;
    report.mu2.analytic = analytic.mu2;

    const LogSurface f = log_surface(model, eps);

    auto accumulate = [](MeasureScan& scan, std::optional<double> estimate) {
        if (!estimate) return;
        if (scan.points == 0) {
            scan.numeric_min = scan.numeric_max = *estimate;
        } else {
            scan.numeric_min = std::min(scan.numeric_min, *estimate);
            scan.numeric_max = std::max(scan.numeric_max, *estimate);
        }
        if (scan.analytic.status == MeasureStatus::Constant)
            scan.max_abs_dev = std::max(scan.max_abs_dev, std::abs(*estimate - scan.analytic.value));
        ++scan.points;
    };

    for (const TimePoint& p : grid) {
        PointMeasures m;
        try {
            m = numeric_measures(f, p, scheme);
        } catch (const Error&) {
            ++report.points_failed;
            continue;
        }
        ++report.points_evaluated;
        accumulate(report.lambda1, m.lambda1);
        accumulate(report.lambda2, m.lambda2);
        accumulate(report.mu1, m.mu1);
        accumulate(report.mu2, m.mu2);
    }

    auto finalize = [&](MeasureScan& scan, double tolerance) {
        if (scan.points > 0) {
            const double mag = std::max(std::abs(scan.numeric_max), std::abs(scan.numeric_min));
            scan.relative_range = mag > 0.0 ? (scan.numeric_max - scan.numeric_min) / mag : 0.0;
        }
        if (scan.analytic.status == MeasureStatus::Constant)
            scan.constant = scan.points > 0 && scan.max_abs_dev < tolerance;
        else
            scan.constant = false;
    };
    finalize(report.lambda1, tol.lambda);
    finalize(report.lambda2, tol.lambda);
    finalize(report.mu1, tol.mu);
    finalize(report.mu2, tol.mu);

    auto ok = [](const MeasureScan& scan) {
        return scan.analytic.status != MeasureStatus::Constant || scan.constant;
    };
    report.pass = report.points_evaluated > 0 && ok(report.lambda1) && ok(report.lambda2) &&
                  ok(report.mu1) && ok(report.mu2);
    return report;
}

namespace {

const char* status_name(MeasureStatus s) {
    switch (s) {
        case MeasureStatus::Constant: return "constant";
        case MeasureStatus::NotConstant: return "not-constant";
        case MeasureStatus::NotDefined: return "not-defined";
    }
    return "?";
}

nlohmann::json scan_json(const MeasureScan& scan) {
    nlohmann::json j{{"analyticStatus", status_name(scan.analytic.status)},
                     {"constant", scan.constant},
                     {"points", scan.points}};
    if (scan.analytic.status == MeasureStatus::Constant) {
        j["analytic"] = scan.analytic.value;
        j["maxAbsDev"] = scan.max_abs_dev;
    }
    if (scan.points > 0) {
        j["numericMin"] = scan.numeric_min;
        j["numericMax"] = scan.numeric_max;
        j["relativeRange"] = scan.relative_range;
    }
    return j;
}

} // namespace

void to_json(nlohmann::json& j, const ConstancyReport& report) {
    j = nlohmann::json{{"lambda1", scan_json(report.lambda1)},
                       {"lambda2", scan_json(report.lambda2)},
                       {"mu1", scan_json(report.mu1)},
                       {"mu2", scan_json(report.mu2)},
                       {"pass", report.pass},
                       {"pointsEvaluated", report.points_evaluated},
                       {"pointsFailed", report.points_failed}};
}

} // namespace tempodisc
