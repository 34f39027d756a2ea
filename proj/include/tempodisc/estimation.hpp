#ifndef TEMPODISC_ESTIMATION_HPP
#define TEMPODISC_ESTIMATION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tempodisc/choice.hpp"
#include "tempodisc/discount.hpp"

namespace tempodisc {

// Nonlinear least squares on binary choices: minimize sum_i (c_i - P_i)^2
// where P_i is the logistic choice probability under the candidate model.
// Damped (Levenberg-Marquardt) steps on a finite-difference Jacobian,
// multi-start over seeded draws from plausible parameter ranges because the
// euro-scale logistic saturates and leaves plateaus in the objective.

enum class BoundsMode {
    Unconstrained, // fitted parameters may violate theory constraints (flagged)
    TheoryConstrained // internal reparameterization keeps r,delta > 0, alpha < 0, beta > -1
};

struct FitSpec {
    Family family = Family::CadiCadi;
    std::optional<std::vector<double>> initial; // natural-space start; multi-start adds more
    BoundsMode bounds = BoundsMode::Unconstrained;
    EpsilonPolicy eps{};
    int max_iterations = 500;
    double gradient_tolerance = 1e-10; // on the normal-equations gradient J^T r
    double step_tolerance = 1e-12;     // relative parameter step
    int multistart = 8;
    std::uint64_t seed = 42;
};

struct FitResult {
    Family family = Family::CadiCadi;
    std::vector<std::string> parameter_names;
    std::vector<double> estimates;
    std::vector<double> robust_se; // HC1 sandwich
    double sse = 0.0;
    std::optional<double> r_squared;          // nullopt when SST = 0
    std::optional<double> adjusted_r_squared; // nullopt when n - p - 1 <= 0
    std::size_t observations = 0;
    int iterations = 0; // of the winning start
    bool converged = false;
    bool jacobian_flagged = false; // singular/ill-conditioned normal equations met
    ValidityReport validity;       // of the fitted model (intercepts, for covariate fits)
    std::vector<double> residuals;
    std::vector<double> start_sse; // best SSE reached from each start, in start order
};

/// Fit one family to choice data. Data should already be consistency
/// screened. Throws EmptyDataError.
FitResult fit(std::span<const ChoiceRecord> data, const FitSpec& spec);

/// Covariate values per subject, ordered as CovariateSpec::names.
using ProfileTable = std::map<std::string, std::vector<double>, std::less<>>;

struct CovariateSpec {
    std::vector<std::string> names;
    // loadings[param][covariate]: which covariates each structural parameter
    // depends on; empty means every parameter loads on all of them
    std::vector<std::vector<bool>> loadings;
};

/// Each structural parameter becomes theta_0 + sum_i theta_i X_i per
/// subject (the sum over its loaded covariates); one least-squares problem
/// over all records. Coefficients are named "r", "r:smoker", ... Always
/// fitted unconstrained: affine links make sign reparameterizations
/// meaningless. Throws MissingProfileError, RankDeficientCovariatesError.
FitResult fit_with_covariates(std::span<const ChoiceRecord> data, const ProfileTable& profiles,
                              const FitSpec& spec, const CovariateSpec& cov);

enum class SeFlavor { HC0, HC1 };

/// Heteroskedasticity-consistent sandwich standard errors
/// (J^T J)^-1 J^T diag(r_i^2) J (J^T J)^-1, scaled by n/(n-p) for HC1.
/// Falls back to HC0 (flagged) when n = p; uses a pseudo-inverse (flagged)
/// when J^T J has condition number above 1e12.
std::vector<double> robust_standard_errors(const std::vector<std::vector<double>>& jacobian,
                                           std::span<const double> residuals,
                                           SeFlavor flavor = SeFlavor::HC1,
                                           bool* flagged = nullptr);

struct GoodnessOfFit {
    std::optional<double> r_squared;
    std::optional<double> adjusted_r_squared;
};

/// R^2 = 1 - SSE/SST against the observed 0/1 outcomes; adjusted version
/// penalized by parameter count. Undefined values are nullopt, not errors.
GoodnessOfFit goodness_of_fit(std::span<const double> residuals,
                              std::span<const double> observed, std::size_t n_params);

/// Central-difference Jacobian of a vector function, step scaled per
/// coordinate: h_j = step_scale * max(1, |theta_j|).
std::vector<std::vector<double>> numeric_jacobian(
    const std::function<std::vector<double>(std::span<const double>)>& fn,
    std::span<const double> theta, double step_scale = 1e-6);

struct ModelComparison {
    std::vector<FitResult> ranked; // best adjusted R^2 first
    std::vector<std::pair<Family, std::string>> failures;
};

/// Fit every spec on the same data and rank by adjusted R^2; ties break by
/// parameter count (fewer wins), then family name. Per-family failures are
/// recorded and the comparison proceeds.
ModelComparison compare_models(std::span<const ChoiceRecord> data,
                               std::span<const FitSpec> specs);

/// Table-2 shape: parameters row-wise, families column-wise, standard errors
/// in parentheses under each estimate.
std::string comparison_table(const ModelComparison& comparison);
std::string comparison_csv(const ModelComparison& comparison);

void to_json(nlohmann::json& j, const FitResult& result);

} // namespace tempodisc

#endif // TEMPODISC_ESTIMATION_HPP
