#include "tempodisc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace tempodisc {

namespace {

double next_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double draw_uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * next_uniform(eng);
}

double draw_log_uniform(std::mt19937_64& eng, double lo, double hi) {
    return std::exp(draw_uniform(eng, std::log(lo), std::log(hi)));
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt with Marquardt diagonal scaling on a numeric Jacobian.

using ResidualFn = std::function<std::vector<double>(std::span<const double>)>;

struct LmOptions {
    int max_iterations = 500;
    double gradient_tolerance = 1e-10;
    double step_tolerance = 1e-12;
};

struct LmOutcome {
    std::vector<double> theta;
    double sse = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    bool singular = false;
};

double sum_of_squares(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

LmOutcome levenberg_marquardt(const ResidualFn& fn, std::vector<double> theta,
                              const LmOptions& opt) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    LmOutcome out;
    const int p = static_cast<int>(theta.size());
    std::vector<double> res = fn(theta);
    const int n = static_cast<int>(res.size());
    double sse = sum_of_squares(res);
    double lambda = 1e-3;

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        out.iterations = iter + 1;
        const auto jac = numeric_jacobian(fn, theta);
        MatrixXd J(n, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) J(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        VectorXd r = Eigen::Map<const VectorXd>(res.data(), n);
        const MatrixXd JtJ = J.transpose() * J;
        const VectorXd g = J.transpose() * r;

        if (g.lpNorm<Eigen::Infinity>() < opt.gradient_tolerance) {
            out.converged = true;
            break;
        }

        VectorXd scale = JtJ.diagonal().cwiseMax(1e-12);
        bool stepped = false;
        while (lambda < 1e14) {
            MatrixXd A = JtJ;
            A.diagonal() += lambda * scale;
            Eigen::LDLT<MatrixXd> solver(A);
            VectorXd delta = solver.solve(-g);
            if (solver.info() != Eigen::Success || !delta.allFinite()) {
                out.singular = true;
                lambda *= 10.0;
                continue;
            }
            std::vector<double> trial(theta);
            for (int j = 0; j < p; ++j) trial[static_cast<std::size_t>(j)] += delta(j);
            std::vector<double> trial_res = fn(trial);
            const double trial_sse = sum_of_squares(trial_res);
            if (std::isfinite(trial_sse) && trial_sse < sse) {
                const double step_norm = delta.norm();
                const double theta_norm =
                    Eigen::Map<const VectorXd>(theta.data(), p).norm();
                theta = std::move(trial);
                res = std::move(trial_res);
                sse = trial_sse;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (step_norm < opt.step_tolerance * (theta_norm + opt.step_tolerance))
                    out.converged = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!stepped || out.converged) {
            // no downhill step at any damping: a (possibly local) minimum
            if (!stepped) out.converged = true;
            break;
        }
    }

    out.theta = std::move(theta);
    out.sse = sse;
    return out;
}

// ---------------------------------------------------------------------------
// Parameter-space transforms for theory-constrained fitting. The optimizer
// always works in an unconstrained internal space; the transform maps it
// into the theory region.

struct ParamTransform {
    std::function<std::vector<double>(std::span<const double>)> to_natural;
    std::function<std::vector<double>(std::span<const double>)> to_internal;
};

enum class ParamKind { Rate, Delta, Gamma, AlphaNeg, BetaAboveMinus1, PositiveRate };

std::vector<ParamKind> param_kinds(Family family) {
    switch (family) {
        case Family::CadiCadi: return {ParamKind::Rate, ParamKind::Delta, ParamKind::Gamma};
        case Family::CrdiCrdi:
            return {ParamKind::Rate, ParamKind::AlphaNeg, ParamKind::BetaAboveMinus1};
        case Family::CadiCrdi:
            return {ParamKind::Rate, ParamKind::Delta, ParamKind::BetaAboveMinus1};
        case Family::CrdiCadi: return {ParamKind::Rate, ParamKind::AlphaNeg, ParamKind::Gamma};
        case Family::Hyperbolic: return {ParamKind::PositiveRate, ParamKind::PositiveRate};
        case Family::Exponential: return {ParamKind::PositiveRate};
    }
    throw DomainError("unknown family tag");
}

ParamTransform make_transform(Family family, BoundsMode mode) {
    if (mode == BoundsMode::Unconstrained) {
        auto identity = [](std::span<const double> v) {
            return std::vector<double>(v.begin(), v.end());
        };
        return {identity, identity};
    }
    const auto kinds = param_kinds(family);
    auto to_natural = [kinds](std::span<const double> u) {
        std::vector<double> v(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            switch (kinds[i]) {
                case ParamKind::Rate:
                case ParamKind::Delta:
                case ParamKind::PositiveRate: v[i] = std::exp(u[i]); break;
                case ParamKind::Gamma: v[i] = u[i]; break;
                case ParamKind::AlphaNeg: v[i] = -std::exp(u[i]); break;
                case ParamKind::BetaAboveMinus1: v[i] = -1.0 + std::exp(u[i]); break;
            }
        }
        return v;
    };
    auto to_internal = [kinds](std::span<const double> v) {
        std::vector<double> u(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            switch (kinds[i]) {
                case ParamKind::Rate:
                case ParamKind::Delta:
                case ParamKind::PositiveRate:
                    if (!(v[i] > 0.0))
                        throw DomainError("constrained fit start requires positive rates");
                    u[i] = std::log(v[i]);
                    break;
                case ParamKind::Gamma: u[i] = v[i]; break;
                case ParamKind::AlphaNeg:
                    if (!(v[i] < 0.0))
                        throw DomainError("constrained fit start requires alpha < 0");
                    u[i] = std::log(-v[i]);
                    break;
                case ParamKind::BetaAboveMinus1:
                    if (!(v[i] > -1.0))
                        throw DomainError("constrained fit start requires beta > -1");
                    u[i] = std::log(v[i] + 1.0);
                    break;
            }
        }
        return u;
    };
    return {std::move(to_natural), std::move(to_internal)};
}

std::vector<double> default_start(Family family) {
    switch (family) {
        case Family::CadiCadi: return {0.01, 0.001, 0.05};
        case Family::CrdiCrdi: return {0.02, -0.2, -0.3};
        case Family::CadiCrdi: return {0.01, 0.001, -0.3};
        case Family::CrdiCadi: return {0.02, -0.2, 0.05};
        case Family::Hyperbolic: return {0.01, 0.01};
        case Family::Exponential: return {0.01};
    }
    throw DomainError("unknown family tag");
}

std::vector<double> draw_start(Family family, BoundsMode mode, std::mt19937_64& eng) {
    std::vector<double> v;
    for (ParamKind kind : param_kinds(family)) {
        switch (kind) {
            case ParamKind::Rate:
            case ParamKind::PositiveRate: v.push_back(draw_log_uniform(eng, 1e-4, 0.2)); break;
            case ParamKind::Delta: v.push_back(draw_log_uniform(eng, 1e-5, 0.05)); break;
            case ParamKind::Gamma: v.push_back(draw_uniform(eng, -0.1, 0.5)); break;
            case ParamKind::AlphaNeg:
                if (mode == BoundsMode::TheoryConstrained)
                    v.push_back(-draw_log_uniform(eng, 1e-3, 1.0));
                else
                    v.push_back(draw_uniform(eng, -1.0, 1.0));
                break;
            case ParamKind::BetaAboveMinus1: v.push_back(draw_uniform(eng, -0.99, 1.0)); break;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Compact residual evaluation: probabilities depend on the distinct
// trade-off items (and covariate rows), not on individual records.

struct CompactData {
    std::vector<Tradeoff> items;          // distinct trade-offs
    std::vector<std::size_t> item_index;  // per record
    std::vector<double> observed;         // per record, 0/1
};

bool same_tradeoff(const Tradeoff& a, const Tradeoff& b) {
    return a.x == b.x && a.y == b.y && a.t == b.t && a.T == b.T;
}

CompactData compact(std::span<const ChoiceRecord> data) {
    CompactData cd;
    for (const ChoiceRecord& rec : data) {
        std::size_t idx = cd.items.size();
        for (std::size_t i = 0; i < cd.items.size(); ++i) {
            if (same_tradeoff(cd.items[i], rec.tradeoff)) {
                idx = i;
                break;
            }
        }
        if (idx == cd.items.size()) cd.items.push_back(rec.tradeoff);
        cd.item_index.push_back(idx);
        cd.observed.push_back(rec.chose_sooner ? 1.0 : 0.0);
    }
    return cd;
}

// Penalty residual when a parameter vector is unevaluable: as if every
// prediction were off by |c| + 1, which no admissible fit can match.
void penalty_residuals(const CompactData& cd, std::vector<double>& out) {
    for (std::size_t i = 0; i < cd.observed.size(); ++i) out[i] = cd.observed[i] + 1.0;
}

double logistic_probability(double z) {
    const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    return std::clamp(p, std::numeric_limits<double>::min(),
                      1.0 - std::numeric_limits<double>::epsilon() / 2.0);
}

ResidualFn plain_residual_fn(const CompactData& cd, Family family, EpsilonPolicy eps) {
    return [&cd, family, eps](std::span<const double> theta) {
        std::vector<double> out(cd.observed.size());
        std::vector<double> probs(cd.items.size());
        try {
            const DiscountModel model = make_model(family, theta);
            for (std::size_t i = 0; i < cd.items.size(); ++i) {
                const Tradeoff& tr = cd.items[i];
                const double f = evaluate(model, {tr.t, tr.T}, eps);
                probs[i] = logistic_probability(tr.x - tr.y * f);
            }
        } catch (const Error&) {
            penalty_residuals(cd, out);
            return out;
        }
        for (std::size_t i = 0; i < cd.observed.size(); ++i)
            out[i] = cd.observed[i] - probs[cd.item_index[i]];
        return out;
    };
}

FitResult finalize_fit(Family family, std::vector<std::string> names, const CompactData& cd,
                       const ResidualFn& natural_fn, std::vector<double> estimates,
                       const LmOutcome& best, std::vector<double> start_sse,
                       const ValidityReport& validity) {
    FitResult out;
    out.family = family;
    out.parameter_names = std::move(names);
    out.estimates = std::move(estimates);
    out.residuals = natural_fn(out.estimates);
    out.sse = sum_of_squares(out.residuals);
    out.observations = cd.observed.size();
    out.iterations = best.iterations;
    out.converged = best.converged;
    out.jacobian_flagged = best.singular;
    out.validity = validity;
    out.start_sse = std::move(start_sse);

    const auto jac = numeric_jacobian(natural_fn, out.estimates);
    bool se_flagged = false;
    out.robust_se = robust_standard_errors(jac, out.residuals, SeFlavor::HC1, &se_flagged);
    out.jacobian_flagged = out.jacobian_flagged || se_flagged;

    const GoodnessOfFit gof = goodness_of_fit(out.residuals, cd.observed, out.estimates.size());
    out.r_squared = gof.r_squared;
    out.adjusted_r_squared = gof.adjusted_r_squared;
    return out;
}

void check_spec(const FitSpec& spec) {
    if (spec.max_iterations < 1 || spec.multistart < 1)
        throw DomainError("fit spec needs max_iterations >= 1 and multistart >= 1");
    if (!(spec.gradient_tolerance > 0.0) || !(spec.step_tolerance > 0.0))
        throw DomainError("fit spec tolerances must be > 0");
}

} // namespace

std::vector<std::vector<double>> numeric_jacobian(
    const std::function<std::vector<double>(std::span<const double>)>& fn,
    std::span<const double> theta, double step_scale) {
    std::vector<double> work(theta.begin(), theta.end());
    const std::size_t p = work.size();
    std::vector<std::vector<double>> jac;
    for (std::size_t j = 0; j < p; ++j) {
        const double h = step_scale * std::max(1.0, std::abs(work[j]));
        const double saved = work[j];
        work[j] = saved + h;
        const std::vector<double> plus = fn(work);
        work[j] = saved - h;
        const std::vector<double> minus = fn(work);
        work[j] = saved;
        if (jac.empty()) jac.assign(plus.size(), std::vector<double>(p, 0.0));
        for (std::size_t i = 0; i < plus.size(); ++i)
            jac[i][j] = (plus[i] - minus[i]) / (2.0 * h);
    }
    return jac;
}

GoodnessOfFit goodness_of_fit(std::span<const double> residuals,
                              std::span<const double> observed, std::size_t n_params) {
    if (residuals.size() != observed.size())
        throw LengthMismatchError("residuals and observed differ in length");
    if (observed.empty()) throw EmptyDataError("goodness of fit needs observations");
    const std::size_t n = observed.size();
    double mean = 0.0;
    for (double c : observed) mean += c;
    mean /= static_cast<double>(n);
    double sst = 0.0;
    for (double c : observed) sst += (c - mean) * (c - mean);
    const double sse = sum_of_squares(residuals);

    GoodnessOfFit out;
    if (sst > 0.0) {
        const double r2 = 1.0 - sse / sst;
        out.r_squared = r2;
        const double dof = static_cast<double>(n) - static_cast<double>(n_params) - 1.0;
        if (dof > 0.0)
            out.adjusted_r_squared = 1.0 - (1.0 - r2) * (static_cast<double>(n) - 1.0) / dof;
    }
    return out;
}

std::vector<double> robust_standard_errors(const std::vector<std::vector<double>>& jacobian,
                                           std::span<const double> residuals, SeFlavor flavor,
                                           bool* flagged) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    if (jacobian.empty()) throw EmptyDataError("robust SEs need a nonempty Jacobian");
    const int n = static_cast<int>(jacobian.size());
    const int p = static_cast<int>(jacobian.front().size());
    if (static_cast<std::size_t>(n) != residuals.size())
        throw LengthMismatchError("Jacobian rows and residuals differ in length");

    MatrixXd J(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) J(i, j) = jacobian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    bool flag = false;
    const MatrixXd JtJ = J.transpose() * J;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(JtJ);
    const VectorXd ev = eig.eigenvalues();
    const double ev_max = ev.maxCoeff();
    const double ev_min = ev.minCoeff();
    if (!(ev_min > 0.0) || ev_max / ev_min > 1e12) flag = true;

    // pseudo-inverse: drop directions below machine-scale of the largest
    VectorXd inv_ev = VectorXd::Zero(p);
    for (int j = 0; j < p; ++j)
        if (ev(j) > ev_max * 1e-12) inv_ev(j) = 1.0 / ev(j);
    const MatrixXd bread = eig.eigenvectors() * inv_ev.asDiagonal() * eig.eigenvectors().transpose();

    MatrixXd meat = MatrixXd::Zero(p, p);
    for (int i = 0; i < n; ++i) {
        const double w = residuals[static_cast<std::size_t>(i)] * residuals[static_cast<std::size_t>(i)];
        meat.noalias() += w * J.row(i).transpose() * J.row(i);
    }

    double scale = 1.0;
    if (flavor == SeFlavor::HC1) {
        if (n > p)
            scale = static_cast<double>(n) / static_cast<double>(n - p);
        else
            flag = true; // dof exhausted; fall back to the unscaled HC0 value
    }

    const MatrixXd cov = scale * bread * meat * bread;
    std::vector<double> se(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) se[static_cast<std::size_t>(j)] = std::sqrt(std::max(cov(j, j), 0.0));
    if (flagged) *flagged = flag;
    return se;
}

FitResult fit(std::span<const ChoiceRecord> data, const FitSpec& spec) {
    if (data.empty()) throw EmptyDataError("fit needs choice records");
    check_spec(spec);

    const CompactData cd = compact(data);
    const ResidualFn natural_fn = plain_residual_fn(cd, spec.family, spec.eps);
    const ParamTransform transform = make_transform(spec.family, spec.bounds);
    const ResidualFn internal_fn = [&](std::span<const double> u) {
        return natural_fn(transform.to_natural(u));
    };

    std::vector<std::vector<double>> starts;
    starts.push_back(spec.initial.value_or(default_start(spec.family)));
    if (starts.front().size() != parameter_count(spec.family))
        throw DomainError("initial vector length does not match family parameter count");
    std::mt19937_64 eng(spec.seed);
    for (int k = 1; k < spec.multistart; ++k)
        starts.push_back(draw_start(spec.family, spec.bounds, eng));

    const LmOptions options{spec.max_iterations, spec.gradient_tolerance, spec.step_tolerance};
    LmOutcome best;
    std::vector<double> start_sse;
    for (const auto& start : starts) {
        const LmOutcome run = levenberg_marquardt(internal_fn, transform.to_internal(start),
                                                  options);
        start_sse.push_back(run.sse);
        if (run.sse < best.sse) best = run;
    }

    std::vector<double> estimates = transform.to_natural(best.theta);
    const DiscountModel fitted = make_model(spec.family, estimates);
    return finalize_fit(spec.family, parameter_names(spec.family), cd, natural_fn,
                        std::move(estimates), best, std::move(start_sse), validate(fitted));
}

FitResult fit_with_covariates(std::span<const ChoiceRecord> data, const ProfileTable& profiles,
                              const FitSpec& spec, const CovariateSpec& cov) {
    if (data.empty()) throw EmptyDataError("fit needs choice records");
    check_spec(spec);
    const std::size_t m = cov.names.size();
    const std::size_t k = parameter_count(spec.family);

    std::vector<std::vector<bool>> loads = cov.loadings;
    if (loads.empty()) loads.assign(k, std::vector<bool>(m, true));
    if (loads.size() != k)
        throw DomainError("loadings must have one row per structural parameter");
    for (const auto& row : loads)
        if (row.size() != m) throw DomainError("loadings rows must match covariate count");

    // per-record covariate rows, deduplicated
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_index(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto it = profiles.find(data[i].subject_id);
        if (it == profiles.end())
            throw MissingProfileError("no covariate profile for subject " + data[i].subject_id);
        if (it->second.size() != m)
            throw LengthMismatchError("covariate row length does not match covariate names");
        for (double v : it->second)
            if (!std::isfinite(v)) throw DomainError("covariate values must be finite");
        std::size_t idx = rows.size();
        for (std::size_t rj = 0; rj < rows.size(); ++rj)
            if (rows[rj] == it->second) {
                idx = rj;
                break;
            }
        if (idx == rows.size()) rows.push_back(it->second);
        row_index[i] = idx;
    }

    // identification: [1, X] over subjects must have full rank on the
    // columns that carry any information (all-zero covariates are inert and
    // simply keep zero coefficients)
    {
        std::vector<std::size_t> live;
        for (std::size_t j = 0; j < m; ++j) {
            bool nonzero = false;
            for (const auto& profile : profiles)
                if (profile.second[j] != 0.0) nonzero = true;
            if (nonzero) live.push_back(j);
        }
        Eigen::MatrixXd design(static_cast<Eigen::Index>(profiles.size()),
                               static_cast<Eigen::Index>(1 + live.size()));
        Eigen::Index row = 0;
        for (const auto& profile : profiles) {
            design(row, 0) = 1.0;
            for (std::size_t j = 0; j < live.size(); ++j)
                design(row, static_cast<Eigen::Index>(1 + j)) = profile.second[live[j]];
            ++row;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < design.cols())
            throw RankDeficientCovariatesError("covariate design matrix is rank deficient");
    }

    CompactData cd = compact(data);

    // theta layout: per structural parameter, an intercept followed by one
    // coefficient per loaded covariate
    std::vector<std::size_t> offset(k);
    std::size_t n_coef = 0;
    for (std::size_t s = 0; s < k; ++s) {
        offset[s] = n_coef;
        n_coef += 1;
        for (std::size_t j = 0; j < m; ++j)
            if (loads[s][j]) ++n_coef;
    }

    auto row_params = [&, offset](std::span<const double> theta, const std::vector<double>& x) {
        std::vector<double> params(k);
        for (std::size_t s = 0; s < k; ++s) {
            double v = theta[offset[s]];
            std::size_t slot = offset[s] + 1;
            for (std::size_t j = 0; j < m; ++j)
                if (loads[s][j]) v += theta[slot++] * x[j];
            params[s] = v;
        }
        return params;
    };

    const Family family = spec.family;
    const EpsilonPolicy eps = spec.eps;
    const ResidualFn natural_fn = [&cd, &rows, &row_index, row_params, family,
                                   eps](std::span<const double> theta) {
        std::vector<double> out(cd.observed.size());
        // probabilities per (covariate row, item)
        std::vector<std::vector<double>> probs(rows.size());
        try {
            for (std::size_t rj = 0; rj < rows.size(); ++rj) {
                const DiscountModel model = make_model(family, row_params(theta, rows[rj]));
                probs[rj].resize(cd.items.size());
                for (std::size_t i = 0; i < cd.items.size(); ++i) {
                    const Tradeoff& tr = cd.items[i];
                    const double f = evaluate(model, {tr.t, tr.T}, eps);
                    probs[rj][i] = logistic_probability(tr.x - tr.y * f);
                }
            }
        } catch (const Error&) {
            penalty_residuals(cd, out);
            return out;
        }
        for (std::size_t i = 0; i < cd.observed.size(); ++i)
            out[i] = cd.observed[i] - probs[row_index[i]][cd.item_index[i]];
        return out;
    };

    // pooled fit seeds the intercepts; covariate loadings start at zero
    FitSpec pooled = spec;
    pooled.bounds = BoundsMode::Unconstrained;
    pooled.initial.reset();
    const FitResult base = fit(data, pooled);

    auto expand = [&](const std::vector<double>& intercepts) {
        std::vector<double> theta(n_coef, 0.0);
        for (std::size_t s = 0; s < k; ++s) theta[offset[s]] = intercepts[s];
        return theta;
    };

    std::vector<std::vector<double>> starts;
    starts.push_back(spec.initial.value_or(expand(base.estimates)));
    if (starts.front().size() != n_coef)
        throw DomainError("initial vector length does not match coefficient count");
    std::mt19937_64 eng(spec.seed);
    for (int s = 1; s < spec.multistart; ++s)
        starts.push_back(expand(draw_start(family, BoundsMode::Unconstrained, eng)));

    const LmOptions options{spec.max_iterations, spec.gradient_tolerance, spec.step_tolerance};
    LmOutcome best;
    std::vector<double> start_sse;
    for (const auto& start : starts) {
        const LmOutcome run = levenberg_marquardt(natural_fn, start, options);
        start_sse.push_back(run.sse);
        if (run.sse < best.sse) best = run;
    }

    std::vector<std::string> names;
    const auto base_names = parameter_names(family);
    for (std::size_t s = 0; s < k; ++s) {
        names.push_back(base_names[s]);
        for (std::size_t j = 0; j < m; ++j)
            if (loads[s][j]) names.push_back(base_names[s] + ":" + cov.names[j]);
    }

    std::vector<double> intercepts(k);
    for (std::size_t s = 0; s < k; ++s) intercepts[s] = best.theta[offset[s]];
    const ValidityReport validity = validate(make_model(family, intercepts));

    return finalize_fit(family, std::move(names), cd, natural_fn, best.theta, best,
                        std::move(start_sse), validity);
}

ModelComparison compare_models(std::span<const ChoiceRecord> data,
                               std::span<const FitSpec> specs) {
    ModelComparison out;
    for (const FitSpec& spec : specs) {
        try {
            out.ranked.push_back(fit(data, spec));
        } catch (const Error& e) {
            out.failures.emplace_back(spec.family, e.what());
        }
    }
    auto key = [](const FitResult& r) {
        const double adj =
            r.adjusted_r_squared.value_or(-std::numeric_limits<double>::infinity());
        return std::tuple<double, std::size_t, std::string_view>(-adj, r.estimates.size(),
                                                                 family_name(r.family));
    };
    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [&](const FitResult& a, const FitResult& b) { return key(a) < key(b); });
    return out;
}

namespace {

std::string format_sig(double v, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

const FitResult* find_family(const ModelComparison& c, Family f) {
    for (const FitResult& r : c.ranked)
        if (r.family == f) return &r;
    return nullptr;
}

std::optional<std::pair<double, double>> coefficient(const FitResult& r, const std::string& name) {
    for (std::size_t i = 0; i < r.parameter_names.size(); ++i)
        if (r.parameter_names[i] == name) return std::make_pair(r.estimates[i], r.robust_se[i]);
    return std::nullopt;
}

constexpr Family kTableOrder[6] = {Family::CadiCadi,   Family::CrdiCrdi, Family::CadiCrdi,
                                   Family::CrdiCadi,   Family::Hyperbolic,
                                   Family::Exponential};
const char* kTableParams[5] = {"r", "delta", "gamma", "alpha", "beta"};

} // namespace

std::string comparison_table(const ModelComparison& comparison) {
    std::ostringstream os;
    const int w = 14;
    os << std::left;
    os.width(w);
    os << "";
    for (Family f : kTableOrder)
        if (find_family(comparison, f)) {
            os.width(w);
            os << family_name(f);
        }
    os << '\n';
    for (const char* param : kTableParams) {
        bool any = false;
        for (Family f : kTableOrder)
            if (const FitResult* r = find_family(comparison, f))
                if (coefficient(*r, param)) any = true;
        if (!any) continue;
        os.width(w);
        os << param;
        std::ostringstream se_line;
        se_line << std::left;
        se_line.width(w);
        se_line << "";
        for (Family f : kTableOrder) {
            const FitResult* r = find_family(comparison, f);
            if (!r) continue;
            os.width(w);
            se_line.width(w);
            if (auto c = coefficient(*r, param)) {
                os << format_sig(c->first, 4);
                se_line << "(" + format_sig(c->second, 4) + ")";
            } else {
                os << "";
                se_line << "";
            }
        }
        os << '\n' << se_line.str() << '\n';
    }
    os.width(w);
    os << "observations";
    for (Family f : kTableOrder)
        if (const FitResult* r = find_family(comparison, f)) {
            os.width(w);
            os << r->observations;
        }
    os << '\n';
    os.width(w);
    os << "adjusted R2";
    for (Family f : kTableOrder)
        if (const FitResult* r = find_family(comparison, f)) {
            os.width(w);
            os << (r->adjusted_r_squared ? format_sig(*r->adjusted_r_squared, 4) : "n/a");
        }
    os << '\n';
    return os.str();
}

std::string comparison_csv(const ModelComparison& comparison) {
    std::ostringstream os;
    os << "row";
    for (Family f : kTableOrder)
        if (find_family(comparison, f)) os << ',' << family_name(f);
    os << '\n';
    auto emit_row = [&](const std::string& label, auto getter) {
        os << label;
        for (Family f : kTableOrder)
            if (const FitResult* r = find_family(comparison, f)) os << ',' << getter(*r);
        os << '\n';
    };
    for (const char* param : kTableParams) {
        bool any = false;
        for (Family f : kTableOrder)
            if (const FitResult* r = find_family(comparison, f))
                if (coefficient(*r, param)) any = true;
        if (!any) continue;
        emit_row(param, [&](const FitResult& r) {
            auto c = coefficient(r, param);
            return c ? format_sig(c->first, 6) : std::string();
        });
        emit_row(std::string(param) + "_se", [&](const FitResult& r) {
            auto c = coefficient(r, param);
            return c ? format_sig(c->second, 6) : std::string();
        });
    }
    emit_row("observations",
             [](const FitResult& r) { return std::to_string(r.observations); });
    emit_row("r_squared", [](const FitResult& r) {
        return r.r_squared ? format_sig(*r.r_squared, 6) : std::string("n/a");
    });
    emit_row("adjusted_r_squared", [](const FitResult& r) {
        return r.adjusted_r_squared ? format_sig(*r.adjusted_r_squared, 6) : std::string("n/a");
    });
    return os.str();
}

void to_json(nlohmann::json& j, const FitResult& result) {
    nlohmann::json estimates = nlohmann::json::object();
    nlohmann::json ses = nlohmann::json::object();
    for (std::size_t i = 0; i < result.parameter_names.size(); ++i) {
        estimates[result.parameter_names[i]] = result.estimates[i];
        ses[result.parameter_names[i]] = result.robust_se[i];
    }
    j = nlohmann::json{{"family", family_name(result.family)},
                       {"estimates", std::move(estimates)},
                       {"robustSE", std::move(ses)},
                       {"sse", result.sse},
                       {"rSquared", result.r_squared ? nlohmann::json(*result.r_squared)
                                                     : nlohmann::json()},
                       {"adjustedRSquared", result.adjusted_r_squared
                                                ? nlohmann::json(*result.adjusted_r_squared)
                                                : nlohmann::json()},
                       {"observations", result.observations},
                       {"iterations", result.iterations},
                       {"converged", result.converged},
                       {"jacobianFlagged", result.jacobian_flagged},
                       {"theoryValid", result.validity.theory_valid},
                       {"violations", result.validity.violations},
                       {"startSSE", result.start_sse}};
}

} // namespace tempodisc
