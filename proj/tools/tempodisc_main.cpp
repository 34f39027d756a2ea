// Command-line front end: evaluate discount surfaces, run the axiom and
// impatience suites, fit and compare models on choice data, generate
// synthetic cohorts, and score survey files. Data goes to stdout (or --out),
// diagnostics to stderr. Exit codes: 0 ok, 1 check failed, 2 input error,
// 3 non-convergence under --strict.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tempodisc/axioms.hpp"
#include "tempodisc/choice.hpp"
#include "tempodisc/discount.hpp"
#include "tempodisc/estimation.hpp"
#include "tempodisc/impatience.hpp"
#include "tempodisc/survey.hpp"

namespace {

using namespace tempodisc;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNonConvergence = 3;

struct GlobalOptions {
    std::uint64_t seed = 42;
    double epsilon = 0.001;
    std::string format = "table";
    std::string out;
};

std::string format_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%#.*g", digits, v);
    std::string s(buf);
    if (s.find('.') != std::string::npos && s.find('e') == std::string::npos &&
        s.back() == '.')
        s.pop_back();
    return s;
}

std::string format_factor(double v) { return format_sig(v, 6); }
std::string format_param(double v) { return format_sig(v, 4); }

void emit(const GlobalOptions& g, const std::string& content) {
    if (g.out.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream os(g.out);
        if (!os) throw ParseError("cannot open output file: " + g.out);
        os << content;
        if (!content.empty() && content.back() != '\n') os << '\n';
    }
}

// Model selection shared by the surface-facing subcommands: either a JSON
// file or a family name plus parameter flags.
struct ModelOptions {
    std::string model_file;
    std::string family;
    std::optional<double> r, delta, gamma, alpha, beta;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model_file, "model JSON file");
        cmd->add_option("--family", family,
                        "cadi-cadi | crdi-crdi | cadi-crdi | crdi-cadi | hyperbolic | exponential");
        cmd->add_option("--r", r, "initial discount rate per day");
        cmd->add_option("--delta", delta, "decay of r in t, per day");
        cmd->add_option("--gamma", gamma, "decay of r in T, per day");
        cmd->add_option("--alpha", alpha, "time-perception exponent in t");
        cmd->add_option("--beta", beta, "time-perception exponent in T (rate for baselines)");
    }

    DiscountModel resolve() const {
        if (!model_file.empty()) {
            std::ifstream is(model_file);
            if (!is) throw ParseError("cannot open model file: " + model_file);
            std::stringstream buffer;
            buffer << is.rdbuf();
            return model_from_json_text(buffer.str());
        }
        if (family.empty()) throw ParseError("need --model or --family");
        const Family fam = family_from_name(family);
        auto need = [&](const std::optional<double>& v, const char* name) {
            if (!v) throw ParseError(std::string("missing --") + name + " for " + family);
            return *v;
        };
        switch (fam) {
            case Family::CadiCadi:
                return CadiCadi{need(r, "r"), need(delta, "delta"), need(gamma, "gamma")};
            case Family::CrdiCrdi:
                return CrdiCrdi{need(r, "r"), need(alpha, "alpha"), need(beta, "beta")};
            case Family::CadiCrdi:
                return CadiCrdi{need(r, "r"), need(delta, "delta"), need(beta, "beta")};
            case Family::CrdiCadi:
                return CrdiCadi{need(r, "r"), need(alpha, "alpha"), need(gamma, "gamma")};
            case Family::Hyperbolic:
                return Hyperbolic{need(alpha, "alpha"), need(beta, "beta")};
            case Family::Exponential: return Exponential{need(beta, "beta")};
        }
        throw ParseError("unknown family");
    }
};

json fit_result_json(const FitResult& result) {
    json j;
    to_json(j, result);
    return j;
}

std::string fit_result_table(const FitResult& result) {
    std::ostringstream os;
    os << "family: " << family_name(result.family) << '\n';
    for (std::size_t i = 0; i < result.parameter_names.size(); ++i)
        os << "  " << result.parameter_names[i] << " = "
           << format_param(result.estimates[i]) << "  (" << format_param(result.robust_se[i])
           << ")\n";
    os << "  observations = " << result.observations << '\n';
    os << "  sse = " << format_factor(result.sse) << '\n';
    if (result.r_squared) os << "  R2 = " << format_factor(*result.r_squared) << '\n';
    if (result.adjusted_r_squared)
        os << "  adjusted R2 = " << format_factor(*result.adjusted_r_squared) << '\n';
    os << "  converged = " << (result.converged ? "yes" : "no") << '\n';
    os << "  theory-valid = " << (result.validity.theory_valid ? "yes" : "no");
    for (const auto& v : result.validity.violations) os << " [" << v << "]";
    os << '\n';
    return os.str();
}

std::vector<ChoiceRecord> load_choices(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open choices file: " + path);
    return read_choices_csv(is);
}

QuestionnaireDesign load_design_or_default(const std::string& path) {
    if (path.empty()) return QuestionnaireDesign::default_design();
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open design file: " + path);
    return read_design_csv(is);
}

IngestResult load_profiles(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open profiles file: " + path);
    IngestResult result = ingest_profiles(is);
    for (const RowError& e : result.errors)
        std::cerr << "profiles row " << e.row << ": " << e.message << '\n';
    return result;
}

// drop inconsistent subjects in place, reporting on stderr
void screen_in_place(std::vector<ChoiceRecord>& records, const QuestionnaireDesign& design) {
    const auto dropped = consistency_screen(records, design);
    if (dropped.empty()) return;
    std::cerr << "dropping " << dropped.size() << " inconsistent subject(s)\n";
    std::erase_if(records, [&](const ChoiceRecord& rec) {
        return std::find(dropped.begin(), dropped.end(), rec.subject_id) != dropped.end();
    });
}

int run_eval(const GlobalOptions& g, const ModelOptions& mo, double t, double T,
             std::optional<double> amount, bool eta_form, double t2) {
    const DiscountModel model = mo.resolve();
    const EpsilonPolicy eps{g.epsilon};
    const double f =
        eta_form ? evaluate_eta(model, t, t2, eps) : evaluate(model, {t, T}, eps);
    const double interval = eta_form ? t2 - t : T;
    const bool adjusted = t == 0.0 && uses_epsilon_at_zero(family_of(model));

    if (g.format == "json") {
        json j{{"family", family_name(family_of(model))},
               {"t", t},
               {"T", interval},
               {"discountFactor", f},
               {"epsilonAdjusted", adjusted}};
        if (amount) j["presentValue"] = *amount * f;
        emit(g, j.dump(2));
    } else {
        std::ostringstream os;
        os << "F(" << t << ", " << interval << ") = " << format_factor(f) << '\n';
        if (adjusted)
            os << "note: epsilon-adjusted t=" << format_sig(g.epsilon, 4) << '\n';
        if (amount)
            os << "present value of " << *amount << " = " << format_factor(*amount * f)
               << '\n';
        emit(g, os.str());
    }
    return kExitOk;
}

int run_axioms(const GlobalOptions& g, const ModelOptions& mo, AxiomCheckConfig cfg) {
    const DiscountModel model = mo.resolve();
    cfg.seed = g.seed;
    const Classification c = classify(model, cfg, EpsilonPolicy{g.epsilon});

    if (g.format == "json") {
        json j;
        to_json(j, c);
        j["family"] = family_name(family_of(model));
        emit(g, j.dump(2));
    } else {
        std::ostringstream os;
        os << "axiom checks for " << family_name(family_of(model)) << '\n';
        for (const auto& [ax, report] : c.reports) {
            os << "  " << axiom_name(ax) << (std::string(axiom_name(ax)).size() < 3 ? "  " : " ")
               << (report.pass ? "pass" : "FAIL")
               << "  worst " << format_sig(report.worst_violation, 3) << "  (" << report.samples_tested
               << " samples";
            if (report.samples_skipped > 0) os << ", " << report.samples_skipped << " skipped";
            os << ")\n";
        }
        os << "bundles satisfied:";
        if (c.satisfied.empty()) os << " none";
        for (char b : c.satisfied) os << ' ' << b;
        os << '\n';
        emit(g, os.str());
    }

    const Family fam = family_of(model);
    if (fam == Family::Hyperbolic || fam == Family::Exponential) return kExitOk;
    const char label = bundle_label(fam);
    for (const auto& b : c.bundles)
        if (b.label == label) return b.satisfied ? kExitOk : kExitCheckFailed;
    return kExitCheckFailed;
}

int run_prelec(const GlobalOptions& g, const ModelOptions& mo, double t_min, double t_max,
               double T_min, double T_max, int n, double step, bool richardson) {
    const DiscountModel model = mo.resolve();
    const auto grid = rectangular_grid(t_min, t_max, T_min, T_max, n);
    const ConstancyReport report =
        constancy_scan(model, grid, FdScheme{step, richardson}, {}, EpsilonPolicy{g.epsilon});

    if (g.format == "json") {
        json j;
        to_json(j, report);
        j["family"] = family_name(family_of(model));
        emit(g, j.dump(2));
    } else {
        std::ostringstream os;
        os << "impatience measures for " << family_name(family_of(model)) << '\n';
        auto row = [&](const char* name, const MeasureScan& scan) {
            os << "  " << name << ": ";
            switch (scan.analytic.status) {
                case MeasureStatus::Constant:
                    os << "analytic " << format_param(scan.analytic.value) << ", max dev "
                       << format_sig(scan.max_abs_dev, 3)
                       << (scan.constant ? " (constant)" : " (NOT within tolerance)");
                    break;
                case MeasureStatus::NotConstant:
                    os << "not constant, numeric range [" << format_param(scan.numeric_min)
                       << ", " << format_param(scan.numeric_max) << "]";
                    break;
                case MeasureStatus::NotDefined: os << "not defined"; break;
            }
            os << '\n';
        };
        row("lambda1", report.lambda1);
        row("lambda2", report.lambda2);
        row("mu1    ", report.mu1);
        row("mu2    ", report.mu2);
        os << (report.pass ? "pass" : "FAIL") << '\n';
        emit(g, os.str());
    }
    return report.pass ? kExitOk : kExitCheckFailed;
}

FitSpec make_spec(const GlobalOptions& g, Family family, bool constrained, int multistart,
                  int max_iter) {
    FitSpec spec;
    spec.family = family;
    spec.bounds = constrained ? BoundsMode::TheoryConstrained : BoundsMode::Unconstrained;
    spec.eps = EpsilonPolicy{g.epsilon};
    spec.multistart = multistart;
    spec.max_iterations = max_iter;
    spec.seed = g.seed;
    return spec;
}

std::vector<FitSpec> all_family_specs(const GlobalOptions& g, bool constrained, int multistart,
                                      int max_iter) {
    std::vector<FitSpec> specs;
    for (Family fam : {Family::CadiCadi, Family::CrdiCrdi, Family::CadiCrdi, Family::CrdiCadi,
                       Family::Hyperbolic, Family::Exponential})
        specs.push_back(make_spec(g, fam, constrained, multistart, max_iter));
    return specs;
}

int emit_comparison(const GlobalOptions& g, const ModelComparison& cmp, bool force_table) {
    for (const auto& [family, message] : cmp.failures)
        std::cerr << "fit failed for " << family_name(family) << ": " << message << '\n';
    if (!force_table && g.format == "json") {
        json ranked = json::array();
        for (const FitResult& r : cmp.ranked) ranked.push_back(fit_result_json(r));
        emit(g, json{{"ranked", std::move(ranked)}}.dump(2));
    } else if (!force_table && g.format == "csv") {
        emit(g, comparison_csv(cmp));
    } else {
        emit(g, comparison_table(cmp));
    }
    return kExitOk;
}

int run_fit(const GlobalOptions& g, const std::string& in, const std::string& family,
            const std::string& profiles_path, const std::string& covariates, bool constrained,
            bool strict, int multistart, int max_iter, bool compare_all,
            const std::string& design_path) {
    std::vector<ChoiceRecord> records = load_choices(in);
    const QuestionnaireDesign design = load_design_or_default(design_path);
    try {
        screen_in_place(records, design);
    } catch (const NoDominanceItemError&) {
        std::cerr << "no dominance item in the design; skipping consistency screen\n";
    }
    if (records.empty()) throw EmptyDataError("no records left after screening");

    if (compare_all) {
        const auto specs = all_family_specs(g, constrained, multistart, max_iter);
        return emit_comparison(g, compare_models(records, specs), false);
    }

    if (family.empty()) throw ParseError("need --family (or --compare-all)");
    const FitSpec spec = make_spec(g, family_from_name(family), constrained, multistart, max_iter);

    FitResult result;
    if (!profiles_path.empty()) {
        const IngestResult ingest = load_profiles(profiles_path);
        CovariateSpec cov;
        if (covariates.empty())
            cov.names = default_covariate_names();
        else {
            std::istringstream is(covariates);
            std::string name;
            while (std::getline(is, name, ',')) cov.names.push_back(name);
        }
        ProfileTable table;
        for (const RespondentProfile& p : ingest.profiles) {
            std::vector<double> row;
            for (const auto& name : cov.names) row.push_back(covariate_value(p, name));
            table[p.subject_id] = std::move(row);
        }
        result = fit_with_covariates(records, table, spec, cov);
    } else {
        result = fit(records, spec);
    }

    if (g.format == "json")
        emit(g, fit_result_json(result).dump(2));
    else
        emit(g, fit_result_table(result));
    if (strict && !result.converged) return kExitNonConvergence;
    return kExitOk;
}

int run_simulate(const GlobalOptions& g, const ModelOptions& mo, int subjects,
                 const std::string& design_path, const std::string& noise) {
    const DiscountModel model = mo.resolve();
    const QuestionnaireDesign design = load_design_or_default(design_path);
    if (noise != "deterministic" && noise != "bernoulli")
        throw ParseError("--noise must be bernoulli or deterministic");
    const NoiseMode mode = noise == "deterministic" ? NoiseMode::Deterministic
                                                    : NoiseMode::Bernoulli;
    const auto records =
        generate_choices(model, design, subjects, g.seed, mode, EpsilonPolicy{g.epsilon});
    std::ostringstream os;
    write_choices_csv(os, records);
    emit(g, os.str());
    return kExitOk;
}

int run_recover(const GlobalOptions& g, const ModelOptions& mo, int subjects,
                const std::string& fit_family, bool constrained, int multistart, int max_iter,
                const std::string& design_path) {
    const DiscountModel model = mo.resolve();
    const QuestionnaireDesign design = load_design_or_default(design_path);
    const auto records = generate_choices(model, design, subjects, g.seed, NoiseMode::Bernoulli,
                                          EpsilonPolicy{g.epsilon});
    const Family fam =
        fit_family.empty() ? family_of(model) : family_from_name(fit_family);
    const FitResult result =
        fit(records, make_spec(g, fam, constrained, multistart, max_iter));

    const auto truth = parameters_of(model);
    const bool same_family = fam == family_of(model);
    if (g.format == "json") {
        json j = fit_result_json(result);
        if (same_family) {
            json t = json::object();
            const auto names = parameter_names(fam);
            for (std::size_t i = 0; i < names.size(); ++i) t[names[i]] = truth[i];
            j["truth"] = std::move(t);
        }
        emit(g, j.dump(2));
    } else {
        std::ostringstream os;
        os << fit_result_table(result);
        if (same_family) {
            os << "recovery vs generating parameters:\n";
            const auto names = parameter_names(fam);
            for (std::size_t i = 0; i < names.size(); ++i) {
                const double err = result.estimates[i] - truth[i];
                os << "  " << names[i] << ": true " << format_param(truth[i]) << ", est "
                   << format_param(result.estimates[i]) << ", error " << format_param(err)
                   << '\n';
            }
        }
        emit(g, os.str());
    }
    return kExitOk;
}

int run_tipi(const GlobalOptions& g, const std::string& in) {
    const IngestResult ingest = load_profiles(in);
    if (ingest.profiles.empty()) throw EmptyDataError("no valid profiles");
    const SurveySummary summary = summarize(ingest.profiles);

    if (g.format == "json") {
        json j;
        to_json(j, summary);
        emit(g, j.dump(2));
    } else if (g.format == "csv") {
        emit(g, summary_csv(summary));
    } else {
        std::ostringstream os;
        os << "variable            mean        sd\n";
        for (const auto& v : summary.variables) {
            os << "  " << v.name;
            for (std::size_t pad = v.name.size(); pad < 18; ++pad) os << ' ';
            os << format_param(v.mean) << "    " << format_param(v.sd) << '\n';
        }
        os << "scale spearman (E, A, C, N, O):\n";
        for (const auto& row : summary.scale_spearman) {
            os << " ";
            for (double v : row) os << ' ' << format_param(v);
            os << '\n';
        }
        emit(g, os.str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-variable time-discounting toolkit"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "seed for randomized machinery")->capture_default_str();
    app.add_option("--epsilon", g.epsilon, "delay substituted at t = 0 for power-of-t families")
        ->capture_default_str();
    app.add_option("--format", g.format, "json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    app.add_option("--out", g.out, "write output to a file instead of stdout");

    // eval / eta
    auto* eval_cmd = app.add_subcommand("eval", "evaluate F(t,T)")->fallthrough();
    ModelOptions eval_model;
    eval_model.attach(eval_cmd);
    double eval_t = 0, eval_T = 0;
    std::optional<double> eval_amount;
    eval_cmd->add_option("--t", eval_t, "delay in days")->required();
    eval_cmd->add_option("--T", eval_T, "interval in days")->required();
    eval_cmd->add_option("--amount", eval_amount, "later amount to discount");

    auto* eta_cmd = app.add_subcommand("eta", "evaluate the calendar form eta(t1, t2)")->fallthrough();
    ModelOptions eta_model;
    eta_model.attach(eta_cmd);
    double eta_t1 = 0, eta_t2 = 0;
    std::optional<double> eta_amount;
    eta_cmd->add_option("--t1", eta_t1, "sooner calendar day")->required();
    eta_cmd->add_option("--t2", eta_t2, "later calendar day")->required();
    eta_cmd->add_option("--amount", eta_amount, "later amount to discount");

    // axioms
    auto* axioms_cmd = app.add_subcommand("axioms", "axiom falsification suite")->fallthrough();
    ModelOptions axioms_model;
    axioms_model.attach(axioms_cmd);
    AxiomCheckConfig axiom_cfg;
    axioms_cmd->add_option("--samples", axiom_cfg.random_samples, "random samples per axiom")
        ->capture_default_str();
    axioms_cmd->add_option("--tolerance", axiom_cfg.tolerance, "relative pass tolerance")
        ->capture_default_str();
    axioms_cmd->add_option("--horizon", axiom_cfg.horizon, "limit-check horizon in days")
        ->capture_default_str();

    // prelec
    auto* prelec_cmd = app.add_subcommand("prelec", "impatience-measure constancy scan")->fallthrough();
    ModelOptions prelec_model;
    prelec_model.attach(prelec_cmd);
    double p_tmin = 5, p_tmax = 365, p_Tmin = 5, p_Tmax = 365, p_step = 0.05;
    int p_n = 10;
    bool p_rich = false;
    prelec_cmd->add_option("--t-min", p_tmin)->capture_default_str();
    prelec_cmd->add_option("--t-max", p_tmax)->capture_default_str();
    prelec_cmd->add_option("--T-min", p_Tmin)->capture_default_str();
    prelec_cmd->add_option("--T-max", p_Tmax)->capture_default_str();
    prelec_cmd->add_option("--grid", p_n, "points per coordinate")->capture_default_str();
    prelec_cmd->add_option("--step", p_step, "finite-difference base step")->capture_default_str();
    prelec_cmd->add_flag("--richardson", p_rich, "extrapolate once in the step size");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "nonlinear least-squares fit on choices CSV")->fallthrough();
    std::string fit_in, fit_family, fit_profiles, fit_covariates, fit_design;
    bool fit_constrained = false, fit_strict = false, fit_compare_all = false;
    int fit_multistart = 8, fit_max_iter = 500;
    fit_cmd->add_option("--in", fit_in, "choices CSV")->required();
    fit_cmd->add_option("--family", fit_family, "family to fit");
    fit_cmd->add_option("--profiles", fit_profiles, "profiles CSV for covariate fits");
    fit_cmd->add_option("--covariates", fit_covariates,
                        "comma-separated covariate names (default: the behavioral set)");
    fit_cmd->add_option("--design", fit_design, "design CSV for the consistency screen");
    fit_cmd->add_flag("--constrained", fit_constrained, "keep parameters in the theory region");
    fit_cmd->add_flag("--strict", fit_strict, "exit 3 on non-convergence");
    fit_cmd->add_flag("--compare-all", fit_compare_all, "fit all six families and rank");
    fit_cmd->add_option("--multistart", fit_multistart)->capture_default_str();
    fit_cmd->add_option("--max-iter", fit_max_iter)->capture_default_str();

    // compare / report
    auto* compare_cmd = app.add_subcommand("compare", "fit all six families and rank")->fallthrough();
    std::string compare_in, compare_design;
    bool compare_constrained = false;
    int compare_multistart = 8, compare_max_iter = 500;
    compare_cmd->add_option("--in", compare_in, "choices CSV")->required();
    compare_cmd->add_option("--design", compare_design, "design CSV for the consistency screen");
    compare_cmd->add_flag("--constrained", compare_constrained);
    compare_cmd->add_option("--multistart", compare_multistart)->capture_default_str();
    compare_cmd->add_option("--max-iter", compare_max_iter)->capture_default_str();

    auto* report_cmd = app.add_subcommand("report", "paper-shaped comparison table")->fallthrough();
    std::string report_in, report_design;
    int report_multistart = 8, report_max_iter = 500;
    report_cmd->add_option("--in", report_in, "choices CSV")->required();
    report_cmd->add_option("--design", report_design, "design CSV for the consistency screen");
    report_cmd->add_option("--multistart", report_multistart)->capture_default_str();
    report_cmd->add_option("--max-iter", report_max_iter)->capture_default_str();

    // simulate / recover
    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic cohort CSV")->fallthrough();
    ModelOptions sim_model;
    sim_model.attach(sim_cmd);
    int sim_subjects = 150;
    std::string sim_design, sim_noise = "bernoulli";
    sim_cmd->add_option("--subjects", sim_subjects)->capture_default_str();
    sim_cmd->add_option("--design", sim_design, "design CSV (default: built-in 43 items)");
    sim_cmd->add_option("--noise", sim_noise, "bernoulli | deterministic")->capture_default_str();

    auto* rec_cmd = app.add_subcommand("recover", "simulate then fit back (recovery study)")->fallthrough();
    ModelOptions rec_model;
    rec_model.attach(rec_cmd);
    int rec_subjects = 150, rec_multistart = 8, rec_max_iter = 500;
    std::string rec_family, rec_design;
    bool rec_constrained = false;
    rec_cmd->add_option("--subjects", rec_subjects)->capture_default_str();
    rec_cmd->add_option("--fit-family", rec_family, "family to fit (default: the generator's)");
    rec_cmd->add_option("--design", rec_design, "design CSV");
    rec_cmd->add_flag("--constrained", rec_constrained);
    rec_cmd->add_option("--multistart", rec_multistart)->capture_default_str();
    rec_cmd->add_option("--max-iter", rec_max_iter)->capture_default_str();

    // tipi
    auto* tipi_cmd = app.add_subcommand("tipi", "score a profiles CSV and summarize")->fallthrough();
    std::string tipi_in;
    tipi_cmd->add_option("--in", tipi_in, "profiles CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval_cmd->parsed())
            return run_eval(g, eval_model, eval_t, eval_T, eval_amount, false, 0);
        if (eta_cmd->parsed())
            return run_eval(g, eta_model, eta_t1, 0, eta_amount, true, eta_t2);
        if (axioms_cmd->parsed()) return run_axioms(g, axioms_model, axiom_cfg);
        if (prelec_cmd->parsed())
            return run_prelec(g, prelec_model, p_tmin, p_tmax, p_Tmin, p_Tmax, p_n, p_step,
                              p_rich);
        if (fit_cmd->parsed())
            return run_fit(g, fit_in, fit_family, fit_profiles, fit_covariates, fit_constrained,
                           fit_strict, fit_multistart, fit_max_iter, fit_compare_all,
                           fit_design);
        if (compare_cmd->parsed()) {
            std::vector<ChoiceRecord> records = load_choices(compare_in);
            try {
                screen_in_place(records, load_design_or_default(compare_design));
            } catch (const NoDominanceItemError&) {
            }
            const auto specs =
                all_family_specs(g, compare_constrained, compare_multistart, compare_max_iter);
            return emit_comparison(g, compare_models(records, specs), false);
        }
        if (report_cmd->parsed()) {
            std::vector<ChoiceRecord> records = load_choices(report_in);
            try {
                screen_in_place(records, load_design_or_default(report_design));
            } catch (const NoDominanceItemError&) {
            }
            const auto specs = all_family_specs(g, false, report_multistart, report_max_iter);
            return emit_comparison(g, compare_models(records, specs), true);
        }
        if (sim_cmd->parsed())
            return run_simulate(g, sim_model, sim_subjects, sim_design, sim_noise);
        if (rec_cmd->parsed())
            return run_recover(g, rec_model, rec_subjects, rec_family, rec_constrained,
                               rec_multistart, rec_max_iter, rec_design);
        if (tipi_cmd->parsed()) return run_tipi(g, tipi_in);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}
