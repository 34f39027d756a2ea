#include "tempodisc/discount.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tempodisc {

namespace {

// (1 - e^{-g T}) / g, the integral of e^{-g tau} over [0,T].
// expm1 keeps the small-|g| regime exact; |g| below 1e-12 is treated as the
// g = 0 branch to avoid 0/0.
double cadi_interval_integral(double gamma, double T) {
    if (std::abs(gamma) < 1e-12) return T;
    return -std::expm1(-gamma * T) / gamma;
}

// T^{beta+1} / (beta+1), the integral of tau^beta over [0,T].
double crdi_interval_integral(double beta, double T) {
    if (beta == -1.0) throw InvalidParamsError("beta = -1 is excluded (division by zero)");
    if (T == 0.0 && beta + 1.0 > 0.0) return 0.0;
    return std::pow(T, beta + 1.0) / (beta + 1.0);
}

void check_point(TimePoint p) {
    if (!(p.t >= 0.0) || !(p.T >= 0.0) || !std::isfinite(p.t) || !std::isfinite(p.T))
        throw DomainError("time point requires finite t >= 0 and T >= 0");
}

double effective_delay(double t, Family family, EpsilonPolicy eps) {
    if (eps.epsilon <= 0.0) throw DomainError("epsilon must be > 0");
    if (t == 0.0 && uses_epsilon_at_zero(family)) return t + eps.epsilon;
    return t;
}

[[noreturn]] void throw_non_finite(Family family) {
    std::ostringstream os;
    os << "non-finite exponent evaluating " << family_name(family) << " discount function";
    throw NonFiniteError(os.str());
}

} // namespace

Family family_of(const DiscountModel& model) {
    return static_cast<Family>(model.index());
}

std::string_view family_name(Family family) {
    switch (family) {
        case Family::CadiCadi: return "cadi-cadi";
        case Family::CrdiCrdi: return "crdi-crdi";
        case Family::CadiCrdi: return "cadi-crdi";
        case Family::CrdiCadi: return "crdi-cadi";
        case Family::Hyperbolic: return "hyperbolic";
        case Family::Exponential: return "exponential";
    }
    throw DomainError("unknown family tag");
}

Family family_from_name(std::string_view name) {
    if (name == "cadi-cadi") return Family::CadiCadi;
    if (name == "crdi-crdi") return Family::CrdiCrdi;
    if (name == "cadi-crdi") return Family::CadiCrdi;
    if (name == "crdi-cadi") return Family::CrdiCadi;
    if (name == "hyperbolic") return Family::Hyperbolic;
    if (name == "exponential") return Family::Exponential;
    throw ParseError("unknown discount family: " + std::string(name));
}

std::size_t parameter_count(Family family) {
    switch (family) {
        case Family::CadiCadi:
        case Family::CrdiCrdi:
        case Family::CadiCrdi:
        case Family::CrdiCadi: return 3;
        case Family::Hyperbolic: return 2;
        case Family::Exponential: return 1;
    }
    throw DomainError("unknown family tag");
}

std::vector<std::string> parameter_names(Family family) {
    switch (family) {
        case Family::CadiCadi: return {"r", "delta", "gamma"};
        case Family::CrdiCrdi: return {"r", "alpha", "beta"};
        case Family::CadiCrdi: return {"r", "delta", "beta"};
        case Family::CrdiCadi: return {"r", "alpha", "gamma"};
        case Family::Hyperbolic: return {"alpha", "beta"};
        case Family::Exponential: return {"beta"};
    }
    throw DomainError("unknown family tag");
}

std::vector<double> parameters_of(const DiscountModel& model) {
    return std::visit(
        [](const auto& m) -> std::vector<double> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CadiCadi>) return {m.r, m.delta, m.gamma};
            else if constexpr (std::is_same_v<M, CrdiCrdi>) return {m.r, m.alpha, m.beta};
            else if constexpr (std::is_same_v<M, CadiCrdi>) return {m.r, m.delta, m.beta};
            else if constexpr (std::is_same_v<M, CrdiCadi>) return {m.r, m.alpha, m.gamma};
            else if constexpr (std::is_same_v<M, Hyperbolic>) return {m.alpha, m.beta};
            else return {m.beta};
        },
        model);
}

DiscountModel make_model(Family family, std::span<const double> params) {
    if (params.size() != parameter_count(family))
        throw DomainError("wrong parameter count for family");
    switch (family) {
        case Family::CadiCadi: return CadiCadi{params[0], params[1], params[2]};
        case Family::CrdiCrdi: return CrdiCrdi{params[0], params[1], params[2]};
        case Family::CadiCrdi: return CadiCrdi{params[0], params[1], params[2]};
        case Family::CrdiCadi: return CrdiCadi{params[0], params[1], params[2]};
        case Family::Hyperbolic: return Hyperbolic{params[0], params[1]};
        case Family::Exponential: return Exponential{params[0]};
    }
    throw DomainError("unknown family tag");
}

bool uses_epsilon_at_zero(Family family) {
    return family == Family::CrdiCrdi || family == Family::CrdiCadi;
}

double log_evaluate(const DiscountModel& model, TimePoint p, EpsilonPolicy eps) {
    check_point(p);
    const Family fam = family_of(model);
    const double t = effective_delay(p.t, fam, eps);
    const double T = p.T;

    const double log_f = std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CadiCadi>) {
                return -m.r * std::exp(-m.delta * t) * cadi_interval_integral(m.gamma, T);
            } else if constexpr (std::is_same_v<M, CrdiCrdi>) {
                return -m.r * std::pow(t, m.alpha) * crdi_interval_integral(m.beta, T);
            } else if constexpr (std::is_same_v<M, CadiCrdi>) {
                return -m.r * std::exp(-m.delta * t) * crdi_interval_integral(m.beta, T);
            } else if constexpr (std::is_same_v<M, CrdiCadi>) {
                return -m.r * std::pow(t, m.alpha) * cadi_interval_integral(m.gamma, T);
            } else if constexpr (std::is_same_v<M, Hyperbolic>) {
                // (beta/alpha) [ln(1+alpha t) - ln(1+alpha(t+T))]
                return m.beta / m.alpha *
                       (std::log1p(m.alpha * t) - std::log1p(m.alpha * (t + T)));
            } else {
                return -m.beta * T;
            }
        },
        model);

    if (std::isnan(log_f) || std::isinf(log_f)) throw_non_finite(fam);
    return log_f;
}

double evaluate(const DiscountModel& model, TimePoint p, EpsilonPolicy eps) {
    return std::exp(log_evaluate(model, p, eps));
}

double evaluate_eta(const DiscountModel& model, double t1, double t2, EpsilonPolicy eps) {
    if (t2 < t1) throw OrderViolationError("eta(t2, t1) requires t2 >= t1");
    return evaluate(model, TimePoint{t1, t2 - t1}, eps);
}

double present_value(const DiscountModel& model, double amount, TimePoint p, EpsilonPolicy eps) {
    if (!(amount >= 0.0)) throw DomainError("present value requires amount >= 0");
    return amount * evaluate(model, p, eps);
}

ValidityReport validate(const DiscountModel& model) {
    ValidityReport report;
    auto flag = [&](bool violated, const char* message) {
        if (violated) {
            report.theory_valid = false;
            report.violations.emplace_back(message);
        }
    };
    for (double v : parameters_of(model))
        flag(!std::isfinite(v), "non-finite parameter");

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CadiCadi>) {
                flag(!(m.r > 0.0), "r <= 0");
                flag(!(m.delta > 0.0), "delta <= 0");
            } else if constexpr (std::is_same_v<M, CrdiCrdi>) {
                flag(!(m.r > 0.0), "r <= 0");
                flag(!(m.alpha < 0.0), "alpha >= 0");
                flag(m.beta == -1.0, "beta = -1 (excluded value)");
                flag(!(m.beta > -1.0) && m.beta != -1.0, "beta < -1");
            } else if constexpr (std::is_same_v<M, CadiCrdi>) {
                flag(!(m.r > 0.0), "r <= 0");
                flag(!(m.delta > 0.0), "delta <= 0");
                flag(m.beta == -1.0, "beta = -1 (excluded value)");
                flag(!(m.beta > -1.0) && m.beta != -1.0, "beta < -1");
            } else if constexpr (std::is_same_v<M, CrdiCadi>) {
                flag(!(m.r > 0.0), "r <= 0");
                flag(!(m.alpha < 0.0), "alpha >= 0");
            } else if constexpr (std::is_same_v<M, Hyperbolic>) {
                flag(!(m.alpha > 0.0), "alpha <= 0");
                flag(!(m.beta > 0.0), "beta <= 0");
            } else {
                flag(!(m.beta > 0.0), "beta <= 0");
            }
        },
        model);
    return report;
}

void to_json(nlohmann::json& j, const DiscountModel& model) {
    const Family fam = family_of(model);
    nlohmann::json params = nlohmann::json::object();
    const auto names = parameter_names(fam);
    const auto values = parameters_of(model);
    for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = values[i];
    j = nlohmann::json{{"family", family_name(fam)}, {"params", std::move(params)}};
}

void from_json(const nlohmann::json& j, DiscountModel& model) {
    if (!j.is_object() || !j.contains("family") || !j.contains("params"))
        throw ParseError(R"(model JSON needs {"family": ..., "params": {...}})");
    const Family fam = family_from_name(j.at("family").get<std::string>());
    const auto& params = j.at("params");
    std::vector<double> values;
    for (const auto& name : parameter_names(fam)) {
        if (!params.contains(name))
            throw ParseError("model JSON missing parameter: " + name);
        if (!params.at(name).is_number())
            throw ParseError("model parameter not numeric: " + name);
        values.push_back(params.at(name).get<double>());
    }
    model = make_model(fam, values);
}

DiscountModel model_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON");
    DiscountModel model = Exponential{1.0};
    from_json(j, model);
    return model;
}

std::string model_to_json_text(const DiscountModel& model) {
    nlohmann::json j;
    to_json(j, model);
    return j.dump(2);
}

} // namespace tempodisc
