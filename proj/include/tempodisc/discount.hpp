#ifndef TEMPODISC_DISCOUNT_HPP
#define TEMPODISC_DISCOUNT_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tempodisc/errors.hpp"

namespace tempodisc {

/// A (delay, interval) pair in days: the sooner option is available at t,
/// the later one at t + T.
struct TimePoint {
    double t = 0.0;
    double T = 0.0;
};

/// Substitution applied when a power-of-t family is evaluated at t = 0,
/// where t^alpha is undefined: the effective delay becomes epsilon.
struct EpsilonPolicy {
    double epsilon = 0.001; // days
};

// The two-variable discount families. F(t,T) is the relative weight of an
// outcome at t+T against one at t; F is increasing in t and decreasing in T.
//
// Exponential decay in a coordinate gives a constant absolute impatience
// measure in it; power-law decay gives a constant relative measure.

/// F(t,T) = exp(-r e^{-delta t} (1-e^{-gamma T})/gamma), linear-in-T branch at gamma = 0.
struct CadiCadi {
    double r;     // initial discount rate, per day
    double delta; // decay of r in t, per day
    double gamma; // decay of r in T, per day (any sign)
};

/// F(t,T) = exp(-r t^alpha T^{beta+1}/(beta+1)), defined for t > 0.
struct CrdiCrdi {
    double r;     // initial discount rate, per day
    double alpha; // time-perception exponent in t (< 0 for monotonicity)
    double beta;  // time-perception exponent in T (> -1)
};

/// F(t,T) = exp(-r e^{-delta t} T^{beta+1}/(beta+1)).
struct CadiCrdi {
    double r;
    double delta;
    double beta;
};

/// F(t,T) = exp(-r t^alpha (1-e^{-gamma T})/gamma), defined for t > 0.
struct CrdiCadi {
    double r;
    double alpha;
    double gamma;
};

/// Two-variable form of the generalized hyperbola:
/// F(t,T) = [(1 + alpha t)/(1 + alpha (t+T))]^{beta/alpha}.
struct Hyperbolic {
    double alpha; // per day, > 0
    double beta;  // per day, > 0
};

/// Constant-rate baseline, F(t,T) = e^{-beta T}; no t-dependence.
struct Exponential {
    double beta; // per day, > 0
};

using DiscountModel =
    std::variant<CadiCadi, CrdiCrdi, CadiCrdi, CrdiCadi, Hyperbolic, Exponential>;

enum class Family { CadiCadi, CrdiCrdi, CadiCrdi, CrdiCadi, Hyperbolic, Exponential };

Family family_of(const DiscountModel& model);
std::string_view family_name(Family family);            // "cadi-cadi", ...
Family family_from_name(std::string_view name);          // throws ParseError
std::size_t parameter_count(Family family);
std::vector<std::string> parameter_names(Family family); // {"r","delta","gamma"}, ...
std::vector<double> parameters_of(const DiscountModel& model);
DiscountModel make_model(Family family, std::span<const double> params);

/// True if the family takes a power of t and needs the epsilon substitution at t = 0.
bool uses_epsilon_at_zero(Family family);

/// ln F(t,T). Preferred over log(evaluate(...)) wherever ratios or
/// derivatives of ln F are needed: it never underflows for strongly
/// discounted regions.
///
/// Throws NonFiniteError if the closed-form exponent overflows or is NaN,
/// InvalidParamsError at the excluded value beta = -1, DomainError for
/// negative or non-finite (t,T).
double log_evaluate(const DiscountModel& model, TimePoint p, EpsilonPolicy eps = {});

/// F(t,T) = exp(log_evaluate(...)), in (0,1] for theory-valid parameters.
double evaluate(const DiscountModel& model, TimePoint p, EpsilonPolicy eps = {});

/// Calendar-time form: weight of an outcome at t2 relative to one at t1,
/// equal to evaluate at (t1, t2-t1). Throws OrderViolationError if t2 < t1.
double evaluate_eta(const DiscountModel& model, double t1, double t2, EpsilonPolicy eps = {});

/// amount * F(t,T); amount must be >= 0.
double present_value(const DiscountModel& model, double amount, TimePoint p,
                     EpsilonPolicy eps = {});

/// Sign/domain constraints per family. Violations are reported, never
/// rejected: fitted parameters may legitimately land outside the theory
/// region and must stay representable.
struct ValidityReport {
    bool theory_valid = true;
    std::vector<std::string> violations;
};

ValidityReport validate(const DiscountModel& model);

// JSON form: { "family": "<name>", "params": { ... } }
void to_json(nlohmann::json& j, const DiscountModel& model);
void from_json(const nlohmann::json& j, DiscountModel& model);

DiscountModel model_from_json_text(const std::string& text); // throws ParseError
std::string model_to_json_text(const DiscountModel& model);

} // namespace tempodisc

#endif // TEMPODISC_DISCOUNT_HPP
