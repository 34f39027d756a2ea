#ifndef TEMPODISC_AXIOMS_HPP
#define TEMPODISC_AXIOMS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tempodisc/discount.hpp"
#include "tempodisc/impatience.hpp"

namespace tempodisc {

// Numeric falsification harness for the structural axioms of a two-variable
// discount surface. The axioms quantify over all reals; the harness checks
// seeded random and structured samples and reports the worst violation
// found, so a pass is evidence, not proof, while any reported violation is a
// concrete counterexample.
//
//   A1  F strictly decreasing in T            A2  F strictly increasing in t
//   A3  additive-in-T ratio condition         A3' multiplicative-in-T
//   A4  additive-in-t ratio condition         A4' multiplicative-in-t
//   A5  additive total-delay condition        A5' multiplicative total-delay
//   A6  F(t,0) = 1                            A7  F(t,T) -> 1 as t -> inf

enum class Axiom { A1, A2, A3, A3p, A4, A4p, A5, A5p, A6, A7 };

std::string_view axiom_name(Axiom a); // "A1", ..., "A3'", ...

struct AxiomCheckConfig {
    double t_min = 1.0, t_max = 400.0;
    double T_min = 5.0, T_max = 300.0;
    int grid_count = 4;                            // structured points per coordinate
    std::vector<double> additive_shifts{2, 5, 10}; // rho/sigma for A3, A4, A5
    std::vector<double> multiplicative_shifts{2, 3};
    double tolerance = 1e-7;  // relative, in ln F space
    std::uint64_t seed = 42;
    int random_samples = 200; // per axiom, in addition to the structured grid
    double horizon = 1e5;     // days, for A7 and bracketing searches
    double t_floor = 1e-3;    // smallest delay probed (power-of-t domains)
};

struct AxiomReport {
    Axiom axiom = Axiom::A1;
    bool pass = false;
    double worst_violation = 0.0;
    // coordinates of the worst sample, e.g. {"t",...},{"T1",...}; empty if
    // nothing was evaluable
    std::vector<std::pair<std::string, double>> witness;
    int samples_tested = 0;
    int samples_skipped = 0; // bracket failures, counted not fatal
};

enum class Axis { Delay, Interval };

/// Solves for the third coordinate of a geometric ratio premise: the point
/// where ln F equals 2 ln F(second) - ln F(first) along one axis, by
/// bisection on [second, horizon]. `fixed` is the other coordinate (t for
/// the interval axis, T for the delay axis). Throws BracketFailureError when
/// the target lies outside the surface's reachable range.
double solve_geometric_third(const LogSurface& log_f, double fixed, double first, double second,
                             Axis axis, double horizon = 1e5);

std::pair<AxiomReport, AxiomReport> check_monotonicity(const LogSurface& log_f,
                                                       const AxiomCheckConfig& cfg);
AxiomReport check_ratio_axiom(const LogSurface& log_f, Axiom which, const AxiomCheckConfig& cfg);
AxiomReport check_total_delay(const LogSurface& log_f, Axiom which, const AxiomCheckConfig& cfg);
std::pair<AxiomReport, AxiomReport> check_boundary(const LogSurface& log_f,
                                                   const AxiomCheckConfig& cfg);

/// The axiom bundle characterizing each family: exponential decay in a
/// coordinate pairs with the additive condition there, power-law decay with
/// the multiplicative one, and the total-delay condition follows the
/// t-coordinate's type.
///   (a) cadi-cadi:  A1 A2 A3  A4  A5  A6 A7
///   (b) crdi-crdi:  A1 A2 A3' A4' A5' A6 A7
///   (c) cadi-crdi:  A1 A2 A3' A4  A5  A6 A7
///   (d) crdi-cadi:  A1 A2 A3  A4' A5' A6 A7
std::vector<Axiom> bundle_axioms(char label);
char bundle_label(Family family); // 'a'..'d'; throws DomainError for baselines

struct BundleVerdict {
    char label = '?';
    bool satisfied = false;
    std::vector<Axiom> failing;
};

struct Classification {
    std::map<Axiom, AxiomReport> reports;
    std::array<BundleVerdict, 4> bundles; // a, b, c, d
    std::vector<char> satisfied;          // labels of all satisfied bundles
};

/// Runs every check and reports which bundles the surface satisfies.
/// Degenerate surfaces (e.g. gamma = 0) may satisfy several.
Classification classify(const LogSurface& log_f, const AxiomCheckConfig& cfg);
Classification classify(const DiscountModel& model, const AxiomCheckConfig& cfg,
                        EpsilonPolicy eps = {});

void to_json(nlohmann::json& j, const AxiomReport& report);
void to_json(nlohmann::json& j, const Classification& c);

} // namespace tempodisc

#endif // TEMPODISC_AXIOMS_HPP
