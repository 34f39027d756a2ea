#include "tempodisc/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

namespace tempodisc {

namespace {

constexpr double kTiny = 1e-300;

// Deterministic uniforms: the engine's output sequence is pinned by the
// standard, the distribution mapping is ours.
class Sampler {
public:
    Sampler(std::uint64_t seed, Axiom axiom)
        : eng_(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(axiom) * 7919u + 1u) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // ordered pair with a minimum gap so strict comparisons are meaningful
    std::pair<double, double> ordered_pair(double lo, double hi) {
        double a = log_uniform(lo, hi);
        double b = log_uniform(lo, hi);
        if (a > b) std::swap(a, b);
        if (b - a < 0.01) b = std::min(hi, a + 0.01 + (hi - lo) * 0.05);
        return {a, b};
    }

private:
    std::mt19937_64 eng_;
};

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    return v;
}

struct Worst {
    double violation = 0.0;
    std::vector<std::pair<std::string, double>> witness;

    void offer(double v, std::initializer_list<std::pair<std::string, double>> w) {
        if (witness.empty() || v > violation) {
            violation = v;
            witness.assign(w);
        }
    }
};

double relative_gap(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), kTiny});
}

// Monotone bisection for g(x) = target on [lo, hi]; assumes the sign of
// g(hi) - g(lo) brackets the target. Runs to coordinate exhaustion, well
// past the 1e-12 residual the ratio checks need.
double bisect_monotone(const std::function<double(double)>& g, double lo, double hi,
                       double target, bool increasing) {
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = g(mid);
        const bool below = increasing ? (v < target) : (v > target);
        if (below)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::string_view axiom_name(Axiom a) {
    switch (a) {
        case Axiom::A1: return "A1";
        case Axiom::A2: return "A2";
        case Axiom::A3: return "A3";
        case Axiom::A3p: return "A3'";
        case Axiom::A4: return "A4";
        case Axiom::A4p: return "A4'";
        case Axiom::A5: return "A5";
        case Axiom::A5p: return "A5'";
        case Axiom::A6: return "A6";
        case Axiom::A7: return "A7";
    }
    return "?";
}

double solve_geometric_third(const LogSurface& log_f, double fixed, double first, double second,
                             Axis axis, double horizon) {
    if (second < first) throw DomainError("solve_geometric_third requires first <= second");
    auto g = [&](double x) {
        return axis == Axis::Interval ? log_f(fixed, x) : log_f(x, fixed);
    };
    if (first == second) return second;
    const double target = 2.0 * g(second) - g(first);
    const double at_horizon = g(horizon);
    // decreasing in T, increasing in t: either way the third point lies in
    // [second, horizon] iff the target is on the horizon side of g(second)
    const bool increasing = axis == Axis::Delay;
    const bool attainable = increasing ? (target <= at_horizon) : (target >= at_horizon);
    if (!attainable)
        throw BracketFailureError("geometric third point not attained before the horizon");
    return bisect_monotone(g, second, horizon, target, increasing);
}

std::pair<AxiomReport, AxiomReport> check_monotonicity(const LogSurface& log_f,
                                                       const AxiomCheckConfig& cfg) {
    AxiomReport a1{Axiom::A1}, a2{Axiom::A2};

    // A1: ln F strictly decreasing in T
    {
        Sampler rng(cfg.seed, Axiom::A1);
        Worst worst;
        double worst_diff = -std::numeric_limits<double>::infinity();
        int tested = 0;
        auto probe = [&](double t, double T1, double T2) {
            const double diff = log_f(t, T2) - log_f(t, T1); // must be < 0
            ++tested;
            if (diff > worst_diff) worst_diff = diff;
            worst.offer(std::max(diff, 0.0), {{"t", t}, {"T1", T1}, {"T2", T2}});
        };
        const auto ts = linspace(cfg.t_min, cfg.t_max, cfg.grid_count);
        const auto Ts = linspace(cfg.T_min, cfg.T_max, cfg.grid_count);
        for (double t : ts)
            for (std::size_t i = 0; i < Ts.size(); ++i)
                for (std::size_t j = i + 1; j < Ts.size(); ++j) probe(t, Ts[i], Ts[j]);
        for (int k = 0; k < cfg.random_samples; ++k) {
            const double t = rng.log_uniform(cfg.t_min, cfg.t_max);
            auto [T1, T2] = rng.ordered_pair(cfg.T_min, cfg.T_max);
            probe(t, T1, T2);
        }
        a1.pass = tested > 0 && worst_diff < 0.0;
        a1.worst_violation = worst.violation;
        a1.witness = std::move(worst.witness);
        a1.samples_tested = tested;
    }

    // A2: ln F strictly increasing in t
    {
        Sampler rng(cfg.seed, Axiom::A2);
        Worst worst;
        double worst_diff = -std::numeric_limits<double>::infinity();
        int tested = 0;
        auto probe = [&](double T, double t1, double t2) {
            const double diff = log_f(t1, T) - log_f(t2, T); // must be < 0
            ++tested;
            if (diff > worst_diff) worst_diff = diff;
            worst.offer(std::max(diff, 0.0), {{"T", T}, {"t1", t1}, {"t2", t2}});
        };
        const auto Ts = linspace(cfg.T_min, cfg.T_max, cfg.grid_count);
        const auto ts = linspace(cfg.t_min, cfg.t_max, cfg.grid_count);
        for (double T : Ts)
            for (std::size_t i = 0; i < ts.size(); ++i)
                for (std::size_t j = i + 1; j < ts.size(); ++j) probe(T, ts[i], ts[j]);
        for (int k = 0; k < cfg.random_samples; ++k) {
            const double T = rng.log_uniform(cfg.T_min, cfg.T_max);
            auto [t1, t2] = rng.ordered_pair(cfg.t_min, cfg.t_max);
            probe(T, t1, t2);
        }
        a2.pass = tested > 0 && worst_diff < 0.0;
        a2.worst_violation = worst.violation;
        a2.witness = std::move(worst.witness);
        a2.samples_tested = tested;
    }

    return {a1, a2};
}

AxiomReport check_ratio_axiom(const LogSurface& log_f, Axiom which, const AxiomCheckConfig& cfg) {
    const bool interval_axis = which == Axiom::A3 || which == Axiom::A3p;
    const bool multiplicative = which == Axiom::A3p || which == Axiom::A4p;
    const auto& shifts = multiplicative ? cfg.multiplicative_shifts : cfg.additive_shifts;
    const Axis axis = interval_axis ? Axis::Interval : Axis::Delay;

    AxiomReport report{which};
    Worst worst;
    Sampler rng(cfg.seed, which);

    const double pair_lo = interval_axis ? cfg.T_min : cfg.t_min;
    const double pair_hi = interval_axis ? cfg.T_max : cfg.t_max;
    const double fixed_lo = interval_axis ? cfg.t_min : cfg.T_min;
    const double fixed_hi = interval_axis ? cfg.t_max : cfg.T_max;

    auto evaluate_sample = [&](double fixed, double first, double second) {
        // Build the premise exactly: shrink the middle point toward the first
        // until the geometric third point is bracketed, then test the
        // conclusion under every shift.
        double mid = second;
        double third = -1.0;
        bool ok = false;
        for (int attempt = 0; attempt < 25; ++attempt) {
            try {
                third = solve_geometric_third(log_f, fixed, first, mid, axis, cfg.horizon);
                ok = true;
                break;
            } catch (const BracketFailureError&) {
                mid = first + 0.5 * (mid - first);
                if (mid - first < 1e-6 * std::max(first, 1.0)) break;
            }
        }
        if (!ok) {
            report.samples_skipped += static_cast<int>(shifts.size());
            return;
        }
        auto at = [&](double x) {
            return axis == Axis::Interval ? log_f(fixed, x) : log_f(x, fixed);
        };
        for (double shift : shifts) {
            const double p1 = multiplicative ? first * shift : first + shift;
            const double p2 = multiplicative ? mid * shift : mid + shift;
            const double p3 = multiplicative ? third * shift : third + shift;
            const double d1 = at(p1) - at(p2);
            const double d2 = at(p2) - at(p3);
            const double v = relative_gap(d1, d2);
            ++report.samples_tested;
            worst.offer(v, {{"fixed", fixed},
                            {"first", first},
                            {"second", mid},
                            {"third", third},
                            {"shift", shift}});
        }
    };

    const auto fixed_grid = linspace(fixed_lo, fixed_hi, cfg.grid_count);
    const auto pair_grid = linspace(pair_lo, pair_hi, cfg.grid_count);
    for (double fixed : fixed_grid)
        for (std::size_t i = 0; i < pair_grid.size(); ++i)
            for (std::size_t j = i + 1; j < pair_grid.size(); ++j)
                evaluate_sample(fixed, pair_grid[i], pair_grid[j]);
    for (int k = 0; k < cfg.random_samples; ++k) {
        const double fixed = rng.log_uniform(fixed_lo, fixed_hi);
        auto [first, second] = rng.ordered_pair(pair_lo, pair_hi);
        evaluate_sample(fixed, first, second);
    }

    report.pass = report.samples_tested > 0 && worst.violation < cfg.tolerance;
    report.worst_violation = worst.violation;
    report.witness = std::move(worst.witness);
    return report;
}

AxiomReport check_total_delay(const LogSurface& log_f, Axiom which, const AxiomCheckConfig& cfg) {
    const bool multiplicative = which == Axiom::A5p;
    const auto& shifts = multiplicative ? cfg.multiplicative_shifts : cfg.additive_shifts;

    AxiomReport report{which};
    Worst worst;
    Sampler rng(cfg.seed, which);

    auto evaluate_sample = [&](double t1, double T1, double T2_in) {
        // Find t2 with F(t2,T2) = F(t1,T1); shrink T2 toward T1 when the
        // level set does not cross the probed t-range.
        double T2 = T2_in;
        const double target = log_f(t1, T1);
        double t2 = -1.0;
        bool ok = false;
        for (int attempt = 0; attempt < 25; ++attempt) {
            const double lo_v = log_f(cfg.t_floor, T2);
            const double hi_v = log_f(cfg.horizon, T2);
            if (target >= lo_v && target <= hi_v) {
                t2 = bisect_monotone([&](double t) { return log_f(t, T2); }, cfg.t_floor,
                                     cfg.horizon, target, /*increasing=*/true);
                ok = true;
                break;
            }
            T2 = T1 + 0.5 * (T2 - T1);
            if (std::abs(T2 - T1) < 1e-6) break;
        }
        if (!ok) {
            report.samples_skipped += static_cast<int>(shifts.size());
            return;
        }
        for (double shift : shifts) {
            const double l1 =
                multiplicative ? log_f(t1 * shift, T1) : log_f(t1 + shift, T1);
            const double l2 =
                multiplicative ? log_f(t2 * shift, T2) : log_f(t2 + shift, T2);
            const double v = relative_gap(l1, l2);
            ++report.samples_tested;
            worst.offer(v, {{"t1", t1}, {"T1", T1}, {"t2", t2}, {"T2", T2}, {"shift", shift}});
        }
    };

    const auto ts = linspace(cfg.t_min, cfg.t_max, cfg.grid_count);
    const auto Ts = linspace(cfg.T_min, cfg.T_max, cfg.grid_count);
    for (double t : ts)
        for (std::size_t i = 0; i < Ts.size(); ++i)
            for (std::size_t j = 0; j < Ts.size(); ++j)
                if (i != j) evaluate_sample(t, Ts[i], Ts[j]);
    for (int k = 0; k < cfg.random_samples; ++k) {
        const double t1 = rng.log_uniform(cfg.t_min, cfg.t_max);
        const double T1 = rng.log_uniform(cfg.T_min, cfg.T_max);
        const double T2 = rng.log_uniform(cfg.T_min, cfg.T_max);
        evaluate_sample(t1, T1, T2);
    }

    report.pass = report.samples_tested > 0 && worst.violation < cfg.tolerance;
    report.worst_violation = worst.violation;
    report.witness = std::move(worst.witness);
    return report;
}

std::pair<AxiomReport, AxiomReport> check_boundary(const LogSurface& log_f,
                                                   const AxiomCheckConfig& cfg) {
    AxiomReport a6{Axiom::A6}, a7{Axiom::A7};

    {
        Sampler rng(cfg.seed, Axiom::A6);
        Worst worst;
        auto probe = [&](double t) {
            const double v = std::abs(std::expm1(log_f(t, 0.0)));
            ++a6.samples_tested;
            worst.offer(v, {{"t", t}});
        };
        for (double t : linspace(cfg.t_min, cfg.t_max, cfg.grid_count)) probe(t);
        for (int k = 0; k < cfg.random_samples; ++k)
            probe(rng.log_uniform(cfg.t_min, cfg.t_max));
        a6.pass = worst.violation < 1e-12;
        a6.worst_violation = worst.violation;
        a6.witness = std::move(worst.witness);
    }

    {
        // Limit toward 1 probed along decades of t: either the surface is
        // already within 1e-4 of 1 at the horizon, or the remaining distance
        // contracts by at least 1% per decade (power-law approaches never hit
        // an absolute threshold at a finite horizon). The approach must also
        // be monotone.
        Sampler rng(cfg.seed, Axiom::A7);
        Worst worst;
        bool all_pass = true;
        auto probe = [&](double T) {
            const double u0 = -log_f(cfg.horizon, T);
            const double u1 = -log_f(cfg.horizon / 10.0, T);
            const double u2 = -log_f(cfg.horizon / 100.0, T);
            ++a7.samples_tested;
            const double slack = 1e-12 * std::max(u2, 1.0);
            const bool monotone = u0 <= u1 + slack && u1 <= u2 + slack;
            const bool near_one = u0 <= 1.0001e-4;
            const bool contracting =
                u1 > kTiny && u2 > kTiny && u0 <= 0.99 * u1 && u1 <= 0.99 * u2;
            const bool pass = monotone && (near_one || contracting);
            double violation = 0.0;
            if (!monotone)
                violation = std::max(violation,
                                     std::max(u0 - u1, u1 - u2) / std::max(u2, kTiny));
            if (!(near_one || contracting)) {
                const double q = u1 > kTiny ? std::max(u0 / u1, u2 > kTiny ? u1 / u2 : 1.0) : 1.0;
                violation = std::max(violation, q - 0.99);
            }
            if (!pass) all_pass = false;
            worst.offer(violation, {{"T", T}, {"u_horizon", u0}, {"u_decade", u1}});
        };
        for (double T : linspace(cfg.T_min, cfg.T_max, cfg.grid_count)) probe(T);
        for (int k = 0; k < std::min(cfg.random_samples, 20); ++k)
            probe(rng.log_uniform(cfg.T_min, cfg.T_max));
        a7.pass = a7.samples_tested > 0 && all_pass;
        a7.worst_violation = worst.violation;
        a7.witness = std::move(worst.witness);
    }

    return {a6, a7};
}

std::vector<Axiom> bundle_axioms(char label) {
    switch (label) {
        case 'a':
            return {Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A5, Axiom::A6, Axiom::A7};
        case 'b':
            return {Axiom::A1, Axiom::A2, Axiom::A3p, Axiom::A4p, Axiom::A5p, Axiom::A6,
                    Axiom::A7};
        case 'c':
            return {Axiom::A1, Axiom::A2, Axiom::A3p, Axiom::A4, Axiom::A5, Axiom::A6, Axiom::A7};
        case 'd':
            return {Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4p, Axiom::A5p, Axiom::A6,
                    Axiom::A7};
        default: throw DomainError("bundle label must be one of a, b, c, d");
    }
}

char bundle_label(Family family) {
    switch (family) {
        case Family::CadiCadi: return 'a';
        case Family::CrdiCrdi: return 'b';
        case Family::CadiCrdi: return 'c';
        case Family::CrdiCadi: return 'd';
        default: throw DomainError("baseline families have no axiom bundle");
    }
}

Classification classify(const LogSurface& log_f, const AxiomCheckConfig& cfg) {
    Classification out;
    auto [a1, a2] = check_monotonicity(log_f, cfg);
    out.reports[Axiom::A1] = std::move(a1);
    out.reports[Axiom::A2] = std::move(a2);
    for (Axiom ax : {Axiom::A3, Axiom::A3p, Axiom::A4, Axiom::A4p})
        out.reports[ax] = check_ratio_axiom(log_f, ax, cfg);
    for (Axiom ax : {Axiom::A5, Axiom::A5p})
        out.reports[ax] = check_total_delay(log_f, ax, cfg);
    auto [a6, a7] = check_boundary(log_f, cfg);
    out.reports[Axiom::A6] = std::move(a6);
    out.reports[Axiom::A7] = std::move(a7);

    const char labels[4] = {'a', 'b', 'c', 'd'};
    for (int i = 0; i < 4; ++i) {
        BundleVerdict verdict;
        verdict.label = labels[i];
        verdict.satisfied = true;
        for (Axiom ax : bundle_axioms(labels[i])) {
            if (!out.reports.at(ax).pass) {
                verdict.satisfied = false;
                verdict.failing.push_back(ax);
            }
        }
        if (verdict.satisfied) out.satisfied.push_back(labels[i]);
        out.bundles[static_cast<std::size_t>(i)] = std::move(verdict);
    }
    return out;
}

Classification classify(const DiscountModel& model, const AxiomCheckConfig& cfg,
                        EpsilonPolicy eps) {
    return classify(log_surface(model, eps), cfg);
}

void to_json(nlohmann::json& j, const AxiomReport& report) {
    nlohmann::json witness = nlohmann::json::object();
    for (const auto& [key, value] : report.witness) witness[key] = value;
    j = nlohmann::json{{"axiom", axiom_name(report.axiom)},
                       {"pass", report.pass},
                       {"worstViolation", report.worst_violation},
                       {"samplesTested", report.samples_tested},
                       {"samplesSkipped", report.samples_skipped},
                       {"witness", std::move(witness)}};
}

void to_json(nlohmann::json& j, const Classification& c) {
    nlohmann::json axioms = nlohmann::json::array();
    for (const auto& [ax, report] : c.reports) {
        nlohmann::json jr;
        to_json(jr, report);
        axioms.push_back(std::move(jr));
    }
    nlohmann::json bundles = nlohmann::json::object();
    for (const auto& b : c.bundles) {
        nlohmann::json failing = nlohmann::json::array();
        for (Axiom ax : b.failing) failing.push_back(axiom_name(ax));
        bundles[std::string(1, b.label)] =
            nlohmann::json{{"satisfied", b.satisfied}, {"failingAxioms", std::move(failing)}};
    }
    std::string verdict;
    for (char c2 : c.satisfied) {
        if (!verdict.empty()) verdict += ",";
        verdict += c2;
    }
    j = nlohmann::json{
        {"axioms", std::move(axioms)}, {"bundles", std::move(bundles)}, {"verdict", verdict}};
}

} // namespace tempodisc
