#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "tempodisc/axioms.hpp"

using namespace tempodisc;

namespace {

const CadiCadi kCadiCadi{0.0076, 0.00017, 0.0124};
const CrdiCrdi kCrdiCrdi{0.0320, -0.1344, -0.4446};
const CadiCrdi kCadiCrdi{0.0122, 0.00017, -0.2966};
const CrdiCadi kCrdiCadi{0.0200, -0.15, 0.0548};

AxiomCheckConfig fast_config() {
    AxiomCheckConfig cfg;
    cfg.random_samples = 40;
    return cfg;
}

} // namespace

TEST_CASE("geometric third point: log-linear surface gives an arithmetic progression") {
    const LogSurface f{[](double, double T) { return -0.01 * T; }};
    CHECK(solve_geometric_third(f, 1.0, 10, 20, Axis::Interval) == doctest::Approx(30).epsilon(1e-10));
    CHECK(solve_geometric_third(f, 1.0, 15, 15, Axis::Interval) == 15.0);
}

TEST_CASE("geometric third point agrees with the closed-form inversion") {
    // for ln F = -c (1-e^{-g T})/g the progression premise solves to
    // T3 = -ln(2 e^{-g T2} - e^{-g T1}) / g
    const LogSurface f = log_surface(kCadiCadi);
    const double g = 0.0124;
    const double T1 = 10, T2 = 20, t = 0;
    const double expected = -std::log(2 * std::exp(-g * T2) - std::exp(-g * T1)) / g;
    const double solved = solve_geometric_third(f, t, T1, T2, Axis::Interval);
    CHECK(std::abs(solved - expected) / expected < 1e-9);
}

TEST_CASE("geometric third point reports unreachable targets") {
    // strong interval decay bounds ln F below; a wide pair is unreachable
    const LogSurface f = log_surface(kCrdiCadi);
    CHECK_THROWS_AS(solve_geometric_third(f, 1.0, 5, 200, Axis::Interval), BracketFailureError);
}

TEST_CASE("monotonicity checks") {
    const AxiomCheckConfig cfg = fast_config();
    auto [a1, a2] = check_monotonicity(log_surface(kCadiCadi), cfg);
    CHECK(a1.pass);
    CHECK(a2.pass);

    // positive alpha: F decreasing in t
    auto [b1, b2] = check_monotonicity(log_surface(CrdiCadi{0.0200, +0.0635, 0.0548}), cfg);
    CHECK(b1.pass);
    CHECK_FALSE(b2.pass);
    CHECK(b2.worst_violation > 1e-3);
    CHECK_FALSE(b2.witness.empty());

    // constant surface fails both (nothing strict about it)
    const LogSurface flat{[](double, double) { return 0.0; }};
    auto [c1, c2] = check_monotonicity(flat, cfg);
    CHECK_FALSE(c1.pass);
    CHECK_FALSE(c2.pass);
    CHECK(c1.worst_violation == 0.0);
}

TEST_CASE("ratio axioms separate additive from multiplicative families") {
    const AxiomCheckConfig cfg = fast_config();

    const LogSurface cc = log_surface(kCadiCadi);
    CHECK(check_ratio_axiom(cc, Axiom::A3, cfg).pass);
    CHECK(check_ratio_axiom(cc, Axiom::A3, cfg).worst_violation < 1e-9);
    const AxiomReport cc3p = check_ratio_axiom(cc, Axiom::A3p, cfg);
    CHECK_FALSE(cc3p.pass);
    CHECK(cc3p.worst_violation > 1e-3);
    CHECK(check_ratio_axiom(cc, Axiom::A4, cfg).pass);
    CHECK_FALSE(check_ratio_axiom(cc, Axiom::A4p, cfg).pass);

    const LogSurface rr = log_surface(kCrdiCrdi);
    CHECK(check_ratio_axiom(rr, Axiom::A3p, cfg).pass);
    CHECK(check_ratio_axiom(rr, Axiom::A4p, cfg).pass);
    const AxiomReport rr3 = check_ratio_axiom(rr, Axiom::A3, cfg);
    CHECK_FALSE(rr3.pass);
    CHECK(rr3.worst_violation > 1e-3);

    // gamma = 0 is log-linear in T: both interval conditions hold
    const LogSurface flat_T = log_surface(CadiCadi{0.01, 0.001, 0.0});
    CHECK(check_ratio_axiom(flat_T, Axiom::A3, cfg).pass);
    CHECK(check_ratio_axiom(flat_T, Axiom::A3p, cfg).pass);
}

TEST_CASE("ratio axiom samples are evaluable under strong decay") {
    // the shrink-retry keeps the premise solvable for gamma = 0.0548
    const AxiomCheckConfig cfg = fast_config();
    const AxiomReport rc3 = check_ratio_axiom(log_surface(kCrdiCadi), Axiom::A3, cfg);
    CHECK(rc3.samples_tested > 100);
    CHECK(rc3.pass);
    const AxiomReport rc3p = check_ratio_axiom(log_surface(kCrdiCadi), Axiom::A3p, cfg);
    CHECK_FALSE(rc3p.pass);
    CHECK(rc3p.worst_violation > 1e-3);
}

TEST_CASE("total delay conditions follow the delay coordinate's type") {
    const AxiomCheckConfig cfg = fast_config();

    const LogSurface cc = log_surface(kCadiCadi);
    CHECK(check_total_delay(cc, Axiom::A5, cfg).pass);
    const AxiomReport cc5p = check_total_delay(cc, Axiom::A5p, cfg);
    CHECK_FALSE(cc5p.pass);
    CHECK(cc5p.worst_violation > 1e-3);
    CHECK_FALSE(cc5p.witness.empty());

    const LogSurface rr = log_surface(kCrdiCrdi);
    CHECK(check_total_delay(rr, Axiom::A5p, cfg).pass);
    const AxiomReport rr5 = check_total_delay(rr, Axiom::A5, cfg);
    CHECK_FALSE(rr5.pass);
    CHECK(rr5.worst_violation > 1e-3);
}

TEST_CASE("identity shifts pass trivially") {
    AxiomCheckConfig cfg = fast_config();
    cfg.additive_shifts = {0.0};
    cfg.multiplicative_shifts = {1.0};
    for (Axiom ax : {Axiom::A5, Axiom::A5p}) {
        const AxiomReport r = check_total_delay(log_surface(kCrdiCrdi), ax, cfg);
        CHECK(r.pass);
        CHECK(r.worst_violation < 1e-10);
    }
}

TEST_CASE("boundary checks: zero interval and the t -> infinity limit") {
    const AxiomCheckConfig cfg = fast_config();
    for (const DiscountModel model :
         {DiscountModel{kCadiCadi}, DiscountModel{kCrdiCrdi}, DiscountModel{kCadiCrdi},
          DiscountModel{kCrdiCadi}}) {
        auto [a6, a7] = check_boundary(log_surface(model), cfg);
        CHECK(a6.pass);
        CHECK(a7.pass);
    }
    // hyperbolic approaches 1 in t; exponential never moves in t
    auto [h6, h7] = check_boundary(log_surface(Hyperbolic{0.0167, 0.0255}), cfg);
    CHECK(h6.pass);
    CHECK(h7.pass);
    auto [e6, e7] = check_boundary(log_surface(Exponential{0.0587}), cfg);
    CHECK(e6.pass);
    CHECK_FALSE(e7.pass);
    CHECK(e7.worst_violation > 1e-3);
}

TEST_CASE("classification lands on the right bundle") {
    const AxiomCheckConfig cfg = fast_config();
    const Classification cc = classify(DiscountModel{kCadiCadi}, cfg);
    CHECK(cc.satisfied == std::vector<char>{'a'});
    const Classification cr = classify(DiscountModel{kCadiCrdi}, cfg);
    CHECK(cr.satisfied == std::vector<char>{'c'});
}

TEST_CASE("gamma = 0 satisfies the overlapping bundles and hides nothing") {
    const AxiomCheckConfig cfg = fast_config();
    const Classification c = classify(DiscountModel{CadiCadi{0.01, 0.001, 0.0}}, cfg);
    // log-linear in T is simultaneously the beta = 0 power family
    CHECK(c.satisfied == std::vector<char>{'a', 'c'});
}

TEST_CASE("reports are deterministic given the seed") {
    const AxiomCheckConfig cfg = fast_config();
    nlohmann::json a, b;
    to_json(a, classify(DiscountModel{kCrdiCrdi}, cfg));
    to_json(b, classify(DiscountModel{kCrdiCrdi}, cfg));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("bundle metadata") {
    CHECK(bundle_label(Family::CadiCadi) == 'a');
    CHECK(bundle_label(Family::CrdiCrdi) == 'b');
    CHECK(bundle_label(Family::CadiCrdi) == 'c');
    CHECK(bundle_label(Family::CrdiCadi) == 'd');
    CHECK_THROWS_AS(bundle_label(Family::Exponential), DomainError);
    CHECK(bundle_axioms('a') ==
          std::vector<Axiom>{Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A5, Axiom::A6,
                             Axiom::A7});
    CHECK_THROWS_AS(bundle_axioms('x'), DomainError);
}
