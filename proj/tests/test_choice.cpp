#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tempodisc/choice.hpp"

using namespace tempodisc;

namespace {

const CadiCadi kCadiCadi{0.0076, 0.00017, 0.0124};

bool near(double a, double b, double tol) { return std::abs(a - b) < tol; }

bool same_records(const std::vector<ChoiceRecord>& a, const std::vector<ChoiceRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].subject_id != b[i].subject_id) return false;
        if (a[i].chose_sooner != b[i].chose_sooner) return false;
        const Tradeoff &x = a[i].tradeoff, &y = b[i].tradeoff;
        if (x.x != y.x || x.y != y.y || x.t != y.t || x.T != y.T) return false;
    }
    return true;
}

} // namespace

TEST_CASE("the default design is 43 valid items with dominance checks") {
    const QuestionnaireDesign design = QuestionnaireDesign::default_design();
    REQUIRE(design.items.size() == 43);
    int dominance = 0;
    for (const Tradeoff& tr : design.items) {
        validate_tradeoff(tr);
        CHECK(tr.x >= 80);
        CHECK(tr.y <= 300);
        CHECK(tr.t <= 365);
        CHECK(tr.T >= 7);
        CHECK(tr.T <= 365);
        if (tr.x == tr.y && tr.T > 0) ++dominance;
    }
    CHECK(dominance == 3);
    // the classic opening item
    CHECK(design.items.front().x == 95);
    CHECK(design.items.front().y == 100);
}

TEST_CASE("trade-off validation") {
    CHECK_THROWS_AS(validate_tradeoff({0, 100, 0, 7}), DomainError);
    CHECK_THROWS_AS(validate_tradeoff({100, 100, -1, 7}), DomainError);
    CHECK_THROWS_AS(validate_tradeoff({120, 100, 0, 7}), DomainError); // x > y with T > 0
    CHECK_NOTHROW(validate_tradeoff({120, 100, 5, 0}));               // same-time comparison
    CHECK_NOTHROW(validate_tradeoff({100, 100, 0, 30}));
}

TEST_CASE("choice probability pins the logistic to the discount surface") {
    // equal present values: a coin flip
    const double f = evaluate(kCadiCadi, {30, 90});
    CHECK(choice_probability(kCadiCadi, {100.0 * f, 100.0, 30, 90}) == 0.5);

    // 100 today vs 120 in a week: argument 100 - 120 F(0,7) = -14.04
    const double p_week = choice_probability(kCadiCadi, {100, 120, 0, 7});
    CHECK(near(p_week, 8.0e-7, 2e-8));

    // 100 today vs 120 in a year: argument flips to +34.55
    const double p_year = choice_probability(kCadiCadi, {100, 120, 0, 365});
    CHECK(p_year > 1.0 - 1e-14);
    CHECK(p_year < 1.0);
}

TEST_CASE("logistic symmetry: mirrored arguments sum to one") {
    const double f = evaluate(kCadiCadi, {0, 30});
    for (double x : {85.0, 90.0, 95.0}) {
        const double p = choice_probability(kCadiCadi, {x, 100, 0, 30});
        const double mirrored = 2.0 * 100.0 * f - x; // argument becomes -(x - yF)
        const double q = choice_probability(kCadiCadi, {mirrored, 100, 0, 30});
        CHECK(near(p + q, 1.0, 1e-12));
    }
}

TEST_CASE("probability rises with the interval, all else fixed") {
    double prev = 0.0;
    for (double T : {7.0, 30.0, 90.0, 180.0, 365.0}) {
        const double p = choice_probability(kCadiCadi, {95, 100, 10, T});
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("the temperature knob is off by default") {
    const Tradeoff tr{95, 100, 0, 30};
    CHECK(choice_probability(kCadiCadi, tr) ==
          choice_probability(kCadiCadi, tr, {}, 1.0));
    // a hotter logistic moves saturated probabilities toward 1/2
    const double cold = choice_probability(kCadiCadi, tr);
    const double hot = choice_probability(kCadiCadi, tr, {}, 20.0);
    CHECK(std::abs(hot - 0.5) < std::abs(cold - 0.5));
    CHECK_THROWS_AS(choice_probability(kCadiCadi, tr, {}, 0.0), DomainError);
}

TEST_CASE("residuals are observed minus predicted, in order") {
    const double f = evaluate(kCadiCadi, {30, 90});
    const Tradeoff coin{100.0 * f, 100.0, 30, 90};
    const std::vector<ChoiceRecord> data = {{"a", coin, true}, {"b", coin, false}};
    const auto r = residuals(kCadiCadi, data);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == 0.5);
    CHECK(r[1] == -0.5);
    CHECK_THROWS_AS(residuals(kCadiCadi, {}), EmptyDataError);
}

TEST_CASE("extreme separation predicts perfectly") {
    // amounts far from the frontier saturate the logistic; deterministic
    // choices then have vanishing residuals
    const QuestionnaireDesign design{{{80, 300, 0, 7}, {299, 300, 0, 365}}};
    const auto records = generate_choices(kCadiCadi, design, 3, 1, NoiseMode::Deterministic);
    const auto r = residuals(kCadiCadi, records);
    for (double v : r) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("the dominance item keeps a sooner-leaning residual") {
    const Tradeoff dom{100, 100, 0, 30};
    const double p = choice_probability(kCadiCadi, dom);
    const std::vector<ChoiceRecord> data = {{"s", dom, true}};
    const auto r = residuals(kCadiCadi, data);
    CHECK(r[0] == 1.0 - p);
    CHECK(p > 0.5); // x = y F < x: waiting is dominated
}

TEST_CASE("deterministic generation breaks the tie toward later") {
    const double f = evaluate(kCadiCadi, {30, 90});
    const QuestionnaireDesign design{{{100.0 * f, 100.0, 30, 90}}};
    const auto records = generate_choices(kCadiCadi, design, 1, 9, NoiseMode::Deterministic);
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].chose_sooner);
}

TEST_CASE("deterministic choices switch exactly where y F crosses x") {
    const QuestionnaireDesign design = QuestionnaireDesign::default_design();
    const auto records = generate_choices(kCadiCadi, design, 1, 5, NoiseMode::Deterministic);
    for (std::size_t i = 0; i < design.items.size(); ++i) {
        const Tradeoff& tr = design.items[i];
        const bool expect = tr.x > tr.y * evaluate(kCadiCadi, {tr.t, tr.T});
        CHECK(records[i].chose_sooner == expect);
    }
}

TEST_CASE("bernoulli draws hit the coin-flip share at scale") {
    const double f = evaluate(kCadiCadi, {30, 90});
    const QuestionnaireDesign design{{{100.0 * f, 100.0, 30, 90}}};
    const auto records = generate_choices(kCadiCadi, design, 10000, 42, NoiseMode::Bernoulli);
    double share = 0.0;
    for (const auto& rec : records) share += rec.chose_sooner ? 1.0 : 0.0;
    share /= static_cast<double>(records.size());
    CHECK(share > 0.49);
    CHECK(share < 0.51);
}

TEST_CASE("generation is reproducible byte for byte") {
    const QuestionnaireDesign design = QuestionnaireDesign::default_design();
    const auto a = generate_choices(kCadiCadi, design, 20, 42, NoiseMode::Bernoulli);
    const auto b = generate_choices(kCadiCadi, design, 20, 42, NoiseMode::Bernoulli);
    CHECK(same_records(a, b));
    std::ostringstream sa, sb;
    write_choices_csv(sa, a);
    write_choices_csv(sb, b);
    CHECK(sa.str() == sb.str());
    // a different seed moves at least one choice
    const auto c = generate_choices(kCadiCadi, design, 20, 43, NoiseMode::Bernoulli);
    CHECK_FALSE(same_records(a, c));
}

TEST_CASE("consistency screen drops later-choosers on equal amounts") {
    const QuestionnaireDesign design = QuestionnaireDesign::default_design();
    std::vector<ChoiceRecord> data;
    const Tradeoff dom{100, 100, 0, 30};
    const Tradeoff normal{95, 100, 0, 7};
    data.push_back({"keep", dom, true});
    data.push_back({"keep", normal, false});
    data.push_back({"drop", dom, false});
    data.push_back({"drop", normal, true});
    const auto dropped = consistency_screen(data, design);
    CHECK(dropped == std::vector<std::string>{"drop"});

    CHECK(consistency_screen({}, design).empty());

    const QuestionnaireDesign no_dominance{{{95, 100, 0, 7}}};
    CHECK_THROWS_AS(consistency_screen(data, no_dominance), NoDominanceItemError);
}

TEST_CASE("choices CSV round-trips") {
    const QuestionnaireDesign design = QuestionnaireDesign::default_design();
    const auto records = generate_choices(kCadiCadi, design, 5, 42, NoiseMode::Bernoulli);
    std::ostringstream os;
    write_choices_csv(os, records);
    std::istringstream is(os.str());
    const auto back = read_choices_csv(is);
    CHECK(same_records(records, back));

    std::istringstream bad_header("a,b\n");
    CHECK_THROWS_AS(read_choices_csv(bad_header), ParseError);
    std::istringstream bad_flag("subject_id,x,y,t,T,chose_sooner\ns,95,100,0,7,2\n");
    CHECK_THROWS_AS(read_choices_csv(bad_flag), ParseError);
    std::istringstream bad_num("subject_id,x,y,t,T,chose_sooner\ns,95,abc,0,7,1\n");
    CHECK_THROWS_AS(read_choices_csv(bad_num), ParseError);
}

TEST_CASE("design CSV round-trips") {
    const QuestionnaireDesign design = QuestionnaireDesign::default_design();
    std::ostringstream os;
    write_design_csv(os, design);
    std::istringstream is(os.str());
    const QuestionnaireDesign back = read_design_csv(is);
    REQUIRE(back.items.size() == design.items.size());
    for (std::size_t i = 0; i < design.items.size(); ++i) {
        CHECK(back.items[i].x == design.items[i].x);
        CHECK(back.items[i].y == design.items[i].y);
        CHECK(back.items[i].t == design.items[i].t);
        CHECK(back.items[i].T == design.items[i].T);
    }
}
