#ifndef TEMPODISC_CHOICE_HPP
#define TEMPODISC_CHOICE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tempodisc/discount.hpp"

namespace tempodisc {

/// One binary question: amount x at delay t versus amount y at delay t + T
/// (euros, days). Smaller-sooner vs larger-later, so x <= y whenever T > 0;
/// equal amounts make a dominance item used for consistency screening.
struct Tradeoff {
    double x = 0.0; // sooner amount
    double y = 0.0; // later amount
    double t = 0.0;
    double T = 0.0;
};

void validate_tradeoff(const Tradeoff& tr); // throws DomainError

struct ChoiceRecord {
    std::string subject_id;
    Tradeoff tradeoff;
    bool chose_sooner = false;
};

/// An ordered list of trade-off items presented to every subject.
struct QuestionnaireDesign {
    std::vector<Tradeoff> items;

    /// The built-in 43-item design: delays in {0,7,30,90,180,365}, intervals
    /// in {7,30,90,180,365}, amounts in [80,300], three equal-amount
    /// dominance items. Shipped as data/design43.csv as well so it can be
    /// replaced wholesale.
    static QuestionnaireDesign default_design();
};

/// P(choose sooner) = 1 / (1 + exp(-(x - y F(t,T)) / temperature)). Raw euro
/// amounts enter the logistic directly, so probabilities saturate fast away
/// from the indifference frontier x = y F; the result is clamped to the open
/// unit interval at double resolution. The temperature knob softens the
/// saturation when wanted; 1 leaves the amounts-as-written form.
double choice_probability(const DiscountModel& model, const Tradeoff& tr, EpsilonPolicy eps = {},
                          double temperature = 1.0);

/// observed - predicted, one entry per record, input order.
/// Throws EmptyDataError.
std::vector<double> residuals(const DiscountModel& model, std::span<const ChoiceRecord> data,
                              EpsilonPolicy eps = {});

enum class NoiseMode {
    Deterministic, // chose_sooner = (P > 0.5); the tie P = 0.5 resolves to later
    Bernoulli      // chose_sooner ~ Bernoulli(P), seeded
};

/// Synthetic cohort: subjects S0001.. answer every design item. Per-subject
/// streams derive from (seed, subject index), so output is reproducible and
/// independent of generation order.
std::vector<ChoiceRecord> generate_choices(const DiscountModel& model,
                                           const QuestionnaireDesign& design, int n_subjects,
                                           std::uint64_t seed, NoiseMode mode,
                                           EpsilonPolicy eps = {});

/// Subjects who chose the later option on any equal-amount item (waiting for
/// the same amount dominates nothing). Throws NoDominanceItemError if the
/// design has no such item.
std::vector<std::string> consistency_screen(std::span<const ChoiceRecord> data,
                                            const QuestionnaireDesign& design);

// CSV: header `subject_id,x,y,t,T,chose_sooner`, times as integer days,
// chose_sooner in {0,1}. Design CSV: `item,x,y,t,T`.
void write_choices_csv(std::ostream& os, std::span<const ChoiceRecord> data);
std::vector<ChoiceRecord> read_choices_csv(std::istream& is); // throws ParseError
void write_design_csv(std::ostream& os, const QuestionnaireDesign& design);
QuestionnaireDesign read_design_csv(std::istream& is); // throws ParseError

} // namespace tempodisc

#endif // TEMPODISC_CHOICE_HPP
