#ifndef TEMPODISC_SURVEY_HPP
#define TEMPODISC_SURVEY_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tempodisc/errors.hpp"

namespace tempodisc {

/// Ten Likert answers in [1,7], 1 = disagree strongly, 7 = agree strongly.
struct TipiResponse {
    std::array<int, 10> items{};
};

/// Scale scores in [1,7], each the mean of one direct and one reverse-keyed
/// item (reverse score = 8 - raw).
struct BigFiveScores {
    double extraversion = 0.0;     // items 1, 6r
    double agreeableness = 0.0;    // items 2r, 7
    double conscientiousness = 0.0; // items 3, 8r
    double neuroticism = 0.0;      // items 4, 9r
    double openness = 0.0;         // items 5, 10r
};

BigFiveScores score_tipi(const TipiResponse& raw); // throws DomainError on out-of-range items

/// Spearman rank correlation with average ranks for ties. Throws
/// LengthMismatchError, DegenerateConstantVectorError, DomainError (n < 2).
double spearman(std::span<const double> x, std::span<const double> y);

struct RespondentProfile {
    std::string subject_id;
    int gender = 0; // 1 = male
    double age = 0.0;
    double sportweek = 0.0;   // hours of physical activity per week
    double alcoholweek = 0.0; // drinks per week
    int smoker = 0;           // 1 = smoker
    std::optional<double> monthly_savings; // pass-through, not a default covariate
    TipiResponse tipi;
    BigFiveScores big_five; // derived from tipi at ingestion
};

/// Covariate value by name: gender, age, sportweek, alcoholweek, smoker,
/// extraversion, agreeableness, conscientiousness, neuroticism, openness.
double covariate_value(const RespondentProfile& profile, std::string_view name);
std::vector<std::string> default_covariate_names();

struct RowError {
    std::size_t row = 0; // 1-based line number in the stream
    std::string message;
};

struct IngestResult {
    std::vector<RespondentProfile> profiles;
    std::vector<RowError> errors; // malformed rows, collected not fatal
};

/// CSV header: subject_id,gender,age,sportweek,alcoholweek,smoker,
/// tipi1,...,tipi10 with an optional trailing monthly_savings column.
/// Flags must be exactly 0 or 1; Likert items integers in [1,7].
IngestResult ingest_profiles(std::istream& is); // throws ParseError on a bad header
void write_profiles_csv(std::ostream& os, std::span<const RespondentProfile> profiles);

struct VariableSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0; // sample SD, n-1 denominator
};

struct SurveySummary {
    std::vector<VariableSummary> variables; // behavioral, TIPI items, scales
    std::array<std::array<double, 5>, 5> scale_spearman{}; // E,A,C,N,O; NaN when degenerate
    std::vector<std::string> degenerate_scales; // constant scales, correlation undefined
};

/// Mean/SD per variable plus the 5x5 Spearman matrix of scale scores.
/// Throws InsufficientDataError for fewer than two profiles.
SurveySummary summarize(std::span<const RespondentProfile> profiles);

void to_json(nlohmann::json& j, const SurveySummary& summary);
std::string summary_csv(const SurveySummary& summary);

} // namespace tempodisc

#endif // TEMPODISC_SURVEY_HPP
