#include "tempodisc/choice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace tempodisc {

namespace {

double logistic(double z) {
    // split so the exp argument is always <= 0
    const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    // keep the open interval even when the logistic saturates in double
    return std::clamp(p, std::numeric_limits<double>::min(),
                      1.0 - std::numeric_limits<double>::epsilon() / 2.0);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double next_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::string subject_label(int index) {
    std::ostringstream os;
    os << 'S';
    std::string digits = std::to_string(index);
    for (std::size_t i = digits.size(); i < 4; ++i) os << '0';
    os << digits;
    return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& s, const char* what, std::size_t row) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << "row " << row << ": non-numeric " << what << " '" << s << "'";
        throw ParseError(os.str());
    }
}

} // namespace

void validate_tradeoff(const Tradeoff& tr) {
    if (!(tr.x > 0.0) || !(tr.y > 0.0)) throw DomainError("trade-off amounts must be > 0");
    if (!(tr.t >= 0.0) || !(tr.T >= 0.0)) throw DomainError("trade-off times must be >= 0");
    if (!std::isfinite(tr.x) || !std::isfinite(tr.y) || !std::isfinite(tr.t) ||
        !std::isfinite(tr.T))
        throw DomainError("trade-off fields must be finite");
    if (tr.T > 0.0 && tr.x > tr.y)
        throw DomainError("smaller-sooner vs larger-later requires x <= y when T > 0");
}

QuestionnaireDesign QuestionnaireDesign::default_design() {
    // 30 grid items covering every (t,T) combination, ratio ladders chosen to
    // straddle plausible indifference points per interval length; 10 extra
    // ratio items; 3 dominance items.
    static const double ts[6] = {0, 7, 30, 90, 180, 365};
    static const double Ts[5] = {7, 30, 90, 180, 365};
    static const double ratio[5][6] = {
        {0.95, 0.90, 0.85, 0.92, 0.88, 0.97}, // T = 7
        {0.90, 0.80, 0.85, 0.75, 0.95, 0.70}, // T = 30
        {0.80, 0.70, 0.60, 0.90, 0.75, 0.65}, // T = 90
        {0.70, 0.60, 0.80, 0.55, 0.65, 0.75}, // T = 180
        {0.55, 0.65, 0.75, 0.50, 0.60, 0.70}, // T = 365
    };
    static const double later_amount[5] = {100, 120, 200, 250, 300};

    QuestionnaireDesign design;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double y = later_amount[j];
            const double x = std::round(y * ratio[j][i]);
            design.items.push_back({x, y, ts[i], Ts[j]});
        }
    }
    const Tradeoff extra[10] = {
        {95, 100, 0, 7},    {85, 100, 0, 30},   {110, 120, 7, 90},  {140, 200, 30, 180},
        {160, 300, 90, 365}, {240, 250, 180, 7}, {200, 250, 365, 30}, {150, 200, 180, 90},
        {90, 120, 365, 180}, {210, 300, 7, 365}};
    design.items.insert(design.items.end(), std::begin(extra), std::end(extra));
    const Tradeoff dominance[3] = {{100, 100, 0, 30}, {150, 150, 30, 90}, {200, 200, 90, 180}};
    design.items.insert(design.items.end(), std::begin(dominance), std::end(dominance));
    return design;
}

double choice_probability(const DiscountModel& model, const Tradeoff& tr, EpsilonPolicy eps,
                          double temperature) {
    validate_tradeoff(tr);
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
    const double f = evaluate(model, {tr.t, tr.T}, eps);
    return logistic((tr.x - tr.y * f) / temperature);
}

std::vector<double> residuals(const DiscountModel& model, std::span<const ChoiceRecord> data,
                              EpsilonPolicy eps) {
    if (data.empty()) throw EmptyDataError("residuals need at least one record");
    std::vector<double> out;
    out.reserve(data.size());
    for (const ChoiceRecord& rec : data) {
        const double p = choice_probability(model, rec.tradeoff, eps);
        out.push_back((rec.chose_sooner ? 1.0 : 0.0) - p);
    }
    return out;
}

std::vector<ChoiceRecord> generate_choices(const DiscountModel& model,
                                           const QuestionnaireDesign& design, int n_subjects,
                                           std::uint64_t seed, NoiseMode mode, EpsilonPolicy eps) {
    if (n_subjects < 1) throw DomainError("need at least one subject");
    std::vector<double> probs;
    probs.reserve(design.items.size());
    for (const Tradeoff& tr : design.items) probs.push_back(choice_probability(model, tr, eps));

    std::vector<ChoiceRecord> out;
    out.reserve(static_cast<std::size_t>(n_subjects) * design.items.size());
    for (int s = 1; s <= n_subjects; ++s) {
        const std::string id = subject_label(s);
        std::mt19937_64 eng(splitmix64(seed ^ (0x5851F42D4C957F2Dull * static_cast<std::uint64_t>(s))));
        for (std::size_t i = 0; i < design.items.size(); ++i) {
            bool sooner;
            if (mode == NoiseMode::Deterministic)
                sooner = probs[i] > 0.5;
            else
                sooner = next_uniform(eng) < probs[i];
            out.push_back({id, design.items[i], sooner});
        }
    }
    return out;
}

std::vector<std::string> consistency_screen(std::span<const ChoiceRecord> data,
                                            const QuestionnaireDesign& design) {
    const bool has_dominance =
        std::any_of(design.items.begin(), design.items.end(),
                    [](const Tradeoff& tr) { return tr.x == tr.y && tr.T > 0.0; });
    if (!has_dominance)
        throw NoDominanceItemError("design has no equal-amount item to screen with");

    std::set<std::string> dropped;
    for (const ChoiceRecord& rec : data) {
        const Tradeoff& tr = rec.tradeoff;
        if (tr.x == tr.y && tr.T > 0.0 && !rec.chose_sooner) dropped.insert(rec.subject_id);
    }
    return {dropped.begin(), dropped.end()};
}

void write_choices_csv(std::ostream& os, std::span<const ChoiceRecord> data) {
    os << "subject_id,x,y,t,T,chose_sooner\n";
    for (const ChoiceRecord& rec : data) {
        os << rec.subject_id << ',' << rec.tradeoff.x << ',' << rec.tradeoff.y << ','
           << static_cast<long long>(rec.tradeoff.t) << ','
           << static_cast<long long>(rec.tradeoff.T) << ',' << (rec.chose_sooner ? 1 : 0)
           << '\n';
    }
}

std::vector<ChoiceRecord> read_choices_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty choices CSV");
    if (split_csv_line(line) != std::vector<std::string>{"subject_id", "x", "y", "t", "T",
                                                         "chose_sooner"})
        throw ParseError("choices CSV header must be subject_id,x,y,t,T,chose_sooner");

    std::vector<ChoiceRecord> out;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            std::ostringstream es;
            es << "row " << row << ": expected 6 fields, got " << fields.size();
            throw ParseError(es.str());
        }
        ChoiceRecord rec;
        rec.subject_id = fields[0];
        rec.tradeoff.x = parse_number(fields[1], "x", row);
        rec.tradeoff.y = parse_number(fields[2], "y", row);
        rec.tradeoff.t = parse_number(fields[3], "t", row);
        rec.tradeoff.T = parse_number(fields[4], "T", row);
        const double chose = parse_number(fields[5], "chose_sooner", row);
        if (chose != 0.0 && chose != 1.0) {
            std::ostringstream es;
            es << "row " << row << ": chose_sooner must be 0 or 1";
            throw ParseError(es.str());
        }
        rec.chose_sooner = chose == 1.0;
        try {
            validate_tradeoff(rec.tradeoff);
        } catch (const DomainError& e) {
            std::ostringstream es;
            es << "row " << row << ": " << e.what();
            throw ParseError(es.str());
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void write_design_csv(std::ostream& os, const QuestionnaireDesign& design) {
    os << "item,x,y,t,T\n";
    for (std::size_t i = 0; i < design.items.size(); ++i) {
        const Tradeoff& tr = design.items[i];
        os << (i + 1) << ',' << tr.x << ',' << tr.y << ',' << static_cast<long long>(tr.t) << ','
           << static_cast<long long>(tr.T) << '\n';
    }
}

QuestionnaireDesign read_design_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty design CSV");
    if (split_csv_line(line) != std::vector<std::string>{"item", "x", "y", "t", "T"})
        throw ParseError("design CSV header must be item,x,y,t,T");

    QuestionnaireDesign design;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            std::ostringstream es;
            es << "row " << row << ": expected 5 fields, got " << fields.size();
            throw ParseError(es.str());
        }
        Tradeoff tr;
        tr.x = parse_number(fields[1], "x", row);
        tr.y = parse_number(fields[2], "y", row);
        tr.t = parse_number(fields[3], "t", row);
        tr.T = parse_number(fields[4], "T", row);
        try {
            validate_tradeoff(tr);
        } catch (const DomainError& e) {
            std::ostringstream es;
            es << "row " << row << ": " << e.what();
            throw ParseError(es.str());
        }
        design.items.push_back(tr);
    }
    return design;
}

} // namespace tempodisc
