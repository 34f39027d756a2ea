#include "tempodisc/survey.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tempodisc {

namespace {

double reverse_score(double v) { return 8.0 - v; }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

// average ranks, ties get the mean of the positions they span
std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

struct FieldError {
    std::string message;
};

double parse_field(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FieldError{std::string("non-numeric ") + what + " '" + s + "'"};
    }
}

int parse_flag(const std::string& s, const char* what) {
    const double v = parse_field(s, what);
    if (v != 0.0 && v != 1.0) throw FieldError{std::string(what) + " must be 0 or 1"};
    return static_cast<int>(v);
}

int parse_likert(const std::string& s, const char* what) {
    const double v = parse_field(s, what);
    if (v != std::floor(v) || v < 1.0 || v > 7.0)
        throw FieldError{std::string(what) + " must be an integer in [1,7]"};
    return static_cast<int>(v);
}

const std::vector<std::string>& expected_header() {
    static const std::vector<std::string> header = {
        "subject_id", "gender", "age",   "sportweek", "alcoholweek", "smoker",
        "tipi1",      "tipi2",  "tipi3", "tipi4",     "tipi5",       "tipi6",
        "tipi7",      "tipi8",  "tipi9", "tipi10"};
    return header;
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (static_cast<double>(v.size()) - 1.0));
}

} // namespace

BigFiveScores score_tipi(const TipiResponse& raw) {
    for (int v : raw.items)
        if (v < 1 || v > 7) throw DomainError("TIPI item out of [1,7]");
    const auto& it = raw.items;
    BigFiveScores s;
    s.extraversion = (it[0] + reverse_score(it[5])) / 2.0;
    s.agreeableness = (reverse_score(it[1]) + it[6]) / 2.0;
    s.conscientiousness = (it[2] + reverse_score(it[7])) / 2.0;
    s.neuroticism = (it[3] + reverse_score(it[8])) / 2.0;
    s.openness = (it[4] + reverse_score(it[9])) / 2.0;
    return s;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthMismatchError("vectors differ in length");
    if (x.size() < 2) throw DomainError("rank correlation needs n >= 2");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double u) { return u == v.front(); });
    };
    if (constant(x) || constant(y))
        throw DegenerateConstantVectorError("rank correlation of a constant vector");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

double covariate_value(const RespondentProfile& p, std::string_view name) {
    if (name == "gender") return p.gender;
    if (name == "age") return p.age;
    if (name == "sportweek") return p.sportweek;
    if (name == "alcoholweek") return p.alcoholweek;
    if (name == "smoker") return p.smoker;
    if (name == "extraversion") return p.big_five.extraversion;
    if (name == "agreeableness") return p.big_five.agreeableness;
    if (name == "conscientiousness") return p.big_five.conscientiousness;
    if (name == "neuroticism") return p.big_five.neuroticism;
    if (name == "openness") return p.big_five.openness;
    throw DomainError("unknown covariate: " + std::string(name));
}

std::vector<std::string> default_covariate_names() {
    return {"gender",  "sportweek",        "alcoholweek",   "smoker",      "conscientiousness",
            "agreeableness", "extraversion", "openness", "neuroticism"};
}

IngestResult ingest_profiles(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty profiles CSV");
    auto header = split_csv_line(line);
    bool with_savings = false;
    if (header.size() == expected_header().size() + 1 && header.back() == "monthly_savings") {
        with_savings = true;
        header.pop_back();
    }
    if (header != expected_header())
        throw ParseError(
            "profiles CSV header must be subject_id,gender,age,sportweek,alcoholweek,smoker,"
            "tipi1,...,tipi10[,monthly_savings]");

    IngestResult out;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const std::size_t expected = expected_header().size() + (with_savings ? 1 : 0);
        if (fields.size() != expected) {
            std::ostringstream es;
            es << "expected " << expected << " fields, got " << fields.size();
            out.errors.push_back({row, es.str()});
            continue;
        }
        try {
            RespondentProfile p;
            p.subject_id = fields[0];
            if (p.subject_id.empty()) throw FieldError{"missing subject_id"};
            p.gender = parse_flag(fields[1], "gender");
            p.age = parse_field(fields[2], "age");
            p.sportweek = parse_field(fields[3], "sportweek");
            p.alcoholweek = parse_field(fields[4], "alcoholweek");
            p.smoker = parse_flag(fields[5], "smoker");
            if (p.age < 0 || p.sportweek < 0 || p.alcoholweek < 0)
                throw FieldError{"negative quantity"};
            for (int i = 0; i < 10; ++i)
                p.tipi.items[static_cast<std::size_t>(i)] =
                    parse_likert(fields[static_cast<std::size_t>(6 + i)],
                                 ("tipi" + std::to_string(i + 1)).c_str());
            if (with_savings && !fields[16].empty())
                p.monthly_savings = parse_field(fields[16], "monthly_savings");
            p.big_five = score_tipi(p.tipi);
            out.profiles.push_back(std::move(p));
        } catch (const FieldError& e) {
            out.errors.push_back({row, e.message});
        }
    }
    return out;
}

void write_profiles_csv(std::ostream& os, std::span<const RespondentProfile> profiles) {
    const bool with_savings =
        std::any_of(profiles.begin(), profiles.end(),
                    [](const RespondentProfile& p) { return p.monthly_savings.has_value(); });
    for (const auto& h : expected_header()) {
        if (&h != &expected_header().front()) os << ',';
        os << h;
    }
    if (with_savings) os << ",monthly_savings";
    os << '\n';
    for (const RespondentProfile& p : profiles) {
        os << p.subject_id << ',' << p.gender << ',' << p.age << ',' << p.sportweek << ','
           << p.alcoholweek << ',' << p.smoker;
        for (int v : p.tipi.items) os << ',' << v;
        if (with_savings) {
            os << ',';
            if (p.monthly_savings) os << *p.monthly_savings;
        }
        os << '\n';
    }
}

SurveySummary summarize(std::span<const RespondentProfile> profiles) {
    if (profiles.size() < 2) throw InsufficientDataError("summary needs at least two profiles");

    SurveySummary out;
    const std::size_t n = profiles.size();
    auto column = [&](auto getter) {
        std::vector<double> v;
        v.reserve(n);
        for (const auto& p : profiles) v.push_back(getter(p));
        return v;
    };
    auto add_variable = [&](const std::string& name, const std::vector<double>& v) {
        out.variables.push_back({name, mean_of(v), sample_sd(v)});
    };

    add_variable("gender", column([](const auto& p) { return double(p.gender); }));
    add_variable("age", column([](const auto& p) { return p.age; }));
    add_variable("sportweek", column([](const auto& p) { return p.sportweek; }));
    add_variable("alcoholweek", column([](const auto& p) { return p.alcoholweek; }));
    add_variable("smoker", column([](const auto& p) { return double(p.smoker); }));
    for (int i = 0; i < 10; ++i)
        add_variable("tipi" + std::to_string(i + 1), column([i](const auto& p) {
                         return double(p.tipi.items[static_cast<std::size_t>(i)]);
                     }));

    const char* scale_names[5] = {"extraversion", "agreeableness", "conscientiousness",
                                  "neuroticism", "openness"};
    std::array<std::vector<double>, 5> scales;
    scales[0] = column([](const auto& p) { return p.big_five.extraversion; });
    scales[1] = column([](const auto& p) { return p.big_five.agreeableness; });
    scales[2] = column([](const auto& p) { return p.big_five.conscientiousness; });
    scales[3] = column([](const auto& p) { return p.big_five.neuroticism; });
    scales[4] = column([](const auto& p) { return p.big_five.openness; });
    for (int i = 0; i < 5; ++i) add_variable(scale_names[i], scales[static_cast<std::size_t>(i)]);

    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            auto& cell = out.scale_spearman[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (i == j) {
                cell = 1.0;
                continue;
            }
            try {
                cell = spearman(scales[static_cast<std::size_t>(i)], scales[static_cast<std::size_t>(j)]);
            } catch (const DegenerateConstantVectorError&) {
                cell = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
    for (int i = 0; i < 5; ++i) {
        const auto& v = scales[static_cast<std::size_t>(i)];
        if (std::all_of(v.begin(), v.end(), [&](double u) { return u == v.front(); }))
            out.degenerate_scales.emplace_back(scale_names[i]);
    }
    return out;
}

void to_json(nlohmann::json& j, const SurveySummary& summary) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : summary.variables)
        vars.push_back({{"name", v.name}, {"mean", v.mean}, {"sd", v.sd}});
    nlohmann::json matrix = nlohmann::json::array();
    for (const auto& row : summary.scale_spearman) {
        nlohmann::json r = nlohmann::json::array();
        for (double v : row) {
            if (std::isnan(v))
                r.push_back(nullptr);
            else
                r.push_back(v);
        }
        matrix.push_back(std::move(r));
    }
    j = nlohmann::json{{"variables", std::move(vars)},
                       {"scaleSpearman", std::move(matrix)},
                       {"degenerateScales", summary.degenerate_scales}};
}

std::string summary_csv(const SurveySummary& summary) {
    std::ostringstream os;
    os << "variable,mean,sd\n";
    for (const auto& v : summary.variables) os << v.name << ',' << v.mean << ',' << v.sd << '\n';
    return os.str();
}

} // namespace tempodisc
