#include "modechoice/survey.hpp"

#include <cmath>
#include <fstream>

#include "modechoice/csv.hpp"

namespace modechoice::survey {

namespace {

Ses parse_ses(const std::string& s, std::size_t row) {
    if (s == "low") return Ses::Low;
    if (s == "mid") return Ses::Mid;
    if (s == "high") return Ses::High;
    throw DataError("survey row " + std::to_string(row + 2) + ": unknown ses '" + s + "'");
}

Sex parse_sex(const std::string& s, std::size_t row) {
    if (s == "F" || s == "f") return Sex::F;
    if (s == "M" || s == "m") return Sex::M;
    throw DataError("survey row " + std::to_string(row + 2) + ": unknown sex '" + s + "'");
}

ModeId parse_mode(const std::string& s, std::size_t row) {
    if (s == "car") return ModeId::Car;
    if (s == "moto") return ModeId::Motorcycle;
    if (s == "pub") return ModeId::PublicTransit;
    throw DataError("survey row " + std::to_string(row + 2) + ": unknown mode '" + s + "'");
}

} // namespace

SurveyTable load_survey_csv(std::istream& is) {
    CsvTable t = read_csv(is);
    int c_id = t.require_column("id");
    int c_ses = t.require_column("ses");
    int c_sex = t.require_column("sex");
    int c_age = t.require_column("age");
    int c_income = t.require_column("income_month");
    int c_dist = t.require_column("distance_km");
    int c_mode = t.require_column("mode");
    std::array<int, kNumAttributes> c_imp{};
    for (int a = 0; a < kNumAttributes; ++a)
        c_imp[a] = t.require_column(std::string("imp_") + attribute_name(static_cast<AttributeId>(a)));

    SurveyTable out;
    out.rows.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        SurveyRow row;
        row.id = static_cast<int>(csv_double(t, r, c_id));
        row.ses = parse_ses(t.cell(r, c_ses), r);
        row.sex = parse_sex(t.cell(r, c_sex), r);
        row.age = static_cast<int>(csv_double(t, r, c_age));
        row.income_month = csv_double(t, r, c_income);
        row.distance_km = csv_double(t, r, c_dist);
        row.mode = parse_mode(t.cell(r, c_mode), r);
        for (int a = 0; a < kNumAttributes; ++a) {
            double v = csv_double(t, r, c_imp[a]);
            int likert = static_cast<int>(v);
            if (likert < 1 || likert > 5 || v != likert)
                throw DataError("survey row " + std::to_string(r + 2) +
                                ": Likert values must be integers 1..5");
            row.likert[a] = likert;
        }
        out.rows.push_back(row);
    }
    if (out.rows.empty()) throw DataError("survey: no data rows");
    return out;
}

SurveyTable load_survey_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return load_survey_csv(in);
}

std::array<std::array<GroupWeight, kNumAttributes>, kNumSes> normalize_weights(const SurveyTable& t) {
    std::array<std::array<GroupWeight, kNumAttributes>, kNumSes> out{};
    std::array<std::array<std::vector<double>, kNumAttributes>, kNumSes> scores;
    for (const SurveyRow& r : t.rows)
        for (int a = 0; a < kNumAttributes; ++a)
            scores[static_cast<int>(r.ses)][a].push_back(r.likert[a] / 5.0);
    for (int g = 0; g < kNumSes; ++g)
        for (int a = 0; a < kNumAttributes; ++a) {
            const auto& xs = scores[g][a];
            out[g][a].n = xs.size();
            out[g][a].mean = stats::mean(xs);
            out[g][a].sd = stats::sample_sd(xs);
        }
    return out;
}

std::array<std::vector<double>, kNumSes> attribute_scores_by_ses(const SurveyTable& t,
                                                                 AttributeId attribute) {
    std::array<std::vector<double>, kNumSes> out;
    for (const SurveyRow& r : t.rows)
        out[static_cast<int>(r.ses)].push_back(static_cast<double>(r.likert[static_cast<int>(attribute)]));
    return out;
}

std::vector<std::vector<double>> mode_by_ses_table(const SurveyTable& t) {
    std::vector<std::vector<double>> counts(kNumModes, std::vector<double>(kNumSes, 0.0));
    for (const SurveyRow& r : t.rows)
        counts[static_cast<int>(r.mode)][static_cast<int>(r.ses)] += 1.0;
    return counts;
}

mnl::MnlData build_mnl_data(const SurveyTable& t, const std::vector<std::string>& covariates,
                            ModeId reference, bool add_intercept) {
    mnl::MnlData d;
    d.n_rows = t.rows.size();
    d.n_alternatives = kNumModes;
    d.ref_alt = static_cast<int>(reference);
    d.alt_names = {"car", "moto", "pub"};
    if (add_intercept) d.var_names.push_back("const");
    for (const std::string& v : covariates) d.var_names.push_back(v);
    d.n_covariates = d.var_names.size();
    d.x.resize(d.n_rows * d.n_covariates);
    d.choice.resize(d.n_rows);

    auto value_of = [](const SurveyRow& r, const std::string& name) -> double {
        if (name == "age") return r.age;
        if (name == "income_month") return r.income_month;
        if (name == "income_m") return r.income_month / 1e6; // in millions, tames the scale
        if (name == "distance_km") return r.distance_km;
        if (name == "sex") return r.sex == Sex::M ? 1.0 : 0.0;
        if (name == "ses") return static_cast<double>(r.ses);
        throw DataError("mnl: unknown covariate '" + name +
                        "' (expected age, income_month, income_m, distance_km, sex or ses)");
    };

    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const SurveyRow& r = t.rows[i];
        d.choice[i] = static_cast<int>(r.mode);
        std::size_t k = 0;
        if (add_intercept) d.x[i * d.n_covariates + k++] = 1.0;
        for (const std::string& v : covariates) d.x[i * d.n_covariates + k++] = value_of(r, v);
    }
    return d;
}

} // namespace modechoice::survey
