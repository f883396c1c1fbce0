#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "modechoice/mnl.hpp"
#include "modechoice/stats.hpp"
#include "modechoice/types.hpp"

namespace modechoice::survey {

/// One questionnaire respondent. Likert importances are 1..5 ordered by
/// AttributeId.
struct SurveyRow {
    int id = 0;
    Ses ses = Ses::Low;
    Sex sex = Sex::F;
    int age = 0;
    double income_month = 0.0;
    double distance_km = 0.0;
    ModeId mode = ModeId::PublicTransit;
    std::array<int, kNumAttributes> likert{};
};

struct SurveyTable {
    std::vector<SurveyRow> rows;
};

/// Expected columns: id,ses,sex,age,income_month,distance_km,mode plus one
/// imp_<attribute> column per AttributeId.
SurveyTable load_survey_csv(std::istream& is);
SurveyTable load_survey_csv_file(const std::string& path);

struct GroupWeight {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

/// Likert-to-weight conversion, score = likert/5, summarized per
/// (ses, attribute) for population initialization.
std::array<std::array<GroupWeight, kNumAttributes>, kNumSes> normalize_weights(const SurveyTable& t);

/// Likert scores per attribute split by SES, for the nonparametric tests.
std::array<std::vector<double>, kNumSes> attribute_scores_by_ses(const SurveyTable& t,
                                                                 AttributeId attribute);

/// Mode-by-SES contingency counts for the chi-square test.
std::vector<std::vector<double>> mode_by_ses_table(const SurveyTable& t);

/// Covariate extraction for MNL: numeric columns, with 'sex' encoded F=0/M=1
/// and 'ses' encoded low=0/mid=1/high=2. An intercept column is prepended
/// when add_intercept is set.
mnl::MnlData build_mnl_data(const SurveyTable& t, const std::vector<std::string>& covariates,
                            ModeId reference, bool add_intercept = true);

} // namespace modechoice::survey
