#include <doctest.h>

#include <sstream>

#include "modechoice/rng.hpp"
#include "modechoice/survey.hpp"

using namespace modechoice;
namespace sv = modechoice::survey;

namespace {

const char* kHeader =
    "id,ses,sex,age,income_month,distance_km,mode,imp_acquisition_cost,imp_operating_cost,"
    "imp_comfort,imp_road_safety,imp_personal_security,imp_travel_time,imp_emissions";

sv::SurveyTable table_from(const std::string& body) {
    std::istringstream is(std::string(kHeader) + "\n" + body);
    return sv::load_survey_csv(is);
}

// Synthetic survey with known per-group Likert propensities; the test-side
// generator for the weight-recovery round trip.
sv::SurveyTable synthetic_survey(std::size_t n, std::uint64_t seed,
                                 const std::array<std::array<double, kNumAttributes>, kNumSes>& mean_1to5) {
    sv::SurveyTable t;
    RngStream rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        sv::SurveyRow r;
        r.id = static_cast<int>(i);
        r.ses = static_cast<Ses>(rng.categorical(std::array<double, 3>{0.35, 0.45, 0.20}));
        r.sex = rng.bernoulli(0.5) ? Sex::M : Sex::F;
        r.age = rng.uniform_int(16, 75);
        r.income_month = rng.lognormal_median(2e6, 0.4);
        r.distance_km = rng.uniform(1.0, 25.0);
        r.mode = static_cast<ModeId>(rng.uniform_int(0, 2));
        for (int a = 0; a < kNumAttributes; ++a) {
            double v = rng.normal(mean_1to5[static_cast<int>(r.ses)][a], 0.8);
            int likert = static_cast<int>(std::lround(v));
            r.likert[a] = std::clamp(likert, 1, 5);
        }
        t.rows.push_back(r);
    }
    return t;
}

} // namespace

TEST_CASE("survey loading and validation") {
    auto t = table_from("1,low,F,25,1.2e6,8,pub,5,4,3,2,1,5,2\n"
                        "2,high,M,50,9e6,12,car,2,2,5,4,5,5,1\n");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].ses == Ses::Low);
    CHECK(t.rows[0].mode == ModeId::PublicTransit);
    CHECK(t.rows[0].likert[0] == 5);
    CHECK(t.rows[1].sex == Sex::M);

    CHECK_THROWS_AS(table_from("1,low,F,25,1e6,8,jetpack,5,4,3,2,1,5,2\n"), DataError);
    CHECK_THROWS_AS(table_from("1,low,F,25,1e6,8,pub,6,4,3,2,1,5,2\n"), DataError);
    CHECK_THROWS_AS(table_from("1,low,F,25,1e6,8,pub,2.5,4,3,2,1,5,2\n"), DataError);
    CHECK_THROWS_AS(table_from(""), DataError);

    std::istringstream missing("id,ses\n1,low\n");
    CHECK_THROWS_AS(sv::load_survey_csv(missing), DataError);
}

TEST_CASE("likert normalization basics") {
    // all respondents answer 5 -> mean 1.0, sd 0
    auto all5 = table_from("1,low,F,25,1e6,8,pub,5,5,5,5,5,5,5\n"
                           "2,low,M,30,1e6,9,car,5,5,5,5,5,5,5\n");
    auto w5 = sv::normalize_weights(all5);
    CHECK(w5[0][0].mean == doctest::Approx(1.0));
    CHECK(w5[0][0].sd == doctest::Approx(0.0));

    // answers {1, 5} -> mean 0.6
    auto mix = table_from("1,mid,F,25,1e6,8,pub,1,1,1,1,1,1,1\n"
                          "2,mid,M,30,1e6,9,car,5,5,5,5,5,5,5\n");
    auto wm = sv::normalize_weights(mix);
    CHECK(wm[1][3].mean == doctest::Approx(0.6));
}

TEST_CASE("weight recovery round trip at n = 2000") {
    std::array<std::array<double, kNumAttributes>, kNumSes> truth{{
        {4.5, 4.0, 2.5, 2.8, 2.3, 4.3, 1.5},
        {3.0, 3.3, 4.0, 3.5, 3.9, 4.3, 1.8},
        {3.1, 3.0, 4.5, 4.0, 4.4, 4.6, 1.9},
    }};
    auto t = synthetic_survey(2000, 77, truth);
    auto weights = sv::normalize_weights(t);
    for (int g = 0; g < kNumSes; ++g)
        for (int a = 0; a < kNumAttributes; ++a) {
            // clipping to 1..5 shifts extreme means slightly; stay within the
            // survey-derived tolerance on the interior values
            if (truth[g][a] < 1.8 || truth[g][a] > 4.4) continue;
            CHECK(std::abs(weights[g][a].mean - truth[g][a] / 5.0) < 0.02);
        }
}

TEST_CASE("group extraction and contingency tables") {
    auto t = table_from("1,low,F,25,1e6,8,pub,5,4,3,2,1,5,2\n"
                        "2,mid,M,50,3e6,12,car,2,2,5,4,5,5,1\n"
                        "3,mid,F,44,3e6,6,car,3,3,4,4,4,4,2\n"
                        "4,high,M,31,8e6,10,moto,1,2,5,5,5,5,1\n");
    auto groups = sv::attribute_scores_by_ses(t, AttributeId::Comfort);
    CHECK(groups[0] == std::vector<double>{3});
    CHECK(groups[1] == std::vector<double>{5, 4});
    CHECK(groups[2] == std::vector<double>{5});

    auto table = sv::mode_by_ses_table(t);
    CHECK(table[static_cast<int>(ModeId::Car)][static_cast<int>(Ses::Mid)] == 2.0);
    CHECK(table[static_cast<int>(ModeId::PublicTransit)][static_cast<int>(Ses::Low)] == 1.0);
    CHECK(table[static_cast<int>(ModeId::Motorcycle)][static_cast<int>(Ses::High)] == 1.0);
}

TEST_CASE("mnl data construction from the survey") {
    auto t = table_from("1,low,F,25,1e6,8,pub,5,4,3,2,1,5,2\n"
                        "2,high,M,50,9e6,12,car,2,2,5,4,5,5,1\n");
    auto d = sv::build_mnl_data(t, {"age", "sex", "income_m", "ses"}, ModeId::PublicTransit);
    CHECK(d.n_rows == 2);
    CHECK(d.n_covariates == 5); // intercept + 4
    CHECK(d.ref_alt == static_cast<int>(ModeId::PublicTransit));
    CHECK(d.xval(0, 0) == doctest::Approx(1.0));
    CHECK(d.xval(0, 1) == doctest::Approx(25.0));
    CHECK(d.xval(0, 2) == doctest::Approx(0.0));  // F
    CHECK(d.xval(1, 2) == doctest::Approx(1.0));  // M
    CHECK(d.xval(1, 3) == doctest::Approx(9.0));  // income in millions
    CHECK(d.xval(1, 4) == doctest::Approx(2.0));  // high
    CHECK(d.choice[0] == static_cast<int>(ModeId::PublicTransit));
    CHECK(d.choice[1] == static_cast<int>(ModeId::Car));

    CHECK_THROWS_AS(sv::build_mnl_data(t, {"shoe_size"}, ModeId::PublicTransit), DataError);
}
