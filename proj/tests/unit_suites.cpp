#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polyfun/suites.hpp"

using namespace polyfun;

TEST_CASE("every suite passes a short seeded run") {
    for (const auto& name : suite_names()) {
        CAPTURE(name);
        int trials = (name == "koeck" || name == "theorem1") ? 2 : 4;
        SuiteResult res = run_suite(name, trials, 2026);
        CHECK(res.trials == trials);
        CHECK(res.passed == trials);
        CHECK(res.all_pass());
        CHECK(res.first_failure() == nullptr);
        REQUIRE(static_cast<int>(res.reports.size()) == trials);
        for (const auto& rep : res.reports) CHECK(rep.pass);
    }
}

TEST_CASE("suite runs reproduce exactly") {
    SuiteResult a = run_suite("oracle", 3, 7);
    SuiteResult b = run_suite("oracle", 3, 7);
    REQUIRE(a.reports.size() == b.reports.size());
    for (size_t i = 0; i < a.reports.size(); ++i) {
        CHECK(a.reports[i].check == b.reports[i].check);
        CHECK(a.reports[i].pass == b.reports[i].pass);
        CHECK(a.reports[i].witness == b.reports[i].witness);
    }
    SuiteResult c = run_suite("oracle", 3, 8);
    bool same = true;
    for (size_t i = 0; i < a.reports.size(); ++i)
        if (a.reports[i].witness != c.reports[i].witness) same = false;
    CHECK_FALSE(same);
}

TEST_CASE("trial reports carry their index") {
    SuiteResult res = run_suite("dk", 2, 11);
    bool saw0 = false, saw1 = false;
    for (const auto& rep : res.reports)
        for (const auto& [k, v] : rep.witness) {
            if (k == "trial" && v == "0") saw0 = true;
            if (k == "trial" && v == "1") saw1 = true;
        }
    CHECK(saw0);
    CHECK(saw1);
}

TEST_CASE("bad suite requests are rejected") {
    CHECK_THROWS_AS(run_suite("nope", 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_suite("koeck", 0, 0), std::invalid_argument);
}
