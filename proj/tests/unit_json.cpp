#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polyfun/generators.hpp"
#include "polyfun/json_io.hpp"
#include "polyfun/simplicial.hpp"

using namespace polyfun;

TEST_CASE("integers round trip, large ones as strings") {
    Int small = (Int(1) << 53);
    Json js = int_to_json(small);
    CHECK(js.is_number_integer());
    CHECK(int_from_json(js) == small);

    Int big = (Int(1) << 53) + 1;
    Json jb = int_to_json(big);
    CHECK(jb.is_string());
    CHECK(int_from_json(jb) == big);

    Int neg = -(Int(1) << 77);
    CHECK(int_from_json(int_to_json(neg)) == neg);

    CHECK_THROWS_AS(int_from_json(Json("12x")), std::invalid_argument);
    CHECK_THROWS_AS(int_from_json(Json(1.5)), std::invalid_argument);
}

TEST_CASE("matrix round trip") {
    IntMatrix m(2, 3, {1, -2, 3, 4, 0, -6});
    m.at(1, 2) = (Int(1) << 60);
    Json j = matrix_to_json(m);
    CHECK(j["rows"] == 2);
    CHECK(j["cols"] == 3);
    CHECK(matrix_from_json(j) == m);

    IntMatrix empty(0, 4);
    CHECK(matrix_from_json(matrix_to_json(empty)) == empty);
}

TEST_CASE("matrix accepts a bare array of rows") {
    Json j = Json::parse("[[2,4],[6,8]]");
    IntMatrix m = matrix_from_json(j);
    CHECK(m == IntMatrix(2, 2, {2, 4, 6, 8}));

    CHECK(matrix_from_json(Json::parse("[]")) == IntMatrix(0, 0));
    CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1,2],[3]]")), std::invalid_argument);
    CHECK_THROWS_AS(matrix_from_json(Json::parse("{\"rows\":1}")), std::invalid_argument);
    CHECK_THROWS_AS(matrix_from_json(Json::parse("{\"rows\":2,\"cols\":1,\"entries\":[[1]]}")),
                    std::invalid_argument);
}

TEST_CASE("group serialization") {
    FgAbGroup g{2, {Int(2), Int(6)}};
    Json j = group_to_json(g);
    CHECK(j["free_rank"] == 2);
    CHECK(group_from_json(j) == g);
    CHECK_THROWS_AS(group_from_json(Json::parse("{\"free_rank\":0,\"invariant_factors\":[3,2]}")),
                    std::invalid_argument);
}

TEST_CASE("presented group serialization") {
    PresentedGroup g{2, IntMatrix(2, 1, {4, 0})};
    PresentedGroup back = pgroup_from_json(pgroup_to_json(g));
    CHECK(back.gens == g.gens);
    CHECK(back.rels == g.rels);
    CHECK_THROWS_AS(pgroup_from_json(Json::parse(
                        "{\"gens\":3,\"rels\":{\"rows\":2,\"cols\":0,\"entries\":[[],[]]}}")),
                    std::invalid_argument);
}

TEST_CASE("free complex round trip") {
    FreeChainComplex c;
    c.top = 2;
    c.ranks = {1, 2, 1};
    c.diffs = {IntMatrix(1, 2, {0, 0}), IntMatrix(2, 1, {3, -3})};
    FreeChainComplex back = complex_from_json(complex_to_json(c));
    CHECK(back.top == c.top);
    CHECK(back.ranks == c.ranks);
    CHECK(back.diffs == c.diffs);

    Json bad = complex_to_json(c);
    bad["ranks"] = Json::array({1, 2});
    CHECK_THROWS_AS(complex_from_json(bad), std::invalid_argument);
}

TEST_CASE("generated complex round trip") {
    GenChainComplex c;
    c.top = 1;
    c.groups = {PresentedGroup{1, IntMatrix(1, 1, {4})}, PresentedGroup{1, IntMatrix(1, 0)}};
    c.maps = {IntMatrix(1, 1, {2})};
    GenChainComplex back = gen_complex_from_json(gen_complex_to_json(c));
    CHECK(back.top == c.top);
    CHECK(back.groups[0].rels == c.groups[0].rels);
    CHECK(back.maps == c.maps);
}

TEST_CASE("simplicial round trip") {
    FreeChainComplex c;
    c.top = 1;
    c.ranks = {1, 1};
    c.diffs = {IntMatrix(1, 1, {6})};
    SimplicialModule s = dk_gamma(c, 3);
    SimplicialModule back = simplicial_from_json(simplicial_to_json(s));
    CHECK(back.cap == s.cap);
    CHECK(back.ranks == s.ranks);
    CHECK(back.faces == s.faces);
    CHECK(back.degens == s.degens);
}

TEST_CASE("report witnesses keep duplicate keys") {
    CheckReport rep;
    rep.check = "demo";
    rep.pass = false;
    rep.note("f(x)", "1");
    rep.note("f(x)", "2");
    rep.note("f(x)", "3");
    Json j = report_to_json(rep);
    CHECK(j["witness"].size() == 3);
    CHECK(j["witness"]["f(x)"] == "1");
    CHECK(j["witness"]["f(x) #2"] == "2");
    CHECK(j["witness"]["f(x) #3"] == "3");
}

TEST_CASE("snf serialization carries all three factors") {
    IntMatrix m(2, 2, {2, 4, 6, 8});
    SnfDecomposition s = smith_normal_form(m);
    Json j = snf_to_json(s);
    CHECK(matrix_from_json(j["d"]) == s.d);
    CHECK(matrix_from_json(j["u"]) == s.u);
    CHECK(matrix_from_json(j["v"]) == s.v);
    CHECK(j["rank"] == s.rank);
}

TEST_CASE("json dumps are stable across calls") {
    Rng rng(5);
    IntMatrix m = rand_matrix(rng, 3, 3);
    std::string a = matrix_to_json(m).dump(2);
    std::string b = matrix_to_json(m).dump(2);
    CHECK(a == b);
}
