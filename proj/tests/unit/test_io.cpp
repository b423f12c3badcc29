#include "common.hpp"

#include "tvs/io.hpp"

using namespace tvs;

TEST_SUITE("io") {
  TEST_CASE("subspace json") {
    const Subspace s = testutil::span(3, 3, {{1, 2, 0}, {0, 1, 1}});
    const json j = to_json(s);
    CHECK(j["p"] == 3);
    CHECK(j["n"] == 3);
    CHECK(subspace_from_json(j) == s);
    CHECK_THROWS_AS(subspace_from_json(json::parse(R"({"p":2,"n":2,"basis":[7]})")), ParseError);
  }

  TEST_CASE("grid and transverse json round trip") {
    const GridSet g = testutil::dot_zero_grid(3, 2);
    CHECK(gridset_from_json(to_json(g)) == g);
    const TransverseSet t = to_transverse(g);
    CHECK(transverse_from_json(to_json(t)) == t);
    const auto a = parse_set(to_json(g).dump());
    REQUIRE(std::holds_alternative<GridSet>(a));
    CHECK(std::get<GridSet>(a) == g);
    const auto b = parse_set(to_json(t).dump());
    REQUIRE(std::holds_alternative<TransverseSet>(b));
    CHECK(std::get<TransverseSet>(b) == t);
  }

  TEST_CASE("lss and variety json round trip") {
    const TransverseSet t = to_transverse(testutil::dot_zero_grid(2, 3));
    const auto s = from_transverse(t, testutil::span(2, 3, {{1, 1, 0}, {0, 0, 1}}), Subspace::full(t.H()));
    CHECK(lss_from_json(to_json(s)) == s);

    const Subspace G = Subspace::full(FieldSpec(2, 3));
    const BilinearVariety w(G, testutil::span(2, 3, {{1, 0, 0}, {0, 1, 0}}),
                            {testutil::matrix(2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})});
    CHECK(variety_from_json(to_json(w)) == w);
  }

  TEST_CASE("parse errors carry an offset") {
    try {
      parse_set("{\"p\": 2,, }");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 9);
    }
    CHECK_THROWS_AS(parse_set("[1, 2]"), ParseError);
    CHECK_THROWS_AS(parse_set(R"({"p": 4, "nG": 1, "nH": 1, "cells": "0f"})"), ParseError);
    CHECK_THROWS_AS(parse_set(R"({"p": 2, "nG": 1, "nH": 1})"), ParseError);
    CHECK_THROWS_AS(parse_set(R"({"p": 2, "nG": 1, "nH": 1, "columns": [[1]]})"), ParseError);
  }

  TEST_CASE("flipped bit is reported as a non-transverse slice") {
    GridSet g = testutil::dot_zero_grid(2, 2);
    g.flip_index(g.index(Vec{1}, Vec{1}));
    const auto parsed = parse_set(to_json(g).dump());
    REQUIRE(std::holds_alternative<GridSet>(parsed));
    try {
      to_transverse(std::get<GridSet>(parsed));
      FAIL("expected NotTransverse");
    } catch (const NotTransverse& e) {
      CHECK(e.witness().index == Vec{1});
    }
  }

  TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }
}
