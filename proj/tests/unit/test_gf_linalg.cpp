#include <random>

#include "common.hpp"

using namespace tvs;
using testutil::as_set;
using testutil::span;
using testutil::vec;

TEST_SUITE("gf_linalg") {
  TEST_CASE("canonical form of small spans") {
    const FieldSpec f(2, 2);
    const Subspace empty = Subspace::span(f, {});
    CHECK(empty.dim() == 0);
    CHECK(as_set(empty) == brute::Set{0});

    const Subspace id = span(2, 2, {{1, 0}, {0, 1}});
    CHECK(id.dim() == 2);
    CHECK(id.is_full());

    const Subspace mixed = span(2, 2, {{1, 1}, {0, 1}});
    CHECK(mixed.dim() == 2);
    CHECK(mixed == id);
    REQUIRE(mixed.basis().size() == 2);
    CHECK(mixed.basis()[0] == vec(2, {1, 0}));
    CHECK(mixed.basis()[1] == vec(2, {0, 1}));
  }

  TEST_CASE("sum") {
    CHECK(sum(span(2, 2, {{1, 0}}), span(2, 2, {{0, 1}})).is_full());
    const Subspace u = span(3, 3, {{1, 2, 0}, {0, 1, 1}});
    CHECK(sum(u, u) == u);
    const Subspace s = sum(span(2, 3, {{1, 1, 0}}), span(2, 3, {{0, 1, 1}}));
    CHECK(s.dim() == 2);
    CHECK(s.contains(vec(2, {1, 0, 1})));
    CHECK(as_set(s) == brute::span(2, 3, {brute::code(2, {1, 1, 0}), brute::code(2, {0, 1, 1})}));
  }

  TEST_CASE("intersection") {
    const Subspace u = span(2, 3, {{1, 1, 0}, {0, 0, 1}});
    CHECK(intersect(u, u) == u);
    CHECK(intersect(span(2, 2, {{1, 0}}), span(2, 2, {{0, 1}})).is_zero());
    const Subspace i = intersect(span(2, 3, {{1, 0, 0}, {0, 1, 0}}), span(2, 3, {{0, 1, 0}, {0, 0, 1}}));
    CHECK(i == span(2, 3, {{0, 1, 0}}));
  }

  TEST_CASE("orthogonal complement") {
    const FieldSpec f(2, 2);
    CHECK(orth_complement(Subspace::full(f)).is_zero());
    CHECK(orth_complement(Subspace::zero(f)).is_full());
    CHECK(orth_complement(span(2, 2, {{1, 0}})) == span(2, 2, {{0, 1}}));
  }

  TEST_CASE("membership") {
    const Subspace u = span(2, 3, {{1, 1, 0}, {0, 1, 1}});
    CHECK(member(Vec{0}, u));
    CHECK(member(Vec{0}, Subspace::zero(FieldSpec(5, 3))));
    CHECK_FALSE(member(vec(2, {0, 1}), span(2, 2, {{1, 0}})));
    CHECK(member(vec(2, {1, 0, 1}), u));
  }

  TEST_CASE("elements") {
    CHECK(Subspace::zero(FieldSpec(2, 3)).elements() == std::vector<Vec>{Vec{0}});
    CHECK(Subspace::full(FieldSpec(2, 2)).elements().size() == 4);
    const auto e = as_set(span(3, 2, {{1, 1}}));
    CHECK(e == brute::Set{0, brute::code(3, {1, 1}), brute::code(3, {2, 2})});
  }

  TEST_CASE("coordinates round trip through element") {
    const Subspace u = span(3, 4, {{1, 2, 0, 1}, {0, 1, 1, 2}, {2, 0, 0, 1}});
    for (std::uint64_t i = 0; i < u.size(); ++i) CHECK(u.coordinate_index(u.element(i)) == i);
  }

  TEST_CASE("random subspaces") {
    const FieldSpec f(2, 4);
    CHECK(random_subspace(f, 0, 3).is_zero());
    CHECK(random_subspace(f, 4, 3).is_full());
    const Subspace s = random_subspace(f, 2, 1);
    CHECK(s.dim() == 2);
    CHECK(s == random_subspace(f, 2, 1));
    // Pinned from a first run.
    CHECK(as_set(s) == brute::Set{0, 6, 8, 14});
  }

  TEST_CASE("subspace counts agree with enumeration of closed subsets") {
    for (auto [p, n] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{2, 4}}) {
      const FieldSpec f(p, n);
      std::vector<std::uint64_t> by_dim(static_cast<std::size_t>(n + 1), 0);
      std::set<brute::Set> seen;
      for (const auto& s : all_subspaces(f)) {
        ++by_dim[static_cast<std::size_t>(s.dim())];
        const auto e = as_set(s);
        CHECK(brute::is_subspace(p, n, e));
        CHECK(seen.insert(e).second);
      }
      for (int k = 0; k <= n; ++k) CHECK(count_subspaces(f, k) == by_dim[static_cast<std::size_t>(k)]);
    }
    CHECK(count_subspaces(FieldSpec(2, 3), 1) == 7);
    CHECK(count_subspaces(FieldSpec(3, 2), 1) == 4);
    CHECK(count_subspaces(FieldSpec(2, 4), 2) == 35);
  }

  TEST_CASE("operations agree with brute force on random spans") {
    std::mt19937_64 rng(17);
    for (int p : {2, 3, 5}) {
      const int n = p == 5 ? 2 : 3;
      const FieldSpec f(p, n);
      for (int trial = 0; trial < 60; ++trial) {
        std::vector<Vec> ga, gb;
        std::vector<brute::Code> ca, cb;
        for (int i = 0; i < static_cast<int>(rng() % 3); ++i) {
          ca.push_back(rng() % f.size());
          ga.push_back(Vec{ca.back()});
        }
        for (int i = 0; i < static_cast<int>(rng() % 3); ++i) {
          cb.push_back(rng() % f.size());
          gb.push_back(Vec{cb.back()});
        }
        const Subspace a = Subspace::span(f, ga);
        const Subspace b = Subspace::span(f, gb);
        const auto sa = brute::span(p, n, ca);
        const auto sb = brute::span(p, n, cb);
        CHECK(as_set(a) == sa);
        std::vector<brute::Code> both = ca;
        both.insert(both.end(), cb.begin(), cb.end());
        CHECK(as_set(sum(a, b)) == brute::span(p, n, both));
        CHECK(as_set(intersect(a, b)) == brute::intersection(sa, sb));
        CHECK(intersect_direct(a, b) == intersect(a, b));
        CHECK(as_set(orth_complement(a)) == brute::orth(p, n, sa));
        CHECK(sum_dim(a, b) == sum(a, b).dim());
      }
    }
  }

  TEST_CASE("field arithmetic") {
    const FieldSpec f(5, 3);
    const Vec a = vec(5, {1, 4, 2});
    const Vec b = vec(5, {3, 3, 0});
    CHECK(f.add(a, b) == vec(5, {4, 2, 2}));
    CHECK(f.sub(a, b) == vec(5, {3, 1, 2}));
    CHECK(f.neg(a) == vec(5, {4, 1, 3}));
    CHECK(f.scale(3, a) == vec(5, {3, 2, 1}));
    CHECK(f.dot(a, b) == (3 + 12) % 5);
    for (int x = 1; x < 5; ++x) CHECK(x * f.inv(x) % 5 == 1);
    CHECK_THROWS_AS(FieldSpec(4, 2), InvalidArgument);
  }
}
