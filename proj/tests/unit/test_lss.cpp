#include "common.hpp"

#include "tvs/lss.hpp"

using namespace tvs;

namespace {

// V_x = span{x} on F_p^n.
LinearSubspaceSystem span_x(int p, int n) {
  const FieldSpec f(p, n);
  std::vector<Subspace> table;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const Vec v{x};
    table.push_back(Subspace::span(f, std::span<const Vec>(&v, 1)));
  }
  return LinearSubspaceSystem::over(f, f, std::move(table));
}

LinearSubspaceSystem zero_system(int p, int nG, int nH) {
  const FieldSpec G(p, nG);
  const FieldSpec H(p, nH);
  return LinearSubspaceSystem::over(G, H, std::vector<Subspace>(G.size(), Subspace::zero(H)));
}

}  // namespace

TEST_SUITE("lss") {
  TEST_CASE("from_lss builds the complement columns") {
    CHECK(from_lss(zero_system(2, 2, 3)) == TransverseSet::full({2, 2, 3}));
    for (int n : {2, 3}) CHECK(to_gridset(from_lss(span_x(2, n))) == testutil::dot_zero_grid(2, n));
    CHECK(to_gridset(from_lss(span_x(3, 2))) == testutil::dot_zero_grid(3, 2));

    const FieldSpec G(2, 2);
    std::vector<Subspace> table(4, Subspace::full(G));
    table[0] = Subspace::zero(G);
    CHECK(to_gridset(from_lss(LinearSubspaceSystem::over(G, G, table))) == testutil::axes_grid(2, 2, 2));
  }

  TEST_CASE("from_transverse") {
    const auto full = from_transverse(TransverseSet::full({2, 2, 2}));
    for (const auto& v : full.table()) CHECK(v.is_zero());

    const auto s = from_transverse(to_transverse(testutil::dot_zero_grid(2, 3)));
    CHECK(s == span_x(2, 3));

    const auto axes = from_transverse(to_transverse(testutil::axes_grid(2, 2, 2)));
    CHECK(axes.at(Vec{0}).is_zero());
    for (std::uint64_t x = 1; x < 4; ++x) CHECK(axes.at(Vec{x}).is_full());
  }

  TEST_CASE("from_transverse on subspaces uses coordinates of V") {
    const TransverseSet t = to_transverse(testutil::dot_zero_grid(2, 3));
    const Subspace U = testutil::span(2, 3, {{1, 0, 0}, {0, 1, 0}});
    const Subspace V = testutil::span(2, 3, {{0, 1, 0}, {0, 0, 1}});
    const auto s = from_transverse(t, U, V);
    CHECK(s.domain().n() == 2);
    CHECK(s.values().n() == 2);
    for (std::uint64_t i = 0; i < s.domain().size(); ++i) {
      const Vec x = s.lift_index(Vec{i});
      // Column slice inside V, mapped to coordinates, then complemented.
      brute::Set slice;
      for (std::uint64_t j = 0; j < 4; ++j)
        if (brute::dot(2, 3, x.code, V.element(j).code) == 0) slice.insert(j);
      CHECK(testutil::as_set(s.at(Vec{i})) == brute::orth(2, 2, slice));
    }
  }

  TEST_CASE("validation") {
    CHECK(validate(zero_system(2, 3, 2)));
    CHECK(validate(span_x(2, 3)));
    CHECK(validate(span_x(3, 2)));

    const LinearSubspaceSystem good = span_x(2, 3);
    std::vector<Subspace> table(good.table().begin(), good.table().end());
    table[3] = testutil::span(2, 3, {{0, 0, 1}});
    const auto bad = validate(LinearSubspaceSystem::over(FieldSpec(2, 3), FieldSpec(2, 3), table));
    CHECK_FALSE(bad.ok);
    CHECK(!bad.reason.empty());
    CHECK(FieldSpec(2, 3).add(bad.x1, bad.x2) == Vec{3});

    std::vector<Subspace> nonzero(good.table().begin(), good.table().end());
    nonzero[0] = testutil::span(2, 3, {{1, 0, 0}});
    CHECK_FALSE(validate(LinearSubspaceSystem::over(FieldSpec(2, 3), FieldSpec(2, 3), nonzero)).ok);
    CHECK_THROWS_AS(from_lss(LinearSubspaceSystem::over(FieldSpec(2, 3), FieldSpec(2, 3), nonzero)),
                    InvalidArgument);
  }

  TEST_CASE("scaling and zero sums") {
    CHECK(check_scaling(span_x(2, 3)));
    CHECK(check_scaling(span_x(3, 2)));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto s = random_lss(FieldSpec(3, 2), FieldSpec(3, 2), 2, seed);
      REQUIRE(validate(s));
      CHECK(check_scaling(s));
      CHECK(check_zero_sum(s, 2));
      CHECK(check_zero_sum(s, 3));
      // Brute force: V_x + V_{-x} = V_x for every x.
      for (std::uint64_t x = 0; x < 9; ++x) {
        const Vec nx = s.domain().neg(Vec{x});
        CHECK(sum(s.at(Vec{x}), s.at(nx)) == s.at(Vec{x}));
      }
    }
  }

  TEST_CASE("quasirandomness profile") {
    const auto z = quasirandomness_profile(zero_system(2, 2, 2), 0);
    CHECK(z.eps1 == 0.0);
    CHECK(z.eps2 == 0.0);

    const auto q = quasirandomness_profile(span_x(2, 3), 1);
    CHECK(q.bad_points == 1);
    CHECK(q.eps1 == doctest::Approx(1.0 / 8));
    CHECK(q.bad_pairs == 7);
    CHECK(q.eps2 == doctest::Approx(7.0 / 64));

    const auto d = quasirandomness_profile(from_transverse(to_transverse(testutil::dot_zero_grid(2, 4))), 1);
    CHECK(d.bad_points == 1);
    CHECK(d.bad_pairs == 15);
    CHECK(d.eps1 == doctest::Approx(1.0 / 16));
    CHECK(d.eps2 == doctest::Approx(15.0 / 256));
  }

  TEST_CASE("tuple intersection fraction") {
    CHECK(sum_intersection_fraction(zero_system(2, 2, 2), 2) == 0.0);
    // For span{x} on F_2^2 with r = 1, bad pairs are x0 = x1 != 0.
    CHECK(sum_intersection_fraction(span_x(2, 2), 1) == doctest::Approx(3.0 / 16));
  }

  TEST_CASE("random systems are valid") {
    for (int p : {2, 3})
      for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto s = random_lss(FieldSpec(p, 2), FieldSpec(p, 3), 3, seed);
        CHECK(validate(s));
        CHECK(is_transverse(to_gridset(from_lss(s))));
      }
  }
}
