#include "common.hpp"

#include "tvs/variety.hpp"

using namespace tvs;
using testutil::matrix;

namespace {

// Smallest r such that r forms on F_2^2 x F_2^2 have common zero set equal to the grid.
int brute_min_forms(const GridSet& g) {
  std::vector<std::uint16_t> zero_sets(16);
  for (unsigned b = 0; b < 16; ++b) {
    const std::vector<std::vector<int>> rows = {{int(b & 1U), int(b >> 1 & 1U)}, {int(b >> 2 & 1U), int(b >> 3 & 1U)}};
    std::uint16_t z = 0;
    for (brute::Code x = 0; x < 4; ++x)
      for (brute::Code y = 0; y < 4; ++y)
        if (brute::form(2, 2, 2, rows, x, y) == 0) z |= static_cast<std::uint16_t>(1U << (x * 4 + y));
    zero_sets[b] = z;
  }
  std::uint16_t target = 0;
  for (brute::Code x = 0; x < 4; ++x)
    for (brute::Code y = 0; y < 4; ++y)
      if (g.test(Vec{x}, Vec{y})) target |= static_cast<std::uint16_t>(1U << (x * 4 + y));
  int best = 99;
  for (unsigned subset = 0; subset < (1U << 16); ++subset) {
    const int r = __builtin_popcount(subset);
    if (r >= best) continue;
    std::uint16_t z = 0xffff;
    for (unsigned b = 0; b < 16; ++b)
      if (subset >> b & 1U) z &= zero_sets[b];
    if (z == target) best = r;
  }
  return best;
}

}  // namespace

TEST_SUITE("variety") {
  const Ambient2 a22{2, 2, 2};
  const Subspace G2 = Subspace::full(FieldSpec(2, 2));
  const Matrix dot2 = matrix(2, {{1, 0}, {0, 1}});

  TEST_CASE("membership") {
    const BilinearVariety w(G2, G2, {dot2});
    CHECK(w.member(Vec{0}, Vec{0}));
    CHECK_FALSE(w.member(testutil::vec(2, {1, 0}), testutil::vec(2, {1, 0})));
    CHECK(w.member(testutil::vec(2, {1, 0}), testutil::vec(2, {0, 1})));
    const BilinearVariety all(G2, G2, {});
    for (std::uint64_t x = 0; x < 4; ++x)
      for (std::uint64_t y = 0; y < 4; ++y) CHECK(all.member(Vec{x}, Vec{y}));
  }

  TEST_CASE("enumeration and codimension") {
    CHECK(enumerate(BilinearVariety(G2, G2, {})) == GridSet::full(a22));
    CHECK(BilinearVariety(G2, G2, {}).codimension() == 0);
    const BilinearVariety w(G2, G2, {dot2});
    CHECK(enumerate(w) == testutil::dot_zero_grid(2, 2));
    CHECK(enumerate(w).count() == 10);
    CHECK(w.codimension() == 1);
    CHECK(w.density_bound() == doctest::Approx(0.5));
    const BilinearVariety line(testutil::span(2, 2, {{1, 0}}), G2, {dot2});
    CHECK(line.codimension() == 2);
  }

  TEST_CASE("forms are reduced") {
    const BilinearVariety w(G2, G2, {dot2, dot2, dot2 + dot2});
    CHECK(w.r() == 1);
    CHECK(enumerate(w) == testutil::dot_zero_grid(2, 2));
  }

  TEST_CASE("fibers") {
    const BilinearVariety w(G2, G2, {dot2});
    for (brute::Code x = 0; x < 4; ++x) {
      brute::Set want;
      for (brute::Code y = 0; y < 4; ++y)
        if (brute::dot(2, 2, x, y) == 0) want.insert(y);
      CHECK(testutil::as_set(w.fiber(Vec{x})) == want);
    }
  }

  TEST_CASE("containment certificates") {
    const TransverseSet dot = to_transverse(testutil::dot_zero_grid(2, 2));
    const FieldSpec f(2, 2);
    const BilinearVariety origin(Subspace::zero(f), Subspace::zero(f), {});
    CHECK(contained_in(origin, dot).pass);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = gen_from_bilinear(BilinearMapSpec{{3, 2, 2}, 1, 2, 1}, seed);
      const BilinearVariety w(g.U, g.V, g.forms);
      for (auto mode : {CertifyMode::Exhaustive, CertifyMode::Sampled, CertifyMode::Auto})
        CHECK(contained_in(w, g.set, mode, seed).pass);
      CHECK(contained_in(w, g.set, CertifyMode::Exhaustive, 0, kMinSampledCells, 4).mode == "columnwise");
    }

    const BilinearVariety full(G2, G2, {});
    const auto cert = contained_in(full, dot, CertifyMode::Exhaustive);
    CHECK_FALSE(cert.pass);
    REQUIRE(cert.violation.has_value());
    const auto [x, y] = *cert.violation;
    CHECK_FALSE(dot.contains(x, y));
    const auto sampled = contained_in(full, dot, CertifyMode::Sampled, 3);
    CHECK_FALSE(sampled.pass);
    CHECK(sampled.mode == "sampled");
  }

  TEST_CASE("exact variety oracle") {
    const auto full = is_exact_variety(TransverseSet::full(a22));
    CHECK(full.exact);
    CHECK(full.witness.empty());

    const auto dot = is_exact_variety(to_transverse(testutil::dot_zero_grid(2, 2)));
    CHECK(dot.exact);
    REQUIRE(dot.witness.size() == 1);
    CHECK(enumerate(BilinearVariety(G2, G2, dot.witness)) == testutil::dot_zero_grid(2, 2));

    const GridSet axes = testutil::axes_grid(2, 2, 2);
    const auto ax = is_exact_variety(to_transverse(axes));
    CHECK(ax.exact);
    CHECK(ax.minimal);
    CHECK(static_cast<int>(ax.witness.size()) == brute_min_forms(axes));
    CHECK(ax.witness.size() == 2);
    CHECK(ax.annihilator_dim == 4);
    CHECK(enumerate(BilinearVariety(G2, G2, ax.witness)) == axes);
  }

  TEST_CASE("oracle agrees with brute force on every transverse set of F_2^2 x F_2^2") {
    enumerate_transverse_small(a22, [&](const TransverseSet& t) {
      const auto res = is_exact_variety(t);
      const int want = brute_min_forms(to_gridset(t));
      CHECK(res.exact == (want < 99));
      if (res.exact) {
        CHECK(static_cast<int>(res.witness.size()) == want);
        CHECK(enumerate(BilinearVariety(G2, G2, res.witness)) == to_gridset(t));
      }
      return true;
    });
  }

  TEST_CASE("oracle caps") {
    CHECK_THROWS_AS(is_exact_variety(TransverseSet::full({2, 2, 5})), CapExceeded);
    CHECK_THROWS_AS(is_exact_variety(TransverseSet::full({5, 1, 1})), CapExceeded);
  }
}
