#include "common.hpp"

#include "tvs/extraction.hpp"
#include "tvs/lss.hpp"

using namespace tvs;

namespace {

// |A_x1 ∩ A_x2| by direct cell counting on the dot-product set.
std::uint64_t common_zeros(int p, int n, brute::Code x1, brute::Code x2) {
  std::uint64_t c = 0;
  for (brute::Code y = 0; y < brute::ipow(p, n); ++y)
    if (brute::dot(p, n, x1, y) == 0 && brute::dot(p, n, x2, y) == 0) ++c;
  return c;
}

LinearSubspaceSystem from_table(int p, int nG, int nH, const std::function<Subspace(Vec)>& at) {
  const FieldSpec G(p, nG);
  std::vector<Subspace> t;
  for (std::uint64_t x = 0; x < G.size(); ++x) t.push_back(at(Vec{x}));
  return LinearSubspaceSystem::over(G, FieldSpec(p, nH), std::move(t));
}

// An invertible 4x4 matrix over F_2 and its action on codes.
const int kM[4][4] = {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 0}};
brute::Code apply_m(brute::Code x) {
  const auto d = brute::digits(2, 4, x);
  std::vector<int> out(4, 0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[static_cast<std::size_t>(i)] += kM[i][j] * d[static_cast<std::size_t>(j)];
  return brute::code(2, out);
}

}  // namespace

TEST_SUITE("regularize") {
  TEST_CASE("threshold formulas") {
    CHECK(d0_bound(2, 1, 2) == 18);
    CHECK(d0_bound(2, 5, 8) == 16);
    CHECK(d0_bound(2, 1, 1) == 14);
    CHECK(drc_rounds(2, 0.1) == 11);
    CHECK(drc_rounds(3, 0.5) == 4);
  }

  TEST_CASE("full set is already regular") {
    const TransverseSet t = TransverseSet::full({2, 3, 3});
    const auto out = regularize(t, {.eps = 0.2});
    CHECK(out.U.is_full());
    CHECK(out.V.is_full());
    CHECK(out.d == 0);
    CHECK(out.certified.exceptions_i == 0);
    CHECK(out.certified.exceptions_ii == 0);
  }

  TEST_CASE("dot-product set on F_2^4") {
    const TransverseSet t = to_transverse(testutil::dot_zero_grid(2, 4));
    const auto out = regularize(t, {.eps = 0.1});
    CHECK(out.U.is_full());
    CHECK(out.V.is_full());
    CHECK(out.d == 1);
    CHECK(out.certified.exceptions_i == 1);
    CHECK(out.certified.fraction_i() == doctest::Approx(1.0 / 16));
    CHECK(out.certified.fraction_i() <= 0.1);
    CHECK(out.certified.fraction_ii() <= 0.3);
    CHECK(out.cells == 136);
    CHECK(out.d0 == 1);

    std::uint64_t bad_pairs = 0;
    for (brute::Code x1 = 0; x1 < 16; ++x1)
      for (brute::Code x2 = 0; x2 < 16; ++x2)
        if (common_zeros(2, 4, x1, x2) != 4) ++bad_pairs;
    const auto counts = regularity_counts(t, Subspace::full(t.G()), Subspace::full(t.H()), 1);
    CHECK(counts.exceptions_ii == bad_pairs);
    CHECK(counts.pairs == 256);
    CHECK(counts.exceptions_ii == out.certified.exceptions_ii);
  }

  TEST_CASE("regularity counts on restricted subspaces agree with direct counting") {
    const TransverseSet t = to_transverse(testutil::dot_zero_grid(3, 2));
    const Subspace U = testutil::span(3, 2, {{1, 1}});
    const Subspace V = testutil::span(3, 2, {{1, 2}});
    const auto c = regularity_counts(t, U, V, 1);
    std::uint64_t ei = 0, eii = 0;
    const auto us = U.elements();
    const auto vs = V.elements();
    for (Vec x : us) {
      std::uint64_t k = 0;
      for (Vec y : vs) k += brute::dot(3, 2, x.code, y.code) == 0;
      ei += k * 3 != vs.size();
    }
    for (Vec x1 : us)
      for (Vec x2 : us) {
        std::uint64_t k = 0;
        for (Vec y : vs) k += brute::dot(3, 2, x1.code, y.code) == 0 && brute::dot(3, 2, x2.code, y.code) == 0;
        eii += k * 9 != vs.size();
      }
    CHECK(c.exceptions_i == ei);
    CHECK(c.exceptions_ii == eii);
  }

  TEST_CASE("output always certifies its own properties") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto g = gen_from_bilinear(BilinearMapSpec{{2, 4, 4}, 2}, seed);
      const auto out = regularize(g.set, {.eps = 0.1, .seed = seed});
      const auto c = regularity_counts(g.set, out.U, out.V, out.d);
      CHECK(c.exceptions_i == out.certified.exceptions_i);
      CHECK(c.exceptions_ii == out.certified.exceptions_ii);
      CHECK(c.fraction_i() <= 0.1);
      CHECK(c.fraction_ii() <= 0.3);
    }
  }

  TEST_CASE("same seed, same output") {
    const auto g = gen_from_bilinear(BilinearMapSpec{{2, 5, 5}, 2}, 9);
    const auto a = regularize(g.set, {.eps = 0.1, .seed = 4});
    const auto b = regularize(g.set, {.eps = 0.1, .seed = 4});
    CHECK(a.U == b.U);
    CHECK(a.V == b.V);
    CHECK(a.d == b.d);
    CHECK(a.trace == b.trace);
  }
}

TEST_SUITE("anchor") {
  TEST_CASE("zero system scores 1 everywhere") {
    const auto s = from_table(2, 3, 2, [](Vec) { return Subspace::zero(FieldSpec(2, 2)); });
    const auto best = choose_anchor(s, 0);
    CHECK(best.score == 1.0);
    CHECK(choose_anchor(s, 0, 1).score == 1.0);
  }

  TEST_CASE("span{x} on F_2^4") {
    const FieldSpec f(2, 4);
    const auto s = from_table(2, 4, 4, [&](Vec x) { return Subspace::span(f, std::vector<Vec>{x}); });
    // Triples (x, y, z): a, x, y independent, x + y + a and z nonzero, x + y + a outside span{x, y, z}.
    std::uint64_t good = 0;
    for (brute::Code x = 0; x < 16; ++x)
      for (brute::Code y = 0; y < 16; ++y) {
        const brute::Code w = x ^ y ^ 1U;
        if (x == 0 || y == 0 || w == 0 || brute::span(2, 4, {1, x, y}).size() != 8) continue;
        for (brute::Code z = 1; z < 16; ++z)
          if (!brute::span(2, 4, {x, y, z}).count(w)) ++good;
      }
    const auto best = choose_anchor(s, 1);
    CHECK(best.a == Vec{1});
    CHECK(best.good_triples == good);
    CHECK(best.score == doctest::Approx(static_cast<double>(good) / 4096));
    CHECK(best.scanned == 16);

    const auto only_zero = choose_anchor(s, 1, 1);
    CHECK(only_zero.a == Vec{0});
    CHECK(only_zero.score == 0.0);
    CHECK(only_zero.scanned == 1);

    // Pairs for a = e1, counted directly: x, y, x+y-a nonzero and a, x, y independent.
    const Vec a{1};
    std::uint64_t want = 0;
    for (brute::Code x = 0; x < 16; ++x)
      for (brute::Code y = 0; y < 16; ++y) {
        const brute::Code z = x ^ y ^ a.code;
        if (x == 0 || y == 0 || z == 0) continue;
        if (brute::span(2, 4, {a.code, x, y}).size() == 8) ++want;
      }
    CHECK(anchor_pairs(s, 1, a).size() == want);
  }
}

TEST_SUITE("structure") {
  TEST_CASE("linear system from an invertible matrix") {
    const FieldSpec f(2, 4);
    const auto s = from_table(2, 4, 4, [&](Vec x) { return Subspace::span(f, std::vector<Vec>{Vec{apply_m(x.code)}}); });
    const auto st = bilinear_system_structure(s, 1);
    CHECK(st.d == 1);
    CHECK(st.good_count >= 15);
    for (brute::Code x = 1; x < 16; ++x) {
      CHECK(st.good[x]);
      const Matrix m = st.at(f, Vec{x});
      CHECK(m.column(f, 0).code == apply_m(x));
    }
  }

  TEST_CASE("zero system") {
    const auto s = from_table(3, 2, 2, [](Vec) { return Subspace::zero(FieldSpec(3, 2)); });
    const auto st = bilinear_system_structure(s, 0);
    CHECK(st.good_count == 9);
    CHECK(st.psi.is_zero());
    for (const auto& m : st.phi) CHECK(m.is_zero());
  }

  TEST_CASE("a single repeated line has no admissible anchor") {
    const FieldSpec f(2, 3);
    const Subspace line = testutil::span(2, 3, {{1, 0, 0}});
    const auto s = from_table(2, 3, 3, [&](Vec x) { return x.code == 0 ? Subspace::zero(f) : line; });
    try {
      bilinear_system_structure(s, 1);
      FAIL("expected an extraction error");
    } catch (const ExtractionError& e) {
      CHECK(e.kind() == ExtractionError::Kind::ProfileRejected);
    }
    StructureConfig lax;
    lax.max_eps1 = 1.0;
    lax.max_eps2 = 1.0;
    try {
      bilinear_system_structure(s, 1, lax);
      FAIL("expected an extraction error");
    } catch (const ExtractionError& e) {
      CHECK(e.kind() == ExtractionError::Kind::AnchorTooWeak);
    }
  }

  TEST_CASE("good set is exact") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto g = gen_from_bilinear(BilinearMapSpec{{2, 4, 4}, 1}, seed);
      const auto s = from_transverse(g.set);
      try {
        const auto st = bilinear_system_structure(s, 1);
        for (std::uint64_t x = 0; x < 16; ++x) {
          const Matrix m = st.at(s.domain(), Vec{x});
          const bool match = Subspace::span(s.values(), m.columns(s.values())) == s.at(Vec{x});
          CHECK(static_cast<bool>(st.good[x]) == match);
        }
      } catch (const ExtractionError&) {
      }
    }
  }
}

TEST_SUITE("extraction") {
  TEST_CASE("full set gives the whole grid") {
    const auto rep = extract_variety(TransverseSet::full({2, 3, 2}));
    CHECK(rep.variety.r() == 0);
    CHECK(rep.variety.U().is_full());
    CHECK(rep.variety.V().is_full());
    CHECK(rep.certificate.pass);
  }

  TEST_CASE("dot-product set on F_2^4") {
    const TransverseSet t = to_transverse(testutil::dot_zero_grid(2, 4));
    ExtractConfig cfg;
    cfg.eps = 0.1;
    cfg.certify = CertifyMode::Exhaustive;
    const auto rep = extract_variety(t, cfg);
    CHECK(rep.variety.r() == 1);
    CHECK(rep.certificate.pass);
    CHECK(rep.certificate.mode == "exhaustive");
    for (brute::Code x = 0; x < 16; ++x)
      for (brute::Code y = 0; y < 16; ++y)
        if (rep.variety.member(Vec{x}, Vec{y})) CHECK(brute::dot(2, 4, x, y) == 0);
  }

  TEST_CASE("every transverse set on F_2^2 x F_2^2") {
    std::uint64_t n = 0;
    enumerate_transverse_small({2, 2, 2}, [&](const TransverseSet& t) {
      ++n;
      const auto rep = extract_variety(t);
      CHECK(rep.certificate.pass);
      for (brute::Code x = 0; x < 4; ++x)
        for (brute::Code y = 0; y < 4; ++y)
          if (rep.variety.member(Vec{x}, Vec{y})) CHECK(t.contains(Vec{x}, Vec{y}));
      return true;
    });
    CHECK(n == 50);
  }

  TEST_CASE("generated varieties are recovered within their own codimension") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto g = gen_from_bilinear(BilinearMapSpec{{2, 5, 5}, 1}, seed);
      ExtractConfig cfg;
      cfg.eps = 0.1;
      cfg.seed = seed;
      const auto rep = extract_variety(g.set, cfg);
      CHECK(rep.certificate.pass);
      CHECK(rep.variety.r() <= 2);
    }
  }
}
