#include <gtest/gtest.h>

#include "closefn/corpus.hpp"
#include "closefn/serialize.hpp"

using namespace closefn;

TEST(Corpus, SameSeedSamePair) {
  const BoxDomain dom = BoxDomain::cube(2, -1.0, 1.0);
  const auto [f1, g1] = random_pair(123, default_family_mix(), dom);
  const auto [f2, g2] = random_pair(123, default_family_mix(), dom);
  EXPECT_EQ(function_to_json(f1).dump(), function_to_json(f2).dump());
  EXPECT_EQ(function_to_json(g1).dump(), function_to_json(g2).dump());
}

TEST(Corpus, QuadraticOnlyMixRespectsEigenRange) {
  for (std::size_t d = 1; d <= 3; ++d) {
    const BoxDomain dom = BoxDomain::cube(d, -1.0, 1.0);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto [f, g] = random_pair(s, {{"quadratic", 1.0}}, dom, CorpusOptions{false, 0.0});
      for (const auto* h : {&f, &g}) {
        ASSERT_EQ(h->family_name(), "quadratic");
        EXPECT_GE(*h->regularity().rho, 0.1 - 1e-9);
        EXPECT_LE(*h->regularity().smooth_L, 10.0 + 1e-9);
      }
    }
  }
}

TEST(Corpus, ThousandDrawsAreValid) {
  const BoxDomain d1 = BoxDomain::interval(-1.0, 1.0), d2 = BoxDomain::cube(2, -1.0, 1.0);
  std::map<std::string, int> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    CorpusOptions opt;
    opt.boundary_minimizers = k % 2 == 0;
    const auto [f, g] = corpus_pair(77, k, default_family_mix(), k % 4 == 0 ? d2 : d1, opt);
    ++seen[std::string(f.family_name())];
    // construction validates; round-tripping re-validates
    EXPECT_NO_THROW(function_from_json(function_to_json(f)));
    EXPECT_NO_THROW(function_from_json(function_to_json(g)));
  }
  for (const char* fam : {"quadratic", "scaled_abs", "max_affine", "huber", "logistic_1d", "shifted", "mixture"})
    EXPECT_GT(seen[fam], 0) << fam;
}

TEST(Corpus, OneDimensionalFamiliesStayOneDimensional) {
  const BoxDomain d2 = BoxDomain::cube(2, -1.0, 1.0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [f, g] = random_pair(s, {{"scaled_abs", 1.0}, {"huber", 1.0}}, d2);
    EXPECT_NE(f.family_name(), "scaled_abs");
  }
}

TEST(Corpus, UnknownFamily) {
  EXPECT_THROW(random_pair(1, {{"cubic", 1.0}}, BoxDomain::interval(0, 1)), Error);
}
