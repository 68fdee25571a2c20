#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "vortnet/error.hpp"
#include "vortnet/sampling.hpp"

using namespace vortnet;

namespace {

bool distinct_in_range(const SampleIndexSet& s, std::size_t n) {
  std::set<std::size_t> seen(s.indices.begin(), s.indices.end());
  return seen.size() == s.indices.size() && (s.indices.empty() || *seen.rbegin() < n);
}

// Largest |share of samples in a quadrant - 1/4| over the four quadrants.
double quadrant_discrepancy(const GridSpec& g, const SampleIndexSet& s) {
  std::array<double, 4> counts{};
  for (std::size_t i : s.indices) {
    const auto [r, c] = g.row_col(i);
    counts[(r >= g.ny / 2 ? 2 : 0) + (c >= g.nx / 2 ? 1 : 0)] += 1.0;
  }
  double worst = 0.0;
  for (double c : counts) worst = std::max(worst, std::abs(c / static_cast<double>(s.size()) - 0.25));
  return worst;
}

}  // namespace

TEST_CASE("radical inverse: hand values") {
  CHECK(radical_inverse(1, 2) == 0.5);
  CHECK(radical_inverse(2, 2) == 0.25);
  CHECK(radical_inverse(3, 2) == 0.75);
  CHECK(radical_inverse(1, 3) == 1.0 / 3.0);
  CHECK(radical_inverse(2, 3) == 2.0 / 3.0);
  CHECK(radical_inverse(3, 3) == 1.0 / 9.0);
  CHECK(radical_inverse(0, 2) == 0.0);
}

TEST_CASE("radical inverse: digit-reversal oracle") {
  for (unsigned base : {2u, 3u, 5u, 7u}) {
    for (std::uint64_t t = 0; t < 5000; ++t) {
      const double got = radical_inverse(t, base);
      // The oracle rounds twice (long double, then double); allow one ulp.
      const double want = oracle::radical_inverse(t, base);
      CHECK(std::abs(got - want) <= std::nextafter(want, 2.0) - want);
      CHECK(got >= 0.0);
      CHECK(got < 1.0);
    }
  }
  CHECK(radical_inverse(std::uint64_t{1} << 40, 2) == std::ldexp(1.0, -41));
}

TEST_CASE("uniform sampling") {
  SUBCASE("l = n is a permutation") {
    const auto s = sample_uniform(50, 50, 3);
    auto sorted = s.indices;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 50; ++i) CHECK(sorted[i] == i);
    CHECK(s.n == 50);
    CHECK(s.sampler == SamplerKind::uniform);
  }
  SUBCASE("determinism and seed dependence") {
    CHECK(sample_uniform(1000, 30, 9).indices == sample_uniform(1000, 30, 9).indices);
    CHECK(sample_uniform(1000, 30, 9).indices != sample_uniform(1000, 30, 10).indices);
    // Draw order is preserved: a shorter draw is a prefix of a longer one.
    const auto a = sample_uniform(1000, 10, 4), b = sample_uniform(1000, 40, 4);
    CHECK(std::equal(a.indices.begin(), a.indices.end(), b.indices.begin()));
  }
  SUBCASE("inclusion frequencies are binomial") {
    constexpr int kTrials = 10000;
    std::vector<int> hits(100, 0);
    for (int t = 0; t < kTrials; ++t)
      for (std::size_t i : sample_uniform(100, 10, static_cast<std::uint64_t>(t)).indices) ++hits[i];
    const double mean = kTrials * 0.1, sd = std::sqrt(kTrials * 0.1 * 0.9);
    for (int h : hits) CHECK(std::abs(h - mean) <= 3.0 * sd);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sample_uniform(10, 11, 0), InvalidArgument);
    CHECK_THROWS_AS(sample_uniform(10, 0, 0), InvalidArgument);
  }
}

TEST_CASE("halton sampling") {
  SUBCASE("first point on a 2x2 grid") {
    const auto s = sample_halton({2, 2, 1, 1}, 1, 0);
    REQUIRE(s.size() == 1);
    CHECK(s.indices[0] == 1);
  }
  SUBCASE("follows the floor mapping with duplicates skipped") {
    const GridSpec g{7, 5, 1, 1};
    const auto s = sample_halton(g, 20, 3);
    std::vector<std::size_t> expected;
    for (std::uint64_t t = 4; expected.size() < 20; ++t) {
      const auto c = static_cast<std::size_t>(std::floor(oracle::radical_inverse(t, 2) * 7));
      const auto r = static_cast<std::size_t>(std::floor(oracle::radical_inverse(t, 3) * 5));
      const std::size_t i = r * 7 + c;
      if (std::find(expected.begin(), expected.end(), i) == expected.end()) expected.push_back(i);
    }
    CHECK(s.indices == expected);
  }
  SUBCASE("l = n covers every node") {
    for (auto [nx, ny] : {std::pair{2, 2}, std::pair{3, 5}, std::pair{8, 8}, std::pair{11, 6}}) {
      const GridSpec g{static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), 1, 1};
      for (std::uint64_t offset : {0u, 17u}) {
        const auto s = sample_halton(g, g.size(), offset);
        CHECK(s.size() == g.size());
        CHECK(distinct_in_range(s, g.size()));
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sample_halton({3, 3, 1, 1}, 10, 0), InvalidArgument);
    CHECK_THROWS_AS(sample_halton({3, 3, 1, 1}, 0, 0), InvalidArgument);
  }
}

TEST_CASE("draw_sample") {
  const GridSpec g{16, 12, 0.5, 0.5};
  for (auto kind : {SamplerKind::uniform, SamplerKind::halton}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto s = draw_sample(kind, g, 19, seed);
      CHECK(s.size() == 19);
      CHECK(s.n == g.size());
      CHECK(s.sampler == kind);
      CHECK(s.seed == seed);
      CHECK(distinct_in_range(s, g.size()));
      CHECK(draw_sample(kind, g, 19, seed).indices == s.indices);
    }
  }
  // Halton seeds select offset seed * l.
  CHECK(draw_sample(SamplerKind::halton, g, 19, 3).indices == sample_halton(g, 19, 57).indices);
  CHECK(draw_sample(SamplerKind::halton, g, 19, 0).indices != draw_sample(SamplerKind::halton, g, 19, 1).indices);
  CHECK(draw_sample(SamplerKind::uniform, g, 19, 5).indices == sample_uniform(g.size(), 19, 5).indices);
}

TEST_CASE("halton covers quadrants better than uniform draws") {
  const GridSpec g{64, 64, 1, 1};
  const std::size_t l = g.size() / 10;
  const double halton = quadrant_discrepancy(g, sample_halton(g, l, 0));
  std::vector<double> uniform;
  for (std::uint64_t seed = 0; seed < 20; ++seed) uniform.push_back(quadrant_discrepancy(g, sample_uniform(g.size(), l, seed)));
  CHECK(halton < oracle::quantile(uniform, 0.5));
}

TEST_CASE("index files round trip") {
  const auto s = draw_sample(SamplerKind::halton, {9, 9, 1, 1}, 12, 2);
  std::stringstream buf;
  write_indices(buf, s);
  CHECK(buf.str().back() == '\n');
  CHECK(read_indices(buf) == s.indices);
  std::istringstream bad("3\nx\n");
  CHECK_THROWS_AS(read_indices(bad), FormatError);
}

TEST_CASE("sampler names") {
  CHECK(parse_sampler("uniform") == SamplerKind::uniform);
  CHECK(parse_sampler("halton") == SamplerKind::halton);
  CHECK(to_string(SamplerKind::halton) == "halton");
  CHECK_THROWS_AS(parse_sampler("sobol"), InvalidArgument);
}
