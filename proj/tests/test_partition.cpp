#include <doctest.h>

#include <cmath>
#include <sstream>

#include "orey/error.hpp"
#include "orey/partition.hpp"

using namespace orey;

TEST_SUITE("partition") {
  TEST_CASE("regular grids") {
    const auto p = make_regular(8, 2.0);
    CHECK(p.size() == 9);
    CHECK(p.time(0) == 0.0);
    CHECK(p.horizon() == 2.0);
    const auto m = mesh_stats(p);
    CHECK(m.m_n == doctest::Approx(0.25));
    CHECK(m.p_n == doctest::Approx(0.25));
    CHECK(m.c_ratio == doctest::Approx(1.0));
    CHECK(is_regular(p));
    const auto r = ratio_profile(p);
    REQUIRE(r.range.size() == 1);
    CHECK(r.range[0] == doctest::Approx(1.0));
  }

  TEST_CASE("subsampling regular grids is exact") {
    const auto fine = make_regular(1024, 1.0);
    const auto coarse = subsample(fine, 4);
    CHECK(coarse == make_regular(256, 1.0));
    CHECK(is_nested(coarse, fine));
    const auto idx = embedding_indices(coarse, fine);
    CHECK(idx[3] == 12);
    CHECK_THROWS_AS(subsample(make_regular(10, 1.0), 3), AlignmentError);
  }

  TEST_CASE("nesting failures") {
    const auto a = make_regular(6, 1.0), b = make_regular(4, 1.0);
    CHECK_FALSE(is_nested(a, b));
    CHECK_THROWS_AS(embedding_indices(a, b), NestingError);
  }

  TEST_CASE("alternating partition ratios") {
    const auto p = make_alternating(2.0, 8, 1.0);
    CHECK(p.steps() == 16);
    CHECK(p.horizon() == 1.0);
    const auto m = mesh_stats(p);
    CHECK(m.c_ratio == doctest::Approx(2.0));
    const auto r = ratio_profile(p);
    REQUIRE(r.range.size() == 2);
    CHECK(r.range[0] == doctest::Approx(0.5));
    CHECK(r.range[1] == doctest::Approx(2.0));
    double prod = 1;
    for (double v : r.values) prod *= v;
    // an odd number of ratios telescopes to the first over the last step
    CHECK(prod == doctest::Approx(p.step(1) / p.step(p.steps())).epsilon(1e-12));
  }

  TEST_CASE("ratio profile covers [0, T]") {
    const auto p = make_perturbed(50, 3.0, 1.7, 9);
    const auto r = ratio_profile(p);
    CHECK(r.breakpoints.front() == 0.0);
    CHECK(r.values.size() == p.steps() - 1);
    CHECK(r.horizon == 3.0);
    CHECK(r.values[0] == doctest::Approx(p.step(1) / p.step(2)));
    CHECK(r.breakpoints[1] == p.time(2));
  }

  TEST_CASE("perturbed partitions respect the step-ratio bound") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto p = make_perturbed(200, 1.0, 3.0, seed);
      CHECK(p.horizon() == 1.0);
      CHECK(mesh_stats(p).c_ratio <= 3.0 + 1e-12);
    }
    CHECK(make_perturbed(64, 1.0, 2.0, 5) == make_perturbed(64, 1.0, 2.0, 5));
    CHECK_FALSE(make_perturbed(64, 1.0, 2.0, 5) == make_perturbed(64, 1.0, 2.0, 6));
    CHECK(make_perturbed(64, 1.0, 1.0, 5) == make_regular(64, 1.0));
  }

  TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Partition({0.0, 0.5, 1.0}), SizeError);
    CHECK_THROWS_AS(Partition({0.1, 0.2, 0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(Partition({0.0, 0.5, 0.5, 1.0}), DomainError);
  }

  TEST_CASE("csv round trip is lossless") {
    const auto p = make_perturbed(33, 1.0, 2.5, 17);
    std::stringstream ss;
    write_csv(ss, p);
    CHECK(read_partition_csv(ss) == p);
  }
}
