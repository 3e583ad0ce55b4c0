#include <doctest.h>

#include <cmath>

#include "orey/error.hpp"
#include "orey/sampler.hpp"
#include "support.hpp"

using namespace orey;

namespace {

// Draws R paths and counts covariance entries outside `z` standard errors.
template <class Draw>
int covariance_violations(const Eigen::MatrixXd& C, std::size_t R, double z, Draw draw) {
  const auto n = C.rows();
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(R), n);
  for (std::size_t r = 0; r < R; ++r) {
    const std::vector<double> x = draw(r);
    for (Eigen::Index i = 0; i < n; ++i) samples(static_cast<Eigen::Index>(r), i) = x[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd S = testing::second_moment(samples);
  int bad = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      if (std::abs(S(i, j) - C(i, j)) > z * testing::moment_se(C, i, j, R) + 1e-15) ++bad;
  return bad;
}

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("exact sampler pins the origin and reproduces draws") {
    const auto p = make_perturbed(20, 1.0, 2.0, 3);
    ExactSampler s(SubFBm{0.7}, p);
    const Path a = s.draw({9, 1}), b = s.draw({9, 1}), c = s.draw({9, 2});
    CHECK(a.values[0] == 0.0);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(s.jitter() == 0.0);
    CHECK(a.method == SampleMethod::cholesky);
  }

  TEST_CASE("covariance_matrix matches the pointwise kernel") {
    const auto p = make_perturbed(12, 1.0, 2.0, 1);
    for (const ProcessSpec& spec : {ProcessSpec{FBm{0.3}}, ProcessSpec{SubFBm{0.7}},
                                    ProcessSpec{BiFBm{0.8, 0.5}}, ProcessSpec{FBridge{0.6, 1.0}}}) {
      const auto C = covariance_matrix(spec, p.times());
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
          CHECK(C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                doctest::Approx(covariance(spec, p.time(i), p.time(j))).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("circulant and Cholesky fBm share the kernel law") {
    const std::size_t N = 16, R = 6000;
    for (double H : {0.25, 0.5, 0.8}) {
      CAPTURE(H);
      const auto p = make_regular(N, 1.0);
      const auto C = covariance_matrix(FBm{H}, p.times());
      CirculantFbmSampler fast(H, N, 1.0);
      CHECK_FALSE(fast.fell_back());
      ExactSampler exact(FBm{H}, p);
      CHECK(covariance_violations(C, R, 4.5, [&](std::size_t r) { return fast.draw({1, r}).values; }) == 0);
      CHECK(covariance_violations(C, R, 4.5, [&](std::size_t r) { return exact.draw({2, r}).values; }) == 0);
    }
  }

  TEST_CASE("fast path entry point") {
    const Path a = sample_fbm_fast(0.7, 64, 2.0, {5, 0});
    CHECK(a.method == SampleMethod::circulant);
    CHECK(a.partition == make_regular(64, 2.0));
    CHECK(a.values == CirculantFbmSampler(0.7, 64, 2.0).draw({5, 0}).values);
  }

  TEST_CASE("bridge paths are pinned at both ends") {
    const auto p = make_regular(32, 2.0);
    const Path x = sample_bridge(FBridge{0.6, 2.0}, p, {4, 0});
    CHECK(x.values.front() == 0.0);
    CHECK(x.values.back() == 0.0);
    CHECK_THROWS_AS(sample_bridge(FBridge{0.6, 1.0}, p, {4, 0}), DomainError);
    const auto C = covariance_matrix(FBridge{0.6, 2.0}, p.times());
    CHECK(C(32, 32) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }

  TEST_CASE("bridge and sub-fbm laws on an irregular grid") {
    const auto p = make_perturbed(15, 1.0, 2.0, 8);
    const std::size_t R = 6000;
    {
      const FBridge spec{0.6, 1.0};
      const auto C = covariance_matrix(spec, p.times());
      BridgeSampler s(spec, p);
      CHECK(covariance_violations(C, R, 4.5, [&](std::size_t r) { return s.draw({3, r}).values; }) == 0);
    }
    {
      const BiFBm spec{0.8, 0.5};
      const auto C = covariance_matrix(spec, p.times());
      ExactSampler s(spec, p);
      CHECK(covariance_violations(C, R, 4.5, [&](std::size_t r) { return s.draw({6, r}).values; }) == 0);
    }
  }

  TEST_CASE("fractional O-U mean and centering") {
    const FracOU spec{0.6, 2.0, 1.0, 3.0, 4};
    const auto p = make_regular(16, 1.0);
    const Path raw = sample_frac_ou(spec, p, {1, 0});
    CHECK_FALSE(raw.centered);
    CHECK(raw.values[0] == doctest::Approx(3.0));
    const Path centered = center(raw);
    CHECK(centered.centered);
    CHECK(centered.values[0] == doctest::Approx(0.0).scale(1.0));
    for (std::size_t i = 0; i < p.size(); ++i)
      CHECK(raw.values[i] - centered.values[i] == doctest::Approx(3.0 * std::exp(-2.0 * p.time(i))));
    CHECK(sample_frac_ou(spec, p, {1, 0}, Centering::centered).values == centered.values);
  }

  TEST_CASE("fractional O-U law and its driver") {
    const FracOU spec{0.35, 1.0, 1.3, 0.0, 4};
    const auto p = make_regular(16, 1.0);
    const auto C = covariance_matrix(spec, p.times());
    const auto CB = covariance_matrix(FBm{0.35}, p.times());
    FracOuSampler s(spec, p);
    const std::size_t R = 6000;
    CHECK(covariance_violations(C, R, 4.5, [&](std::size_t r) { return s.draw({8, r}).path.values; }) == 0);
    CHECK(covariance_violations(CB, R, 4.5, [&](std::size_t r) { return s.draw({8, r}).driver; }) == 0);
  }

  TEST_CASE("sampler dispatch") {
    const auto reg = make_regular(32, 1.0);
    CHECK(Sampler(FBm{0.4}, reg).method() == SampleMethod::circulant);
    CHECK(Sampler(FBm{0.4}, make_perturbed(32, 1.0, 2.0, 1)).method() == SampleMethod::cholesky);
    CHECK(Sampler(SubFBm{0.4}, reg).method() == SampleMethod::cholesky);
    CHECK(Sampler(FracOU{0.4}, reg).method() == SampleMethod::circulant);
    const Path x = Sampler(FracOU{0.4, 1.0, 1.0, 2.0}, reg).draw({0, 0});
    CHECK(x.centered);
    CHECK(x.values[0] == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("output length is checked") {
    ExactSampler s(FBm{0.5}, make_regular(8, 1.0));
    std::vector<double> wrong(5);
    CHECK_THROWS_AS(s.draw_into({0, 0}, wrong), LengthMismatchError);
  }
}
