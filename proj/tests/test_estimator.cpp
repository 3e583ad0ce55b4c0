#include <doctest.h>

#include <cmath>
#include <random>

#include "orey/error.hpp"
#include "orey/estimator.hpp"
#include "orey/quadvar.hpp"

using namespace orey;

TEST_SUITE("estimator") {
  TEST_CASE("synthetic scaling law is inverted exactly") {
    for (double gamma = 0.05; gamma < 1; gamma += 0.05) {
      const double m = 1.0 / 256, A = 3.7;
      const double vc = A * std::pow(m, 2 * gamma + 1), vf = A * std::pow(m / 2, 2 * gamma + 1);
      CHECK(gamma_from_variations(vc, vf, m / 2, m) == doctest::Approx(gamma).epsilon(1e-12));
    }
  }

  TEST_CASE("estimator on power paths") {
    // x(t) = t^2 has raw variation (N-1) 4 h^6, i.e. scaling exponent 5 = 2 gamma + 1 up to
    // the (N-1) factor, so gamma_hat is close to 2 rather than inside (0, 1)
    const auto fine = make_regular(512, 1.0), coarse = subsample(fine, 2);
    std::vector<double> x(fine.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = fine.time(i) * fine.time(i);
    const auto e = orey_estimate(fine, x, coarse, fine);
    CHECK(e.v_fine == doctest::Approx(511 * 4 * std::pow(1.0 / 512, 6)));
    CHECK(e.log_scale == doctest::Approx(std::log(0.5)));
    CHECK(e.gamma_hat == doctest::Approx(-0.5 + std::log(511.0 / 255.0 / 64.0) / (2 * std::log(0.5))));
  }

  TEST_CASE("scale and affine invariance") {
    const auto fine = make_regular(256, 1.0), coarse = subsample(fine, 2);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.1, 10.0);
    const Sampler sampler(FBm{0.4}, fine);
    for (std::uint64_t r = 0; r < 100; ++r) {
      Path path = sampler.draw({2, r});
      const auto base = orey_estimate(path, coarse, fine);
      const double a = pos(rng), b = u(rng), c = u(rng);
      Path scaled = path, shifted = path;
      for (std::size_t i = 0; i < path.values.size(); ++i) {
        scaled.values[i] *= a;
        shifted.values[i] += b + c * fine.time(i);
      }
      const auto es = orey_estimate(scaled, coarse, fine);
      CHECK(es.v_fine == doctest::Approx(a * a * base.v_fine).epsilon(1e-12));
      CHECK(es.v_coarse == doctest::Approx(a * a * base.v_coarse).epsilon(1e-12));
      CHECK(std::abs(es.gamma_hat - base.gamma_hat) < 1e-12);
      CHECK(std::abs(orey_estimate(shifted, coarse, fine).gamma_hat - base.gamma_hat) < 1e-9);
    }
  }

  TEST_CASE("sandwich between raw and weighted variation ratios") {
    for (const auto& fine : {make_regular(512, 1.0), make_perturbed(512, 1.0, 1.5, 3)}) {
      const auto coarse = subsample(fine, 2);
      const auto mf = mesh_stats(fine), mc = mesh_stats(coarse);
      const Sampler sampler(SubFBm{0.7}, fine);
      for (std::uint64_t r = 0; r < 20; ++r) {
        const Path path = sampler.draw({8, r});
        const auto e = orey_estimate(path, coarse, fine);
        std::vector<double> xc;
        for (std::size_t i : embedding_indices(coarse, fine)) xc.push_back(path.values[i]);
        const double gamma = 0.7;
        const double weighted = normalized_qv(fine, path.values, gamma) / normalized_qv(coarse, xc, gamma);
        const double raw = e.v_fine / e.v_coarse;
        CHECK(weighted >= std::pow(mc.p_n / mf.m_n, 2 * gamma + 1) * raw * (1 - 1e-12));
        CHECK(weighted <= std::pow(mc.m_n / mf.p_n, 2 * gamma + 1) * raw * (1 + 1e-12));
      }
    }
  }

  TEST_CASE("error conditions") {
    const auto fine = make_regular(64, 1.0), coarse = subsample(fine, 2);
    const std::vector<double> zero(fine.size(), 0.0);
    CHECK_THROWS_AS(orey_estimate(fine, zero, coarse, fine), DegeneratePathError);
    const auto other = make_regular(48, 1.0);
    std::vector<double> x(fine.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(17.0 * i);
    CHECK_THROWS_AS(orey_estimate(fine, x, other, fine), NestingError);
    CHECK_THROWS_AS(orey_estimate(fine, x, fine, fine), NestingError);
    CHECK_THROWS_AS(orey_estimate(fine, std::vector<double>(3), coarse, fine), LengthMismatchError);
    CHECK_THROWS_AS(gamma_from_variations(1.0, 1.0, 0.5, 0.5), ScaleSeparationError);
  }

  TEST_CASE("fbm(0.5) estimate is unbiased at n_fine = 4096") {
    McConfig c;
    c.spec = FBm{0.5};
    c.n_fine = 4096;
    c.replicas = 200;
    c.seed = 1;
    const auto s = mc_study(c);
    CHECK(s.effective == 200);
    CHECK(s.mean >= 0.48);
    CHECK(s.mean <= 0.52);
  }

  TEST_CASE("summary moments") {
    McConfig c;
    c.spec = BiFBm{0.8, 0.5};
    c.n_fine = 256;
    c.replicas = 50;
    c.seed = 4;
    const auto s = mc_study(c);
    const double R = static_cast<double>(s.effective);
    CHECK(s.true_gamma == doctest::Approx(0.4));
    CHECK(std::abs(s.rmse * s.rmse - (s.bias * s.bias + s.std * s.std * (R - 1) / R)) <= 1e-12);
    const auto again = mc_study(c);
    CHECK(again.mean == s.mean);
    CHECK(again.rmse == s.rmse);
    for (std::size_t i = 0; i < s.table.size(); ++i)
      CHECK(again.table[i].estimate.gamma_hat == s.table[i].estimate.gamma_hat);
  }

  TEST_CASE("failed replicas are recorded, not imputed") {
    MCSummary s;
    s.true_gamma = 0.5;
    s.table.resize(4);
    for (std::size_t i = 0; i < 4; ++i) {
      s.table[i].replica = i;
      s.table[i].ok = i != 2;
      s.table[i].estimate.gamma_hat = 0.4 + 0.1 * static_cast<double>(i);
    }
    summarize(s);
    CHECK(s.replicas == 4);
    CHECK(s.effective == 3);
    CHECK(s.mean == doctest::Approx((0.4 + 0.5 + 0.7) / 3));
  }

  TEST_CASE("configuration checks") {
    McConfig c;
    c.n_fine = 1000;
    c.stride = 3;
    CHECK_THROWS_AS(mc_study(c), AlignmentError);
    c.stride = 2;
    c.replicas = 1;
    CHECK_THROWS_AS(mc_study(c), ParameterError);
  }

  TEST_CASE("bias shrinks for fbm(0.3) as n_fine grows") {
    double prev = 1e9;
    for (std::size_t n : {1024, 4096}) {
      McConfig c;
      c.spec = FBm{0.3};
      c.n_fine = n;
      c.replicas = 200;
      c.seed = 21;
      const double rmse = mc_study(c).rmse;
      CHECK(rmse < prev);
      prev = rmse;
    }
  }
}
