#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "cwss/rng.hpp"
#include "cwss/sampling.hpp"
#include "support/dense_oracle.hpp"

using namespace cwss;

namespace {

CVector random_vector(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (auto& x : v) x = Complex(g(gen), g(gen));
  return v;
}

Complex inner(const CVector& a, const CVector& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double max_abs_diff(const CVector& a, const CVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("full ratio selects every sample", "[sampling]") {
  const SamplingPattern p = draw_pattern(64, 1.0, 3);
  REQUIRE(p.m() == 64);
  for (std::size_t i = 0; i < 64; ++i) REQUIRE(p.indices[i] == i);
}

TEST_CASE("pattern sizes follow round(ratio * n)", "[sampling]") {
  const SamplingPattern p = draw_pattern(10, 0.4, 5);
  REQUIRE(p.m() == 4);
  REQUIRE(std::set<std::size_t>(p.indices.begin(), p.indices.end()).size() == 4);
  for (auto i : p.indices) REQUIRE(i < 10);
  REQUIRE(draw_pattern(1024, 0.40, 1).m() == 410);
}

TEST_CASE("pattern invariants hold for random draws", "[sampling][property]") {
  std::mt19937_64 gen(77);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + gen() % 500;
    const double ratio = std::max(1.0 / static_cast<double>(n),
                                  static_cast<double>(gen() % 1000 + 1) / 1000.0);
    const Seed seed = gen();
    const SamplingPattern p = draw_pattern(n, ratio, seed);
    REQUIRE(p.m() >= 1);
    REQUIRE(p.m() <= n);
    REQUIRE(std::abs(p.ratio() - ratio) <= 1.0 / static_cast<double>(n));
    for (std::size_t i = 1; i < p.m(); ++i) REQUIRE(p.indices[i] > p.indices[i - 1]);
    REQUIRE(p.indices.back() < n);
    REQUIRE(draw_pattern(n, ratio, seed).indices == p.indices);
  }
}

TEST_CASE("bad ratios are rejected", "[sampling]") {
  REQUIRE_THROWS_AS(draw_pattern(16, 0.0, 1), InvalidArgument);
  REQUIRE_THROWS_AS(draw_pattern(16, 1.3, 1), InvalidArgument);
  REQUIRE_THROWS_AS(draw_pattern(16, -0.2, 1), InvalidArgument);
  REQUIRE_THROWS_AS(draw_pattern(16, 0.05, 1), InvalidArgument);  // floor(0.8) = 0
}

TEST_CASE("acquire picks the selected samples", "[sampling]") {
  SignalSpec spec;
  spec.n_bins = 32;
  spec.nyquist_hz = 32.0;
  spec.random_phase = false;
  spec.active_bands = {{3.0, 4.0, 0.5, 0.5}};
  const GroundTruth g = generate_multiband(spec, 1);

  SECTION("identity pattern") {
    REQUIRE(acquire(g, draw_pattern(32, 1.0, 0)) == g.noisy_signal);
  }
  SECTION("single tone evaluates the DFT formula") {
    const SamplingPattern p = draw_pattern(32, 0.4, 12);
    const CVector y = acquire(g, p);
    for (std::size_t m = 0; m < p.m(); ++m) {
      const Complex expected = 0.5 / std::sqrt(32.0) *
          std::polar(1.0, 2.0 * std::numbers::pi * 3.0 * static_cast<double>(p.indices[m]) / 32.0);
      REQUIRE(std::abs(y[m] - expected) < 1e-14);
    }
  }
  SECTION("zero signal") {
    SignalSpec empty;
    empty.n_bins = 32;
    const CVector y = acquire(generate_multiband(empty, 0), draw_pattern(32, 0.5, 2));
    for (const auto& v : y) REQUIRE(v == Complex{});
  }
  SECTION("length mismatch") {
    REQUIRE_THROWS_AS(acquire(g, draw_pattern(16, 0.5, 2)), InvalidArgument);
  }
}

TEST_CASE("forward operator", "[sampling]") {
  const SamplingPattern p = draw_pattern(16, 6.0 / 16.0, 21);
  REQUIRE(p.m() == 6);

  SECTION("zero maps to zero") {
    for (const auto& v : forward(CVector(16), p)) REQUIRE(v == Complex{});
  }
  SECTION("unit bin gives a DFT column") {
    for (std::size_t k = 0; k < 16; ++k) {
      CVector e(16);
      e[k] = 1.0;
      const CVector y = forward(e, p);
      for (std::size_t m = 0; m < p.m(); ++m) {
        const Complex expected = std::polar(1.0 / 4.0,
            2.0 * std::numbers::pi * static_cast<double>(k * p.indices[m]) / 16.0);
        REQUIRE(std::abs(y[m] - expected) < 1e-14);
      }
    }
  }
  SECTION("matches an explicit dense matrix") {
    std::mt19937_64 gen(5);
    const Eigen::MatrixXcd a = testing::explicit_partial_idft(16, p.indices);
    for (int t = 0; t < 20; ++t) {
      const CVector r = random_vector(16, gen);
      const CVector dense = testing::from_eigen(a * testing::to_eigen(r));
      REQUIRE(max_abs_diff(forward(r, p), dense) < 1e-12);
    }
    REQUIRE((dense_operator(p) - a).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("length mismatch") {
    REQUIRE_THROWS_AS(forward(CVector(15), p), InvalidArgument);
    REQUIRE_THROWS_AS(adjoint(CVector(5), p), InvalidArgument);
  }
}

TEST_CASE("adjoint operator", "[sampling][property]") {
  std::mt19937_64 gen(31);
  SECTION("zero maps to zero") {
    const SamplingPattern p = draw_pattern(32, 0.4, 1);
    for (const auto& v : adjoint(CVector(p.m()), p)) REQUIRE(v == Complex{});
  }
  SECTION("inner-product identity, tight frame, contraction") {
    for (int t = 0; t < 100; ++t) {
      const SamplingPattern p = draw_pattern(32, 0.4, gen());
      const CVector r = random_vector(32, gen);
      const CVector y = random_vector(p.m(), gen);
      const Complex lhs = inner(forward(r, p), y);
      const Complex rhs = inner(r, adjoint(y, p));
      REQUIRE(std::abs(lhs - rhs) < 1e-12);
      REQUIRE(max_abs_diff(forward(adjoint(y, p), p), y) < 1e-12);
      REQUIRE(norm2(forward(r, p)) <= norm2(r) * (1.0 + 1e-14));
    }
  }
  SECTION("dense path rejects large n") {
    REQUIRE_THROWS_AS(dense_operator(draw_pattern(128, 0.5, 1)), InvalidArgument);
  }
}
