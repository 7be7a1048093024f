#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "crowdnet/simd/kernels.hpp"

using namespace crowdnet::simd;

namespace {

std::vector<double> random_doubles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar kernels agree with plain loops") {
  std::mt19937_64 rng(3);
  const auto& t = scalar::table();
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 131u}) {
    const auto a = random_doubles(rng, n);
    const auto b = random_doubles(rng, n);
    double s = 0, sq = 0, l1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s += a[i];
      sq += (a[i] - 2.5) * (a[i] - 2.5);
      l1 += std::abs(a[i] - b[i]);
    }
    CHECK(t.sum(a.data(), n) == doctest::Approx(s).epsilon(1e-12));
    CHECK(t.sum_sq_dev(a.data(), n, 2.5) == doctest::Approx(sq).epsilon(1e-12));
    CHECK(t.l1_distance(a.data(), b.data(), n) == doctest::Approx(l1).epsilon(1e-12));

    std::vector<double> out(n);
    t.mul(a.data(), b.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == a[i] * b[i]);
    auto x = a;
    t.scale_shift(x.data(), n, 0.85, 0.01);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == a[i] * 0.85 + 0.01);
  }
}

TEST_CASE("and_popcount counts shared bits") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {0u, 1u, 3u, 4u, 9u, 40u}) {
    std::vector<std::uint64_t> a(n), b(n);
    std::uint64_t expect = 0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng();
      b[i] = rng();
      expect += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    }
    CHECK(scalar::table().and_popcount(a.data(), b.data(), n) == expect);
    CHECK(and_popcount(a, b) == expect);
  }
}

#if defined(CROWDNET_HAVE_AVX2)
TEST_CASE("avx2 kernels are bitwise identical to the scalar reference") {
  if (!isa_supported(Isa::Avx2)) {
    MESSAGE("host lacks AVX2; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(11);
  const auto& s = scalar::table();
  const auto& v = avx2::table();
  for (std::size_t n = 0; n < 70; ++n) {
    const auto a = random_doubles(rng, n);
    const auto b = random_doubles(rng, n);
    CHECK(same_bits(s.sum(a.data(), n), v.sum(a.data(), n)));
    CHECK(same_bits(s.sum_sq_dev(a.data(), n, -7.25), v.sum_sq_dev(a.data(), n, -7.25)));
    CHECK(same_bits(s.l1_distance(a.data(), b.data(), n), v.l1_distance(a.data(), b.data(), n)));

    std::vector<double> o1(n), o2(n);
    s.mul(a.data(), b.data(), o1.data(), n);
    v.mul(a.data(), b.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(o1[i], o2[i]));
    auto x1 = a, x2 = a;
    s.scale_shift(x1.data(), n, 0.85, 1.0 / 3.0);
    v.scale_shift(x2.data(), n, 0.85, 1.0 / 3.0);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(x1[i], x2[i]));

    std::vector<std::uint64_t> w1(n), w2(n);
    for (std::size_t i = 0; i < n; ++i) {
      w1[i] = rng();
      w2[i] = rng();
    }
    CHECK(s.and_popcount(w1.data(), w2.data(), n) == v.and_popcount(w1.data(), w2.data(), n));
  }
}

TEST_CASE("force_isa switches the dispatched table") {
  if (!isa_supported(Isa::Avx2)) return;
  std::vector<double> x(37, 0.1);
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  const double a = sum(x);
  force_isa(Isa::Avx2);
  CHECK(active_isa() == Isa::Avx2);
  const double b = sum(x);
  reset_isa();
  CHECK(same_bits(a, b));
}
#endif

TEST_CASE("isa names") {
  CHECK(isa_name(Isa::Scalar) == "scalar");
  CHECK(isa_name(Isa::Avx2) == "avx2");
  CHECK(isa_supported(Isa::Scalar));
}
