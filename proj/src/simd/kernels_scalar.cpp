#include "crowdnet/simd/kernels.hpp"

#include <bit>
#include <cmath>

namespace crowdnet::simd::scalar {
namespace {

double fold(const double (&acc)[kLanes]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

double sum(const double* x, std::size_t n) {
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += x[i + l];
  }
  double total = fold(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double sum_sq_dev(const double* x, std::size_t n, double center) {
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double d = x[i + l] - center;
      acc[l] += d * d;
    }
  }
  double total = fold(acc);
  for (; i < n; ++i) {
    const double d = x[i] - center;
    total += d * d;
  }
  return total;
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += std::fabs(a[i + l] - b[i + l]);
  }
  double total = fold(acc);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_shift(double* x, std::size_t n, double scale, double shift) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * scale + shift;
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return count;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{sum, sum_sq_dev, l1_distance, mul, scale_shift, and_popcount};
  return t;
}

}  // namespace crowdnet::simd::scalar
