#pragma once

// Dense arithmetic kernels with a scalar reference and ISA-specific variants.
//
// Every floating-point kernel accumulates in kLanes independent partial sums
// (element i goes to lane i % kLanes), folds the lanes as
// (l0 + l1) + (l2 + l3), then adds the tail elements in order. The scalar
// reference follows the same order, so all variants return bitwise-identical
// results and pipeline output does not depend on the host CPU.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace crowdnet::simd {

inline constexpr std::size_t kLanes = 4;

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// ISA picked at startup from CPUID, unless overridden by force_isa().
Isa active_isa();

/// True when the running CPU can execute the given variant.
bool isa_supported(Isa isa);

/// Select a variant explicitly (tests, benchmarks). Throws if unsupported.
void force_isa(Isa isa);

/// Back to CPUID-based selection.
void reset_isa();

struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*sum_sq_dev)(const double*, std::size_t, double);
  double (*l1_distance)(const double*, const double*, std::size_t);
  void (*mul)(const double*, const double*, double*, std::size_t);
  void (*scale_shift)(double*, std::size_t, double, double);
  std::uint64_t (*and_popcount)(const std::uint64_t*, const std::uint64_t*, std::size_t);
};

namespace scalar {
const KernelTable& table();
}
#if defined(CROWDNET_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

const KernelTable& table_for(Isa isa);

// Dispatching front ends.

double sum(std::span<const double> x);

/// Sum of (x_i - center)^2.
double sum_sq_dev(std::span<const double> x, double center);

/// Sum of |a_i - b_i|. Spans must have equal length.
double l1_distance(std::span<const double> a, std::span<const double> b);

/// out_i = a_i * b_i.
void mul(std::span<const double> a, std::span<const double> b, std::span<double> out);

/// x_i = x_i * scale + shift.
void scale_shift(std::span<double> x, double scale, double shift);

/// popcount(a & b) over equal-length word arrays.
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

}  // namespace crowdnet::simd
