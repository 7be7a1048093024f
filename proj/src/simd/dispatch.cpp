#include "crowdnet/simd/kernels.hpp"

#include <atomic>
#include <cassert>
#include <stdexcept>
#include <string>

namespace crowdnet::simd {
namespace {

Isa detect() {
#if defined(CROWDNET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{&table_for(detect())};
  return table;
}

std::atomic<Isa>& current_isa() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

Isa active_isa() { return current_isa().load(); }

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
  return detect() == Isa::Avx2;
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return scalar::table();
    case Isa::Avx2:
#if defined(CROWDNET_HAVE_AVX2)
      return avx2::table();
#else
      break;
#endif
  }
  throw std::invalid_argument("kernel variant not compiled in: " + std::string(isa_name(isa)));
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("CPU does not support kernel variant " + std::string(isa_name(isa)));
  }
  current().store(&table_for(isa), std::memory_order_release);
  current_isa().store(isa);
}

void reset_isa() { force_isa(detect()); }

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double sum_sq_dev(std::span<const double> x, double center) {
  return active().sum_sq_dev(x.data(), x.size(), center);
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().l1_distance(a.data(), b.data(), a.size());
}

void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  active().mul(a.data(), b.data(), out.data(), a.size());
}

void scale_shift(std::span<double> x, double scale, double shift) {
  active().scale_shift(x.data(), x.size(), scale, shift);
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  assert(a.size() == b.size());
  return active().and_popcount(a.data(), b.data(), a.size());
}

}  // namespace crowdnet::simd
