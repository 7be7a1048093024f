#pragma once

// Seeded planted-cluster dataset generator.
//
// Every project has a home cluster. For each task, home-cluster workers
// register independently with probability p_in and everyone else with p_out.
// Registrants submit with their belt's probability (plus the cluster's
// offset), submissions are valid with valid_probability, and a completed
// task has exactly one winner drawn uniformly among valid submitters.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "crowdnet/dataset.hpp"

namespace crowdnet {

struct SynthConfig {
  std::size_t worker_count = 160;
  std::size_t cluster_count = 4;
  /// Overrides an even split of worker_count when non-empty.
  std::vector<std::size_t> cluster_sizes;
  std::size_t task_count = 400;
  std::size_t project_count = 40;
  double p_in = 0.1;
  double p_out = 0.005;
  /// Gray, Green, Blue, Yellow, Red.
  std::array<double, 5> belt_shares = {0.9002, 0.0288, 0.0539, 0.0154, 0.0016};
  std::array<double, 5> submit_probability = {0.25, 0.45, 0.39, 0.6, 0.6};
  double valid_probability = 0.8;
  /// Added to every submission probability of a planted cluster; missing
  /// entries mean 0.
  std::vector<double> cluster_submit_offset;
  std::uint64_t seed = 1;
  int start_year = 2014;
  unsigned start_month = 1;
  unsigned months = 14;

  /// Throws ConfigError.
  void validate() const;
  /// Resolved per-cluster sizes.
  std::vector<std::size_t> sizes() const;
};

inline constexpr const char* kSynthGenerator = "crowdnet-synth/1";
inline constexpr const char* kSynthRng = "mt19937_64";

/// Deterministic for a fixed config. Planted labels go to metadata.
Dataset generate_synthetic(const SynthConfig& cfg);

/// Portable draws on top of mt19937_64 (the std distributions differ
/// between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace crowdnet
