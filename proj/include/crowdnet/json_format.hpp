#pragma once

// Deterministic JSON output: sorted keys, numbers rounded to 9 significant
// digits, two-space indentation, trailing newline.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace crowdnet {

using json = nlohmann::json;

inline constexpr int kSignificantDigits = 9;

/// Round to `digits` significant digits (round-half-even via printf).
double round_sig(double x, int digits = kSignificantDigits);

/// Rounded number, or null for non-finite input.
json number(double x);
/// null for nullopt.
json number(const std::optional<double>& x);

std::string dump_stable(const json& doc);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::string_view bytes);

}  // namespace crowdnet
