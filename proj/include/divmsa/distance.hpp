#pragma once

#include <cstdint>
#include <string_view>

namespace divmsa {

/// Exact Levenshtein distance (unit-cost insert/delete/substitute) via
/// two-row dynamic programming, O(len(a)*len(b)) time, O(min len) space.
/// Inputs must be gap-free residue strings.
std::uint32_t levenshtein(std::string_view a, std::string_view b);

/// Hamming distance between two equal-length gapped rows: the number of
/// columns whose characters differ. Gap-vs-gap is equal, gap-vs-residue
/// differs. Throws std::invalid_argument on unequal lengths.
std::uint32_t hamming_aligned(std::string_view a, std::string_view b);

} // namespace divmsa
