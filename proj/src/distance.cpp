#include "divmsa/distance.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace divmsa {

std::uint32_t levenshtein(std::string_view a, std::string_view b) {
    // Canonical ordering: keep the shorter string as the DP row.
    if (a.size() < b.size()) std::swap(a, b);

    // Shared prefixes and suffixes contribute no edits; trimming them is an
    // exact reduction of the problem.
    std::size_t prefix = 0;
    std::size_t max_prefix = std::min(a.size(), b.size());
    while (prefix < max_prefix && a[prefix] == b[prefix]) ++prefix;
    a.remove_prefix(prefix);
    b.remove_prefix(prefix);
    std::size_t suffix = 0;
    std::size_t max_suffix = std::min(a.size(), b.size());
    while (suffix < max_suffix && a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
        ++suffix;
    }
    a.remove_suffix(suffix);
    b.remove_suffix(suffix);

    if (b.empty()) return static_cast<std::uint32_t>(a.size());

    std::vector<std::uint32_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<std::uint32_t>(j);

    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint32_t diag = row[0]; // row[i][0] from the previous row
        row[0] = static_cast<std::uint32_t>(i + 1);
        std::uint32_t left = row[0];
        const char ai = a[i];
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint32_t up = row[j + 1];
            std::uint32_t sub = diag + (ai != b[j]);
            std::uint32_t best = std::min(sub, std::min(up, left) + 1);
            row[j + 1] = best;
            left = best;
            diag = up;
        }
    }
    return row[b.size()];
}

std::uint32_t hamming_aligned(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming_aligned requires equal-length rows");
    }
    std::uint32_t differing = 0;
    for (std::size_t i = 0; i < a.size(); ++i) differing += (a[i] != b[i]);
    return differing;
}

} // namespace divmsa
