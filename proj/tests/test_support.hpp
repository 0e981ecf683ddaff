#pragma once

// Independent reference implementations and data generators for the tests.
// Everything here is deliberately naive: correctness oracles must not share
// code or algorithmic shortcuts with the library under test.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "divmsa/pairwise.hpp"
#include "divmsa/rng.hpp"

namespace testsupport {

// --- Levenshtein oracle: memoized recursion straight from the definition ---

inline std::uint32_t lev_rec(std::string_view a, std::string_view b,
                             std::size_t i, std::size_t j,
                             std::map<std::pair<std::size_t, std::size_t>,
                                      std::uint32_t>& memo) {
    if (i == 0) {
        return static_cast<std::uint32_t>(j);
    }
    if (j == 0) {
        return static_cast<std::uint32_t>(i);
    }
    const auto key = std::make_pair(i, j);
    if (const auto it = memo.find(key); it != memo.end()) {
        return it->second;
    }
    const std::uint32_t del = lev_rec(a, b, i - 1, j, memo) + 1;
    const std::uint32_t ins = lev_rec(a, b, i, j - 1, memo) + 1;
    const std::uint32_t sub = lev_rec(a, b, i - 1, j - 1, memo) +
                              (a[i - 1] == b[j - 1] ? 0 : 1);
    const std::uint32_t best = std::min({del, ins, sub});
    memo.emplace(key, best);
    return best;
}

inline std::uint32_t oracle_levenshtein(std::string_view a, std::string_view b) {
    std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> memo;
    return lev_rec(a, b, a.size(), b.size(), memo);
}

// --- Alignment path scoring and exhaustive enumeration -------------------

// Moves: 'M' consumes one char from both strings, 'X' consumes from a and
// puts a gap in b, 'Y' the reverse. A gap run of length L costs
// open_surcharge + L * gap_extend; switching between X and Y starts a new run.
inline std::int64_t score_moves(std::string_view a, std::string_view b,
                                const std::vector<char>& moves,
                                const divmsa::ScoringScheme& scheme) {
    std::int64_t score = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    char prev = 'M';
    for (char move : moves) {
        if (move == 'M') {
            score += scheme.score(a[i], b[j]);
            ++i;
            ++j;
        } else {
            if (move != prev) {
                score += scheme.open_surcharge();
            }
            score += scheme.gap_extend();
            move == 'X' ? ++i : ++j;
        }
        prev = move;
    }
    if (i != a.size() || j != b.size()) {
        throw std::logic_error("move sequence does not cover both strings");
    }
    return score;
}

// Best score over every monotone alignment path, by plain depth-first
// enumeration (no pruning, no state merging).
inline std::int64_t enumerate_best(std::string_view a, std::string_view b,
                                   const divmsa::ScoringScheme& scheme) {
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::vector<char> moves;
    const auto walk = [&](auto&& self, std::size_t i, std::size_t j) -> void {
        if (i == a.size() && j == b.size()) {
            best = std::max(best, score_moves(a, b, moves, scheme));
            return;
        }
        if (i < a.size() && j < b.size()) {
            moves.push_back('M');
            self(self, i + 1, j + 1);
            moves.pop_back();
        }
        if (i < a.size()) {
            moves.push_back('X');
            self(self, i + 1, j);
            moves.pop_back();
        }
        if (j < b.size()) {
            moves.push_back('Y');
            self(self, i, j + 1);
            moves.pop_back();
        }
    };
    walk(walk, 0, 0);
    return best;
}

// Move sequence of a PairwiseResult over GAP-FREE inputs: every '-' in the
// output must be an inserted column, so the aligned strings classify each
// column directly. The gap lists are cross-checked against that reading.
inline std::vector<char> moves_of(const divmsa::PairwiseResult& result) {
    std::vector<char> moves;
    std::vector<std::uint32_t> gaps_a;
    std::vector<std::uint32_t> gaps_b;
    std::size_t i = 0; // chars of a consumed
    std::size_t j = 0; // chars of b consumed
    for (std::size_t col = 0; col < result.aligned_a.size(); ++col) {
        if (result.aligned_a[col] == '-') {
            moves.push_back('Y');
            gaps_a.push_back(static_cast<std::uint32_t>(i));
            ++j;
        } else if (result.aligned_b[col] == '-') {
            moves.push_back('X');
            gaps_b.push_back(static_cast<std::uint32_t>(j));
            ++i;
        } else {
            moves.push_back('M');
            ++i;
            ++j;
        }
    }
    if (gaps_a != result.gaps_into_a || gaps_b != result.gaps_into_b) {
        throw std::logic_error("gap index lists do not match the aligned strings");
    }
    return moves;
}

// --- Naive gap insertion (one at a time, shifting by prior insertions) ----

inline std::string insert_gaps_naive(std::string s,
                                     const std::vector<std::uint32_t>& positions) {
    std::size_t inserted = 0;
    for (std::uint32_t p : positions) {
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(p + inserted), '-');
        ++inserted;
    }
    return s;
}

inline std::string degap(std::string_view row) {
    std::string out;
    for (char c : row) {
        if (c != '-') {
            out.push_back(c);
        }
    }
    return out;
}

// --- Random data generators (portable draws only) --------------------------

inline std::string random_string(std::mt19937_64& rng, std::size_t len,
                                 std::string_view symbols) {
    std::string s(len, '?');
    for (char& c : s) {
        c = symbols[divmsa::bounded_draw(rng, symbols.size())];
    }
    return s;
}

inline std::vector<std::string> random_dataset(std::mt19937_64& rng,
                                               std::size_t count,
                                               std::size_t min_len,
                                               std::size_t max_len,
                                               std::string_view symbols) {
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t len =
            min_len + divmsa::bounded_draw(rng, max_len - min_len + 1);
        out.push_back(random_string(rng, len, symbols));
    }
    return out;
}

// Families of related sequences: each family derives from one ancestor by
// point substitutions, insertions and deletions.
inline std::vector<std::string> mutation_families(std::mt19937_64& rng,
                                                  std::size_t family_count,
                                                  std::size_t per_family,
                                                  std::size_t base_len,
                                                  double mutation_rate,
                                                  std::string_view symbols) {
    std::vector<std::string> out;
    out.reserve(family_count * per_family);
    for (std::size_t f = 0; f < family_count; ++f) {
        const std::string ancestor = random_string(rng, base_len, symbols);
        for (std::size_t s = 0; s < per_family; ++s) {
            std::string seq = ancestor;
            const std::size_t edits = std::max<std::size_t>(
                1, static_cast<std::size_t>(mutation_rate *
                                            static_cast<double>(base_len)));
            for (std::size_t e = 0; e < edits; ++e) {
                const std::uint64_t kind = divmsa::bounded_draw(rng, 3);
                const std::size_t pos = divmsa::bounded_draw(rng, seq.size());
                if (kind == 0) {
                    seq[pos] = symbols[divmsa::bounded_draw(rng, symbols.size())];
                } else if (kind == 1 && seq.size() > 4) {
                    seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(pos));
                } else {
                    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(pos),
                               symbols[divmsa::bounded_draw(rng, symbols.size())]);
                }
            }
            out.push_back(std::move(seq));
        }
    }
    return out;
}

// Drop exact duplicates, keeping first occurrences (the library's pipeline
// does this itself; tests that call lower layers need pre-cleaned data).
inline std::vector<std::string> unique_only(std::vector<std::string> seqs) {
    std::vector<std::string> out;
    for (auto& s : seqs) {
        if (std::find(out.begin(), out.end(), s) == out.end()) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

inline std::vector<std::string_view> views_of(const std::vector<std::string>& seqs) {
    return {seqs.begin(), seqs.end()};
}

} // namespace testsupport
