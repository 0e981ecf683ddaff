#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divmsa/alphabet.hpp"

namespace divmsa {

enum class GapMode { Flat, Affine };

/// Substitution scores over an alphabet plus the gap symbol, with affine gap
/// parameters. The gap symbol is a first-class table member so that already
/// gapped strings can be aligned directly: score(gap, gap) = 0 and
/// score(gap, residue) = gap_extend unless a loaded matrix overrides them.
/// Pre-existing gap characters consumed diagonally never charge gap_open.
class ScoringScheme {
public:
    /// `matrix` is row-major over `symbols` (which must not contain '-').
    ScoringScheme(std::string_view symbols, std::span<const int> matrix,
                  int gap_open, int gap_extend, GapMode mode);

    int score(char x, char y) const {
        return table_[static_cast<unsigned char>(x) * 128 + static_cast<unsigned char>(y)];
    }
    bool has_symbol(char c) const { return present_[static_cast<unsigned char>(c)]; }

    int gap_open() const { return gap_open_; }
    int gap_extend() const { return gap_extend_; }
    GapMode mode() const { return mode_; }
    /// Penalty added when a new gap run starts; a run of length L costs
    /// open_surcharge + L * gap_extend. Flat mode has no surcharge.
    int open_surcharge() const { return mode_ == GapMode::Affine ? gap_open_ : 0; }

    std::string_view symbols() const { return symbols_; }

    /// Override an individual pair (kept symmetric).
    void set_score(char x, char y, int value);

private:
    std::string symbols_;
    int gap_open_;
    int gap_extend_;
    GapMode mode_;
    std::vector<std::int16_t> table_; // 128x128, indexed by character
    std::array<bool, 128> present_{};
};

/// +1 when the extended-IUPAC ambiguity sets of the two symbols intersect,
/// -1 otherwise.
ScoringScheme default_nucleotide_scheme(int gap_open = -10, int gap_extend = -1,
                                        GapMode mode = GapMode::Affine);

/// BLOSUM62 over the 24-symbol protein alphabet.
ScoringScheme default_protein_scheme(int gap_open = -10, int gap_extend = -1,
                                     GapMode mode = GapMode::Affine);

/// Load a whitespace-separated square matrix: a header row of single-character
/// symbols, then one row of integers per symbol (optionally prefixed by the
/// row symbol). A '-' column, when present, overrides the synthesized gap
/// scores. The matrix must be symmetric.
ScoringScheme load_scoring_matrix(const std::filesystem::path& path,
                                  int gap_open, int gap_extend, GapMode mode);
ScoringScheme parse_scoring_matrix(std::string_view text, int gap_open,
                                   int gap_extend, GapMode mode,
                                   std::string_view source_name = "<memory>");

/// Global alignment of two (possibly gapped) strings.
/// gaps_into_a / gaps_into_b list, in pre-insertion coordinates of the
/// respective input, where this alignment inserted gap columns; duplicate
/// entries mean several columns at the same site. Inserting those gaps into
/// the inputs reproduces aligned_a / aligned_b exactly.
struct PairwiseResult {
    std::string aligned_a;
    std::string aligned_b;
    std::int64_t score = 0;
    std::vector<std::uint32_t> gaps_into_a;
    std::vector<std::uint32_t> gaps_into_b;
};

/// Needleman-Wunsch with the Gotoh three-state recurrence (affine mode) or a
/// uniform per-column gap cost (flat mode). Traceback ties prefer
/// diagonal > up (gap in b) > left (gap in a) at every cell.
PairwiseResult nw_align(std::string_view a, std::string_view b,
                        const ScoringScheme& scheme);

} // namespace divmsa
