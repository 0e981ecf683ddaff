#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace divmsa {

enum class AlphabetKind { Nucleotide, Protein };

constexpr char kGapSymbol = '-';

/// Residue alphabet: the extended-IUPAC nucleotide set or the 20 standard
/// amino acids plus the ambiguity codes B, Z, X and the stop symbol '*'.
/// The gap symbol '-' is never a member.
class Alphabet {
public:
    static const Alphabet& nucleotide();
    static const Alphabet& protein();
    static const Alphabet& get(AlphabetKind kind);

    AlphabetKind kind() const { return kind_; }
    std::string_view symbols() const { return symbols_; }
    char gap_symbol() const { return kGapSymbol; }

    bool contains(char c) const { return member_[static_cast<unsigned char>(c)]; }

    const char* name() const;

private:
    Alphabet(AlphabetKind kind, std::string_view symbols);

    AlphabetKind kind_;
    std::string symbols_;
    std::array<bool, 256> member_{};
};

/// Census-based detection: if more than 90% of residue characters (after
/// uppercasing, gaps ignored) fall in {A,C,G,T,U,N}, the data is treated as
/// nucleotide, otherwise as protein.
AlphabetKind detect_alphabet(std::span<const std::string_view> residue_strings);

} // namespace divmsa
