#include "divmsa/alphabet.hpp"

#include <cctype>

namespace divmsa {

namespace {
// Extended IUPAC nucleotide codes, then the BLOSUM-ordered amino acids with
// ambiguity codes B/Z/X and the stop symbol.
constexpr std::string_view kNucleotideSymbols = "ACGTURYSWKMBDHVN";
constexpr std::string_view kProteinSymbols = "ARNDCQEGHILKMFPSTWYVBZX*";
} // namespace

Alphabet::Alphabet(AlphabetKind kind, std::string_view symbols)
    : kind_(kind), symbols_(symbols) {
    for (char c : symbols_) member_[static_cast<unsigned char>(c)] = true;
}

const Alphabet& Alphabet::nucleotide() {
    static const Alphabet a(AlphabetKind::Nucleotide, kNucleotideSymbols);
    return a;
}

const Alphabet& Alphabet::protein() {
    static const Alphabet a(AlphabetKind::Protein, kProteinSymbols);
    return a;
}

const Alphabet& Alphabet::get(AlphabetKind kind) {
    return kind == AlphabetKind::Nucleotide ? nucleotide() : protein();
}

const char* Alphabet::name() const {
    return kind_ == AlphabetKind::Nucleotide ? "nucleotide" : "protein";
}

AlphabetKind detect_alphabet(std::span<const std::string_view> residue_strings) {
    std::uint64_t total = 0;
    std::uint64_t nucleotide_like = 0;
    for (std::string_view s : residue_strings) {
        for (char raw : s) {
            if (raw == kGapSymbol) continue;
            char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
            ++total;
            switch (c) {
                case 'A': case 'C': case 'G': case 'T': case 'U': case 'N':
                    ++nucleotide_like;
                    break;
                default:
                    break;
            }
        }
    }
    if (total == 0) return AlphabetKind::Nucleotide;
    return nucleotide_like * 10 > total * 9 ? AlphabetKind::Nucleotide
                                            : AlphabetKind::Protein;
}

} // namespace divmsa
