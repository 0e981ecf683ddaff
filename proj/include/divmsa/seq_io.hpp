#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "divmsa/alphabet.hpp"

namespace divmsa {

/// One FASTA record. `id` is the header token before the first whitespace,
/// `description` the remainder of the header line (may be empty).
/// `residues` is uppercase and validated against the alphabet.
struct Sequence {
    std::string id;
    std::string description;
    std::string residues;
    std::uint32_t original_index = 0;
};

/// Duplicate bookkeeping produced by deduplicate(). `duplicates_of[i]` holds
/// the duplicates collapsed onto representative i of the deduplicated list.
/// Every input sequence appears exactly once: either as a representative or
/// in exactly one duplicate list.
struct DedupMap {
    struct Duplicate {
        std::string id;
        std::string description;
        std::uint32_t original_index = 0;
    };
    std::vector<std::vector<Duplicate>> duplicates_of;

    std::size_t duplicate_count() const;
    bool empty() const { return duplicate_count() == 0; }
};

struct ParseOptions {
    bool allow_gaps = false; // accept '-' inside records (aligned input)
};

/// Parse a FASTA file (plain or multi-line records). Residues are uppercased
/// and validated; errors name the offending record, line and character.
std::vector<Sequence> parse_fasta(const std::filesystem::path& path,
                                  const Alphabet& alphabet,
                                  const ParseOptions& options = {});

/// Structural parse without residue validation, for callers that pick the
/// alphabet after looking at the data.
std::vector<Sequence> parse_fasta(const std::filesystem::path& path,
                                  const ParseOptions& options = {});

/// Same parser over an in-memory buffer; `source_name` is used in errors.
std::vector<Sequence> parse_fasta_text(std::string_view text,
                                       const Alphabet& alphabet,
                                       const ParseOptions& options = {},
                                       std::string_view source_name = "<memory>");
std::vector<Sequence> parse_fasta_text(std::string_view text,
                                       const ParseOptions& options = {},
                                       std::string_view source_name = "<memory>");

/// Check every residue against the alphabet; errors name the record and the
/// offending character. Gaps pass only when `allow_gaps` is set.
void validate_residues(std::span<const Sequence> seqs, const Alphabet& alphabet,
                       const ParseOptions& options = {});

/// Collapse exact duplicate residue strings, keeping the first occurrence of
/// each and preserving relative order.
std::pair<std::vector<Sequence>, DedupMap> deduplicate(const std::vector<Sequence>& seqs);

/// Write records as FASTA with 80-column line wrapping. Headers are emitted
/// as ">id description" (description omitted when empty); gaps verbatim.
struct FastaRecordView {
    std::string_view id;
    std::string_view description;
    std::string_view residues;
};
void write_fasta(std::span<const FastaRecordView> records,
                 const std::filesystem::path& path);
std::string format_fasta(std::span<const FastaRecordView> records);

/// Persist a DedupMap as two-column TSV: representative_id <TAB> duplicate_id.
void write_dedup_tsv(const DedupMap& map,
                     std::span<const Sequence> representatives,
                     const std::filesystem::path& path);

} // namespace divmsa
