#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "divmsa/alphabet.hpp"
#include "divmsa/metrics.hpp"
#include "divmsa/pairwise.hpp"
#include "divmsa/seq_io.hpp"

namespace divmsa {

enum class AlphabetChoice { Auto, Nucleotide, Protein };
enum class RowOrder { Tree, Input };

struct RunConfig {
    AlphabetChoice alphabet = AlphabetChoice::Auto;
    int gap_open = -10;
    int gap_extend = -1;
    GapMode gap_mode = GapMode::Affine;
    std::filesystem::path matrix_path; // empty: built-in scheme
    std::uint64_t seed = 42;
    unsigned threads = 0; // 0: all hardware threads
    std::size_t sample_size = kDefaultSampleSize;
    std::size_t pair_budget = kDefaultPairBudget;
    RowOrder order = RowOrder::Tree;
    std::filesystem::path dump_tree_path;  // empty: no dump
    std::filesystem::path dump_dedup_path; // empty: no dump
    bool progress = false; // node-completion counts on stderr
};

struct AlignSummary {
    std::size_t input_count = 0;
    std::size_t unique_count = 0;
    std::size_t duplicate_count = 0;
    std::uint32_t tree_depth = 0;
    std::size_t width = 0;
    std::string alphabet;
    double elapsed_s = 0.0;

    std::string to_json() const;
};

struct AlignedRecord {
    std::string id;
    std::string description;
    std::string row;
};

struct AlignOutput {
    std::vector<AlignedRecord> records;
    AlignSummary summary;
};

/// In-memory pipeline: de-duplicate, build the guide tree, align, re-expand
/// duplicates, order rows per config.
AlignOutput align_sequences(std::vector<Sequence> seqs, const RunConfig& config);

/// File pipeline around align_sequences. The output is written to a
/// temporary sibling and renamed into place, so a failed run leaves nothing
/// behind.
AlignSummary run_align(const RunConfig& config, const std::filesystem::path& input,
                       const std::filesystem::path& output);

/// Evaluate an existing alignment (ours or third-party) against the raw
/// sequences, matched by record id. Writes the report as single-line JSON to
/// `report` and as CSV next to it (extension .csv).
MetricsReport run_evaluate(const RunConfig& config,
                           const std::filesystem::path& aligned,
                           const std::filesystem::path& raw,
                           const std::filesystem::path& report);

} // namespace divmsa
