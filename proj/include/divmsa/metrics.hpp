#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "divmsa/msa_merge.hpp"
#include "divmsa/parallel.hpp"

namespace divmsa {

struct MetricsReport {
    std::size_t width = 0;
    double stretch = 0.0;     // width / longest unaligned sequence
    double gap_percent = 0.0; // mean over rows of gaps/width, as a percentage
    double distortion = 0.0;  // mean over pairs of hamming/levenshtein
    double p_min = 0.0;
    double p_avg = 0.0;
    double p_max = 0.0;
    std::size_t sample_size = 0; // rows actually sampled
    std::size_t pair_count = 0;  // pairs actually evaluated
    std::uint64_t seed = 0;
    // Pairs skipped by the distortion mean because their unaligned
    // Levenshtein distance was zero (duplicates in non-de-duplicated input).
    std::size_t zero_distance_pairs = 0;
    double time_s = 0.0; // filled by callers that time the evaluation

    std::string to_json() const;
    std::string to_csv_row() const;
    static std::string csv_header();
};

/// Mean over rows of (gap count / width), as a percentage. Equal to
/// 100 * (1 - mean unaligned length / width).
double gap_percent(const Msa& msa);

/// Fraction of mismatches over columns where both rows carry residues;
/// 1.0 when no such column exists.
double p_score(std::string_view a, std::string_view b);

/// hamming_aligned over the gapped rows divided by levenshtein over the raw
/// residues. Throws when the raws are identical (zero denominator).
double distortion_pair(std::string_view a_aligned, std::string_view b_aligned,
                       std::string_view a_raw, std::string_view b_raw);

/// Full report. Width, stretch and gap_percent cover the whole alignment;
/// the pair metrics run over a seeded uniform sample: up to sample_size rows,
/// then up to pair_budget distinct pairs among them. `raws` is indexed by the
/// msa's row_to_sequence values.
MetricsReport evaluate(const Msa& msa, std::span<const std::string_view> raws,
                       std::size_t sample_size, std::size_t pair_budget,
                       std::uint64_t seed, ThreadPool& pool);

inline constexpr std::size_t kDefaultSampleSize = 10000;
inline constexpr std::size_t kDefaultPairBudget = 100000;

} // namespace divmsa
