#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divmsa/cluster_tree.hpp"
#include "divmsa/pairwise.hpp"
#include "divmsa/parallel.hpp"

namespace divmsa {

/// A rectangular alignment block. row_to_sequence maps each row to the
/// sequence index it carries; de-gapping a row reproduces that sequence.
struct Msa {
    std::vector<std::string> rows;
    std::vector<std::uint32_t> row_to_sequence;
    std::size_t width = 0;

    std::size_t row_count() const { return rows.size(); }
    /// Row carrying sequence `sequence`; throws if absent.
    std::size_t row_of(std::uint32_t sequence) const;
};

/// One-row alignment for a singleton leaf.
Msa align_leaf(const ClusterNode& node, std::span<const std::string_view> seqs);

/// Insert whole gap columns before the given original column indices
/// (sorted ascending; duplicates mean several columns at one site; an index
/// equal to the width appends). Residues are never edited or reordered.
Msa insert_gap_columns(Msa msa, std::span<const std::uint32_t> positions,
                       ThreadPool& pool);

/// Merge two child alignments: align the children's center rows (gaps and
/// all), replay the inserted gap columns into each side, then stack left
/// rows above right rows.
Msa merge(const ClusterTree& tree, const ClusterNode& node, Msa left, Msa right,
          const ScoringScheme& scheme, ThreadPool& pool);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Bottom-up alignment over the whole tree. Independent subtrees merge
/// concurrently; the result does not depend on the pool's worker count.
Msa align_all(const ClusterTree& tree, std::span<const std::string_view> seqs,
              const ScoringScheme& scheme, ThreadPool& pool,
              const ProgressFn& progress = nullptr);

} // namespace divmsa
