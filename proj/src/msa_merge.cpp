#include "divmsa/msa_merge.hpp"

#include <atomic>
#include <cassert>
#include <stdexcept>

namespace divmsa {

std::size_t Msa::row_of(std::uint32_t sequence) const {
    for (std::size_t i = 0; i < row_to_sequence.size(); ++i) {
        if (row_to_sequence[i] == sequence) {
            return i;
        }
    }
    throw std::invalid_argument("center row for sequence " +
                                std::to_string(sequence) +
                                " not found in alignment");
}

Msa align_leaf(const ClusterNode& node, std::span<const std::string_view> seqs) {
    if (!node.is_leaf() || node.size() != 1) {
        throw std::invalid_argument("align_leaf requires a singleton leaf node");
    }
    Msa msa;
    msa.rows.emplace_back(seqs[node.center]);
    msa.row_to_sequence.push_back(node.center);
    msa.width = msa.rows[0].size();
    return msa;
}

Msa insert_gap_columns(Msa msa, std::span<const std::uint32_t> positions,
                       ThreadPool& pool) {
    if (positions.empty()) {
        return msa;
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] > msa.width) {
            throw std::invalid_argument(
                "gap position " + std::to_string(positions[i]) +
                " exceeds alignment width " + std::to_string(msa.width));
        }
        if (i > 0 && positions[i] < positions[i - 1]) {
            throw std::invalid_argument("gap positions must be sorted ascending");
        }
    }

    const std::size_t new_width = msa.width + positions.size();
    parallel_for(pool, 0, msa.rows.size(), 64, [&](std::size_t lo, std::size_t hi) {
        std::string out;
        for (std::size_t r = lo; r < hi; ++r) {
            const std::string& row = msa.rows[r];
            out.clear();
            out.reserve(new_width);
            std::size_t p = 0;
            for (std::size_t c = 0; c < row.size(); ++c) {
                while (p < positions.size() && positions[p] == c) {
                    out.push_back(kGapSymbol);
                    ++p;
                }
                out.push_back(row[c]);
            }
            for (; p < positions.size(); ++p) {
                out.push_back(kGapSymbol);
            }
            msa.rows[r].swap(out);
        }
    });
    msa.width = new_width;
    return msa;
}

Msa merge(const ClusterTree& tree, const ClusterNode& node, Msa left, Msa right,
          const ScoringScheme& scheme, ThreadPool& pool) {
    if (node.is_leaf()) {
        throw std::invalid_argument("merge requires an internal node");
    }
    const ClusterNode& left_child = tree.nodes[node.left];
    const ClusterNode& right_child = tree.nodes[node.right];

    // The centers carry their current gaps into the pairwise alignment; the
    // gap columns it inserts then replay verbatim into each side.
    const std::size_t left_row = left.row_of(left_child.center);
    const std::size_t right_row = right.row_of(right_child.center);
    const PairwiseResult aligned =
        nw_align(left.rows[left_row], right.rows[right_row], scheme);

    left = insert_gap_columns(std::move(left), aligned.gaps_into_a, pool);
    right = insert_gap_columns(std::move(right), aligned.gaps_into_b, pool);
    assert(left.width == aligned.aligned_a.size());
    assert(right.width == aligned.aligned_b.size());
    assert(left.rows[left_row] == aligned.aligned_a);
    assert(right.rows[right_row] == aligned.aligned_b);

    Msa parent;
    parent.width = aligned.aligned_a.size();
    parent.rows = std::move(left.rows);
    parent.row_to_sequence = std::move(left.row_to_sequence);
    parent.rows.insert(parent.rows.end(),
                       std::make_move_iterator(right.rows.begin()),
                       std::make_move_iterator(right.rows.end()));
    parent.row_to_sequence.insert(parent.row_to_sequence.end(),
                                  right.row_to_sequence.begin(),
                                  right.row_to_sequence.end());
    return parent;
}

Msa align_all(const ClusterTree& tree, std::span<const std::string_view> seqs,
              const ScoringScheme& scheme, ThreadPool& pool,
              const ProgressFn& progress) {
    const std::size_t node_count = tree.nodes.size();
    std::vector<Msa> results(node_count);
    std::vector<std::atomic<int>> pending(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
        pending[i].store(tree.nodes[i].is_leaf() ? 0 : 2,
                         std::memory_order_relaxed);
    }
    std::atomic<std::size_t> completed{0};

    // Each leaf task aligns its leaf, then walks toward the root performing
    // every merge it is the second child to finish for. Whichever task loses
    // the race stops; the winner carries the merged block upward. The merge
    // inputs are fixed by the tree, so the output is schedule-independent.
    const auto finish_node = [&](std::size_t index) {
        std::size_t current = index;
        for (;;) {
            if (progress) {
                progress(completed.fetch_add(1, std::memory_order_relaxed) + 1,
                         node_count);
            }
            const std::int32_t parent = tree.nodes[current].parent;
            if (parent < 0) {
                return;
            }
            if (pending[parent].fetch_sub(1, std::memory_order_acq_rel) != 1) {
                return;
            }
            const ClusterNode& node = tree.nodes[parent];
            results[parent] =
                merge(tree, node, std::move(results[node.left]),
                      std::move(results[node.right]), scheme, pool);
            results[node.left] = Msa{};
            results[node.right] = Msa{};
            current = static_cast<std::size_t>(parent);
        }
    };

    for (std::size_t i = 0; i < node_count; ++i) {
        if (!tree.nodes[i].is_leaf()) {
            continue;
        }
        pool.submit([&, i] {
            results[i] = align_leaf(tree.nodes[i], seqs);
            finish_node(i);
        });
    }
    pool.wait_all();
    return std::move(results[0]);
}

} // namespace divmsa
