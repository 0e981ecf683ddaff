#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divmsa/parallel.hpp"

namespace divmsa {

inline constexpr std::uint32_t kNoSequence = 0xffffffffu;
inline constexpr std::size_t kMedianExactCap = 100;

/// One node of the guide tree. Members are a contiguous slice
/// [begin, end) of the tree's shared `order` permutation.
struct ClusterNode {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t center = kNoSequence; // sequence index of the geometric median
    std::uint32_t radius = 0;           // max distance from center to a member
    std::uint32_t pole_l = kNoSequence; // farthest member from center
    std::uint32_t pole_r = kNoSequence; // farthest member from pole_l
    std::int32_t left = -1;             // child node indices; -1 on leaves
    std::int32_t right = -1;
    std::int32_t parent = -1;
    std::uint32_t depth = 0;

    bool is_leaf() const { return left < 0; }
    std::uint32_t size() const { return end - begin; }
};

struct ClusterTree {
    std::vector<ClusterNode> nodes;   // nodes[0] is the root
    std::vector<std::uint32_t> order; // permutation of sequence indices

    std::span<const std::uint32_t> members(const ClusterNode& node) const {
        return std::span(order).subspan(node.begin, node.size());
    }
    std::size_t leaf_count() const;
    std::uint32_t max_depth() const;
};

struct TreeBuildOptions {
    std::uint64_t seed = 42;
    std::size_t median_exact_cap = kMedianExactCap;
};

/// The member minimizing the sum of Levenshtein distances to the others,
/// ties broken by lowest sequence index. Above `exact_cap` members, both the
/// candidates and the distance targets are restricted to a seeded uniform
/// sample of exact_cap members.
std::uint32_t geometric_median(std::span<const std::uint32_t> members,
                               std::span<const std::string_view> seqs,
                               std::uint64_t seed, std::size_t exact_cap,
                               ThreadPool& pool);

/// Divisive construction: each node picks its geometric median as center,
/// pole l = farthest member from the center, pole r = farthest from l, and
/// splits members by f(l, x) <= f(r, x). Deterministic for a fixed seed,
/// independent of the pool's worker count. `seqs` must be de-duplicated;
/// identical members surface as a de-duplication violation error.
ClusterTree build_tree(std::span<const std::string_view> seqs,
                       const TreeBuildOptions& options, ThreadPool& pool);

/// Newline-delimited JSON, one record per node: node id, parent id (null on
/// the root), center sequence id, radius, cardinality, depth.
void dump_tree(const ClusterTree& tree, std::span<const std::string> ids,
               std::ostream& out);
void dump_tree(const ClusterTree& tree, std::span<const std::string> ids,
               const std::filesystem::path& path);

} // namespace divmsa
