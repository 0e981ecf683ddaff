#include "divmsa/cluster_tree.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "divmsa/distance.hpp"
#include "divmsa/rng.hpp"

namespace divmsa {

namespace {

std::uint64_t hash_members(std::span<const std::uint32_t> members) {
    // FNV-1a over the member indices; gives every node a seed that depends
    // only on its member set's order, never on scheduling.
    std::uint64_t h = 14695981039346656037ULL;
    for (std::uint32_t m : members) {
        h ^= m;
        h *= 1099511628211ULL;
    }
    return h;
}

// Distances from sequence `from` to every member, written per-slot so the
// scan can run chunked without affecting the result.
void distance_scan(std::uint32_t from, std::span<const std::uint32_t> members,
                   std::span<const std::string_view> seqs, ThreadPool& pool,
                   std::vector<std::uint32_t>& out) {
    out.resize(members.size());
    const std::string_view origin = seqs[from];
    parallel_for(pool, 0, members.size(), 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            out[i] = levenshtein(origin, seqs[members[i]]);
        }
    });
}

// Argmax over a distance scan; ties go to the lowest sequence index.
std::size_t farthest(std::span<const std::uint32_t> distances,
                     std::span<const std::uint32_t> members) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < distances.size(); ++i) {
        if (distances[i] > distances[best] ||
            (distances[i] == distances[best] && members[i] < members[best])) {
            best = i;
        }
    }
    return best;
}

struct Split {
    std::uint32_t center = kNoSequence;
    std::uint32_t radius = 0;
    std::uint32_t pole_l = kNoSequence;
    std::uint32_t pole_r = kNoSequence;
    std::uint32_t mid = 0; // split point in order coordinates
    std::vector<std::uint32_t> reordered;
    bool leaf = false;
};

Split compute_split(std::span<const std::uint32_t> members,
                    std::span<const std::string_view> seqs,
                    const TreeBuildOptions& options, ThreadPool& pool) {
    Split split;
    if (members.size() == 1) {
        split.leaf = true;
        split.center = members[0];
        return split;
    }

    const std::uint64_t node_seed =
        combine_seed(options.seed, hash_members(members));
    split.center = geometric_median(members, seqs, node_seed,
                                    options.median_exact_cap, pool);

    std::vector<std::uint32_t> dist;
    distance_scan(split.center, members, seqs, pool, dist);
    split.radius = *std::max_element(dist.begin(), dist.end());
    split.pole_l = members[farthest(dist, members)];

    std::vector<std::uint32_t> dist_l;
    distance_scan(split.pole_l, members, seqs, pool, dist_l);
    split.pole_r = members[farthest(dist_l, members)];
    if (split.pole_r == split.pole_l) {
        throw std::runtime_error(
            "cluster contains identical sequences; input was not de-duplicated");
    }

    std::vector<std::uint32_t> dist_r;
    distance_scan(split.pole_r, members, seqs, pool, dist_r);

    // Stable split keeps member order reproducible across thread counts.
    split.reordered.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (dist_l[i] <= dist_r[i]) {
            split.reordered.push_back(members[i]);
        }
    }
    split.mid = static_cast<std::uint32_t>(split.reordered.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (dist_l[i] > dist_r[i]) {
            split.reordered.push_back(members[i]);
        }
    }
    return split;
}

} // namespace

std::uint32_t geometric_median(std::span<const std::uint32_t> members,
                               std::span<const std::string_view> seqs,
                               std::uint64_t seed, std::size_t exact_cap,
                               ThreadPool& pool) {
    if (members.empty()) {
        throw std::invalid_argument("geometric_median of an empty member set");
    }
    if (members.size() == 1) {
        return members[0];
    }
    exact_cap = std::max<std::size_t>(2, exact_cap);

    // Candidates double as distance targets: all members when the set is
    // small, otherwise a seeded sample of exact_cap members.
    std::vector<std::uint32_t> candidates;
    if (members.size() <= exact_cap) {
        candidates.assign(members.begin(), members.end());
    } else {
        std::mt19937_64 rng(seed);
        for (std::uint64_t pos : sample_distinct(rng, members.size(), exact_cap)) {
            candidates.push_back(members[pos]);
        }
    }

    const std::size_t k = candidates.size();
    std::vector<std::uint32_t> dist(k * k, 0);
    parallel_for(pool, 0, k, 1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                const std::uint32_t d =
                    levenshtein(seqs[candidates[i]], seqs[candidates[j]]);
                dist[i * k + j] = d;
                dist[j * k + i] = d;
            }
        }
    });

    std::size_t best = 0;
    std::uint64_t best_sum = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t sum = 0;
        for (std::size_t j = 0; j < k; ++j) {
            sum += dist[i * k + j];
        }
        if (sum < best_sum ||
            (sum == best_sum && candidates[i] < candidates[best])) {
            best_sum = sum;
            best = i;
        }
    }
    return candidates[best];
}

ClusterTree build_tree(std::span<const std::string_view> seqs,
                       const TreeBuildOptions& options, ThreadPool& pool) {
    if (seqs.empty()) {
        throw std::runtime_error("cannot build a cluster tree from zero sequences");
    }

    ClusterTree tree;
    tree.order.resize(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        tree.order[i] = static_cast<std::uint32_t>(i);
    }

    ClusterNode root;
    root.begin = 0;
    root.end = static_cast<std::uint32_t>(seqs.size());
    tree.nodes.push_back(root);

    // Level-synchronous worklist: split a whole frontier in parallel, then
    // append children in frontier order so node numbering is deterministic.
    std::vector<std::uint32_t> frontier{0};
    std::vector<Split> splits;
    while (!frontier.empty()) {
        splits.assign(frontier.size(), Split{});
        parallel_for(pool, 0, frontier.size(), 1,
                     [&](std::size_t lo, std::size_t hi) {
                         for (std::size_t i = lo; i < hi; ++i) {
                             const ClusterNode& node = tree.nodes[frontier[i]];
                             splits[i] = compute_split(tree.members(node), seqs,
                                                       options, pool);
                         }
                     });

        std::vector<std::uint32_t> next;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            ClusterNode& node = tree.nodes[frontier[i]];
            Split& split = splits[i];
            node.center = split.center;
            node.radius = split.radius;
            node.pole_l = split.pole_l;
            node.pole_r = split.pole_r;
            if (split.leaf) {
                continue;
            }

            std::copy(split.reordered.begin(), split.reordered.end(),
                      tree.order.begin() + node.begin);

            const std::uint32_t mid = node.begin + split.mid;
            ClusterNode left;
            left.begin = node.begin;
            left.end = mid;
            ClusterNode right;
            right.begin = mid;
            right.end = node.end;
            left.parent = right.parent = static_cast<std::int32_t>(frontier[i]);
            left.depth = right.depth = node.depth + 1;

            node.left = static_cast<std::int32_t>(tree.nodes.size());
            node.right = node.left + 1;
            next.push_back(static_cast<std::uint32_t>(tree.nodes.size()));
            tree.nodes.push_back(left);
            next.push_back(static_cast<std::uint32_t>(tree.nodes.size()));
            tree.nodes.push_back(right);
        }
        frontier = std::move(next);
    }
    return tree;
}

std::size_t ClusterTree::leaf_count() const {
    std::size_t count = 0;
    for (const ClusterNode& node : nodes) {
        count += node.is_leaf() ? 1 : 0;
    }
    return count;
}

std::uint32_t ClusterTree::max_depth() const {
    std::uint32_t depth = 0;
    for (const ClusterNode& node : nodes) {
        depth = std::max(depth, node.depth);
    }
    return depth;
}

void dump_tree(const ClusterTree& tree, std::span<const std::string> ids,
               std::ostream& out) {
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const ClusterNode& node = tree.nodes[i];
        nlohmann::json record{
            {"node", i},
            {"parent", node.parent < 0 ? nlohmann::json(nullptr)
                                       : nlohmann::json(node.parent)},
            {"center", ids[node.center]},
            {"radius", node.radius},
            {"cardinality", node.size()},
            {"depth", node.depth},
        };
        out << record.dump() << '\n';
    }
}

void dump_tree(const ClusterTree& tree, std::span<const std::string> ids,
               const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open tree dump file: " + path.string());
    }
    dump_tree(tree, ids, out);
    if (!out.flush()) {
        throw std::runtime_error("failed writing tree dump: " + path.string());
    }
}

} // namespace divmsa
