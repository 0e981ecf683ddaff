#include "divmsa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "divmsa/alphabet.hpp"
#include "divmsa/distance.hpp"
#include "divmsa/rng.hpp"

namespace divmsa {

double gap_percent(const Msa& msa) {
    if (msa.rows.empty() || msa.width == 0) {
        throw std::invalid_argument("gap_percent of an empty alignment");
    }
    std::uint64_t gaps = 0;
    for (const std::string& row : msa.rows) {
        gaps += static_cast<std::uint64_t>(
            std::count(row.begin(), row.end(), kGapSymbol));
    }
    return 100.0 * static_cast<double>(gaps) /
           (static_cast<double>(msa.rows.size()) * static_cast<double>(msa.width));
}

double p_score(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("p_score requires equal-length rows");
    }
    std::size_t considered = 0;
    std::size_t mismatched = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == kGapSymbol || b[i] == kGapSymbol) {
            continue;
        }
        ++considered;
        mismatched += a[i] != b[i];
    }
    if (considered == 0) {
        return 1.0; // no shared residue column: maximally dissimilar
    }
    return static_cast<double>(mismatched) / static_cast<double>(considered);
}

double distortion_pair(std::string_view a_aligned, std::string_view b_aligned,
                       std::string_view a_raw, std::string_view b_raw) {
    const std::uint32_t lev = levenshtein(a_raw, b_raw);
    if (lev == 0) {
        throw std::invalid_argument(
            "distortion is undefined for identical sequences");
    }
    return static_cast<double>(hamming_aligned(a_aligned, b_aligned)) /
           static_cast<double>(lev);
}

namespace {

// Pairs (i, j), i < j, over k rows in lexicographic order; t'th pair found by
// binary search on the cumulative count, so sampling stays integer-exact.
std::pair<std::uint32_t, std::uint32_t> pair_from_index(std::uint64_t t,
                                                        std::uint64_t k) {
    const auto pairs_before = [k](std::uint64_t i) {
        return i * k - i * (i + 1) / 2;
    };
    std::uint64_t lo = 0;
    std::uint64_t hi = k - 1;
    while (lo < hi) { // largest i with pairs_before(i) <= t
        const std::uint64_t mid = (lo + hi + 1) / 2;
        if (pairs_before(mid) <= t) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    const std::uint64_t j = lo + 1 + (t - pairs_before(lo));
    return {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(j)};
}

} // namespace

MetricsReport evaluate(const Msa& msa, std::span<const std::string_view> raws,
                       std::size_t sample_size, std::size_t pair_budget,
                       std::uint64_t seed, ThreadPool& pool) {
    if (msa.rows.empty()) {
        throw std::invalid_argument("cannot evaluate an empty alignment");
    }

    MetricsReport report;
    report.width = msa.width;
    report.seed = seed;
    report.gap_percent = gap_percent(msa);

    std::size_t max_len = 0;
    for (std::uint32_t s : msa.row_to_sequence) {
        max_len = std::max(max_len, raws[s].size());
    }
    report.stretch = static_cast<double>(msa.width) / static_cast<double>(max_len);

    // Row subsample, then a pair sample over it. Both draws are seeded
    // independently of threading, and the sampled lists come out sorted, so
    // the aggregation order below is reproducible.
    std::mt19937_64 row_rng(combine_seed(seed, 1));
    const std::vector<std::uint64_t> row_pick =
        sample_distinct(row_rng, msa.rows.size(), sample_size);
    const std::size_t k = row_pick.size();
    report.sample_size = k;
    if (k < 2) {
        return report;
    }

    const std::uint64_t all_pairs =
        static_cast<std::uint64_t>(k) * (k - 1) / 2;
    std::mt19937_64 pair_rng(combine_seed(seed, 2));
    const std::vector<std::uint64_t> pair_pick =
        sample_distinct(pair_rng, all_pairs, pair_budget);
    report.pair_count = pair_pick.size();
    if (pair_pick.empty()) {
        return report;
    }

    std::vector<double> p_values(pair_pick.size());
    std::vector<double> ratios(pair_pick.size()); // negative marks excluded
    parallel_for(pool, 0, pair_pick.size(), 256,
                 [&](std::size_t lo, std::size_t hi) {
                     for (std::size_t t = lo; t < hi; ++t) {
                         const auto [pi, pj] = pair_from_index(pair_pick[t], k);
                         const std::size_t ri = row_pick[pi];
                         const std::size_t rj = row_pick[pj];
                         p_values[t] = p_score(msa.rows[ri], msa.rows[rj]);
                         const std::string_view raw_i =
                             raws[msa.row_to_sequence[ri]];
                         const std::string_view raw_j =
                             raws[msa.row_to_sequence[rj]];
                         const std::uint32_t lev = levenshtein(raw_i, raw_j);
                         if (lev == 0) {
                             ratios[t] = -1.0;
                         } else {
                             ratios[t] =
                                 static_cast<double>(hamming_aligned(
                                     msa.rows[ri], msa.rows[rj])) /
                                 static_cast<double>(lev);
                         }
                     }
                 });

    report.p_min = 1.0;
    report.p_max = 0.0;
    double p_sum = 0.0;
    double ratio_sum = 0.0;
    std::size_t included = 0;
    for (std::size_t t = 0; t < pair_pick.size(); ++t) {
        report.p_min = std::min(report.p_min, p_values[t]);
        report.p_max = std::max(report.p_max, p_values[t]);
        p_sum += p_values[t];
        if (ratios[t] < 0.0) {
            ++report.zero_distance_pairs;
        } else {
            ratio_sum += ratios[t];
            ++included;
        }
    }
    report.p_avg = p_sum / static_cast<double>(pair_pick.size());
    report.distortion =
        included == 0 ? 0.0 : ratio_sum / static_cast<double>(included);
    return report;
}

std::string MetricsReport::to_json() const {
    nlohmann::json j{
        {"width", width},
        {"stretch", stretch},
        {"gap_percent", gap_percent},
        {"distortion", distortion},
        {"p_min", p_min},
        {"p_avg", p_avg},
        {"p_max", p_max},
        {"sample_size", sample_size},
        {"pair_count", pair_count},
        {"seed", seed},
        {"zero_distance_pairs", zero_distance_pairs},
        {"time_s", time_s},
    };
    return j.dump();
}

std::string MetricsReport::csv_header() {
    return "time_s,width,stretch,gap_percent,distortion,p_min,p_avg,p_max";
}

std::string MetricsReport::to_csv_row() const {
    const auto fmt = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };
    return fmt(time_s) + "," + std::to_string(width) + "," + fmt(stretch) +
           "," + fmt(gap_percent) + "," + fmt(distortion) + "," + fmt(p_min) +
           "," + fmt(p_avg) + "," + fmt(p_max);
}

} // namespace divmsa
