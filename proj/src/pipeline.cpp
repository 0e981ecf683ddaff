#include "divmsa/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "divmsa/cluster_tree.hpp"
#include "divmsa/msa_merge.hpp"

namespace divmsa {

namespace {

AlphabetKind resolve_alphabet(AlphabetChoice choice,
                              std::span<const Sequence> seqs) {
    if (choice == AlphabetChoice::Nucleotide) {
        return AlphabetKind::Nucleotide;
    }
    if (choice == AlphabetChoice::Protein) {
        return AlphabetKind::Protein;
    }
    std::vector<std::string_view> views;
    views.reserve(seqs.size());
    for (const Sequence& s : seqs) {
        views.push_back(s.residues);
    }
    return detect_alphabet(views);
}

ScoringScheme make_scheme(const RunConfig& config, AlphabetKind kind) {
    if (!config.matrix_path.empty()) {
        return load_scoring_matrix(config.matrix_path, config.gap_open,
                                   config.gap_extend, config.gap_mode);
    }
    return kind == AlphabetKind::Nucleotide
               ? default_nucleotide_scheme(config.gap_open, config.gap_extend,
                                           config.gap_mode)
               : default_protein_scheme(config.gap_open, config.gap_extend,
                                        config.gap_mode);
}

std::size_t resolve_threads(unsigned threads) {
    if (threads > 0) {
        return threads;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

class StderrProgress {
public:
    explicit StderrProgress(bool enabled) : enabled_(enabled) {}

    ProgressFn callback() {
        if (!enabled_) {
            return nullptr;
        }
        return [](std::size_t done, std::size_t total) {
            // Print sparsely; exact interleaving across threads is unimportant.
            if (done == total || done % 256 == 0) {
                std::fprintf(stderr, "aligned %zu/%zu nodes\n", done, total);
            }
        };
    }

private:
    bool enabled_;
};

} // namespace

AlignOutput align_sequences(std::vector<Sequence> seqs, const RunConfig& config) {
    if (seqs.empty()) {
        throw std::runtime_error("no sequences to align");
    }
    if (config.gap_open > config.gap_extend || config.gap_extend > 0) {
        throw std::invalid_argument("gap penalties must satisfy gap_open <= gap_extend <= 0");
    }
    const auto start = std::chrono::steady_clock::now();

    const AlphabetKind kind = resolve_alphabet(config.alphabet, seqs);
    if (config.matrix_path.empty()) {
        validate_residues(seqs, Alphabet::get(kind));
    }
    const ScoringScheme scheme = make_scheme(config, kind);
    for (const Sequence& s : seqs) {
        for (char c : s.residues) {
            if (!scheme.has_symbol(c)) {
                throw std::runtime_error("record '" + s.id + "' contains character '" +
                                         std::string(1, c) +
                                         "' that the substitution matrix does not score");
            }
        }
    }

    auto [reps, dedup] = deduplicate(seqs);
    if (!config.dump_dedup_path.empty()) {
        write_dedup_tsv(dedup, reps, config.dump_dedup_path);
    }

    std::vector<std::string_view> views;
    views.reserve(reps.size());
    for (const Sequence& s : reps) {
        views.push_back(s.residues);
    }

    ThreadPool pool(resolve_threads(config.threads));
    TreeBuildOptions tree_options;
    tree_options.seed = config.seed;
    const ClusterTree tree = build_tree(views, tree_options, pool);

    if (!config.dump_tree_path.empty()) {
        std::vector<std::string> ids;
        ids.reserve(reps.size());
        for (const Sequence& s : reps) {
            ids.push_back(s.id);
        }
        dump_tree(tree, ids, config.dump_tree_path);
    }

    StderrProgress progress(config.progress);
    const Msa msa = align_all(tree, views, scheme, pool, progress.callback());

    // Re-expand duplicates: each duplicate reuses its representative's row.
    AlignOutput out;
    out.records.resize(seqs.size());
    std::size_t slot = 0;
    const auto place = [&](const std::string& id, const std::string& description,
                           const std::string& row, std::uint32_t original_index) {
        const std::size_t at =
            config.order == RowOrder::Input ? original_index : slot++;
        out.records[at] = AlignedRecord{id, description, row};
    };
    for (std::size_t r = 0; r < msa.rows.size(); ++r) {
        const Sequence& rep = reps[msa.row_to_sequence[r]];
        place(rep.id, rep.description, msa.rows[r], rep.original_index);
        for (const auto& dup : dedup.duplicates_of[msa.row_to_sequence[r]]) {
            place(dup.id, dup.description, msa.rows[r], dup.original_index);
        }
    }

    out.summary.input_count = seqs.size();
    out.summary.unique_count = reps.size();
    out.summary.duplicate_count = dedup.duplicate_count();
    out.summary.tree_depth = tree.max_depth();
    out.summary.width = msa.width;
    out.summary.alphabet =
        kind == AlphabetKind::Nucleotide ? "nucleotide" : "protein";
    out.summary.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return out;
}

AlignSummary run_align(const RunConfig& config, const std::filesystem::path& input,
                       const std::filesystem::path& output) {
    std::vector<Sequence> seqs;
    if (config.alphabet == AlphabetChoice::Auto) {
        seqs = parse_fasta(input);
    } else {
        const AlphabetKind kind = config.alphabet == AlphabetChoice::Nucleotide
                                      ? AlphabetKind::Nucleotide
                                      : AlphabetKind::Protein;
        seqs = parse_fasta(input, Alphabet::get(kind));
    }

    AlignOutput out = align_sequences(std::move(seqs), config);

    std::vector<FastaRecordView> records;
    records.reserve(out.records.size());
    for (const AlignedRecord& r : out.records) {
        records.push_back(FastaRecordView{r.id, r.description, r.row});
    }
    const std::filesystem::path tmp = output.string() + ".partial";
    try {
        write_fasta(records, tmp);
        std::filesystem::rename(tmp, output);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
    return out.summary;
}

MetricsReport run_evaluate(const RunConfig& config,
                           const std::filesystem::path& aligned,
                           const std::filesystem::path& raw,
                           const std::filesystem::path& report) {
    ParseOptions aligned_options;
    aligned_options.allow_gaps = true;
    const std::vector<Sequence> rows = parse_fasta(aligned, aligned_options);
    const std::vector<Sequence> raws = parse_fasta(raw);

    for (const Sequence& r : rows) {
        if (r.residues.size() != rows[0].residues.size()) {
            throw std::runtime_error(
                "aligned records have differing widths: '" + rows[0].id + "' is " +
                std::to_string(rows[0].residues.size()) + ", '" + r.id + "' is " +
                std::to_string(r.residues.size()));
        }
    }
    if (rows.size() != raws.size()) {
        throw std::runtime_error("aligned file has " + std::to_string(rows.size()) +
                                 " records but raw file has " +
                                 std::to_string(raws.size()));
    }

    std::unordered_map<std::string_view, std::size_t> raw_by_id;
    raw_by_id.reserve(raws.size());
    for (std::size_t i = 0; i < raws.size(); ++i) {
        if (!raw_by_id.emplace(std::string_view(raws[i].id), i).second) {
            throw std::runtime_error("duplicate id '" + raws[i].id +
                                     "' in raw file; ids must be unique to match "
                                     "aligned rows");
        }
    }

    Msa msa;
    msa.width = rows[0].residues.size();
    msa.rows.reserve(rows.size());
    msa.row_to_sequence.reserve(rows.size());
    std::vector<std::string_view> raw_views(raws.size());
    std::string degapped;
    for (const Sequence& r : rows) {
        const auto it = raw_by_id.find(std::string_view(r.id));
        if (it == raw_by_id.end()) {
            throw std::runtime_error("aligned record '" + r.id +
                                     "' has no counterpart in the raw file");
        }
        degapped.clear();
        for (char c : r.residues) {
            if (c != kGapSymbol) {
                degapped.push_back(c);
            }
        }
        if (degapped != raws[it->second].residues) {
            throw std::runtime_error("record '" + r.id +
                                     "': de-gapped row does not equal the raw sequence");
        }
        msa.rows.push_back(r.residues);
        msa.row_to_sequence.push_back(static_cast<std::uint32_t>(it->second));
        raw_views[it->second] = raws[it->second].residues;
    }

    ThreadPool pool(resolve_threads(config.threads));
    const auto start = std::chrono::steady_clock::now();
    MetricsReport result = evaluate(msa, raw_views, config.sample_size,
                                    config.pair_budget, config.seed, pool);
    result.time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    std::ofstream json_out(report);
    if (!json_out) {
        throw std::runtime_error("cannot open report file: " + report.string());
    }
    json_out << result.to_json() << '\n';
    if (!json_out.flush()) {
        throw std::runtime_error("failed writing report: " + report.string());
    }

    std::filesystem::path csv_path = report;
    csv_path.replace_extension(".csv");
    std::ofstream csv_out(csv_path);
    if (!csv_out) {
        throw std::runtime_error("cannot open report file: " + csv_path.string());
    }
    csv_out << MetricsReport::csv_header() << '\n' << result.to_csv_row() << '\n';
    if (!csv_out.flush()) {
        throw std::runtime_error("failed writing report: " + csv_path.string());
    }
    return result;
}

std::string AlignSummary::to_json() const {
    nlohmann::json j{
        {"input_count", input_count},
        {"unique_count", unique_count},
        {"duplicate_count", duplicate_count},
        {"tree_depth", tree_depth},
        {"width", width},
        {"alphabet", alphabet},
        {"elapsed_s", elapsed_s},
    };
    return j.dump();
}

} // namespace divmsa
