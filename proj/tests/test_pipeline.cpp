#include <doctest.h>

#include "divmsa/pipeline.hpp"

#include "test_support.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>

using namespace divmsa;
using namespace testsupport;

namespace {

namespace fs = std::filesystem;

// Per-test scratch directory, removed on destruction.
struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("divmsa_pipeline_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path file(const std::string& name) const { return path / name; }
};

void write_input(const fs::path& path,
                 const std::vector<std::pair<std::string, std::string>>& records) {
    std::vector<FastaRecordView> views;
    views.reserve(records.size());
    for (const auto& [id, residues] : records) {
        views.push_back(FastaRecordView{id, "", residues});
    }
    write_fasta(views, path);
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::pair<std::string, std::string>> random_records(
    std::mt19937_64& rng, std::size_t count, std::size_t min_len,
    std::size_t max_len) {
    std::vector<std::pair<std::string, std::string>> records;
    const auto seqs = random_dataset(rng, count, min_len, max_len, "ACGT");
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        records.emplace_back("seq" + std::to_string(i), seqs[i]);
    }
    return records;
}

} // namespace

TEST_CASE("run_align round-trips every input sequence") {
    TempDir dir("roundtrip");
    std::mt19937_64 rng(131);
    const auto records = random_records(rng, 30, 10, 40);
    write_input(dir.file("in.fa"), records);

    RunConfig config;
    config.threads = 2;
    const auto summary = run_align(config, dir.file("in.fa"), dir.file("out.fa"));

    CHECK(summary.input_count == records.size());
    CHECK(summary.alphabet == "nucleotide");
    CHECK(summary.elapsed_s >= 0.0);

    const auto rows = parse_fasta(dir.file("out.fa"), {.allow_gaps = true});
    REQUIRE(rows.size() == records.size());
    std::map<std::string, std::string> by_id;
    for (const auto& r : rows) {
        CHECK(r.residues.size() == summary.width);
        by_id[r.id] = degap(r.residues);
    }
    for (const auto& [id, residues] : records) {
        CHECK(by_id.at(id) == residues);
    }
    CHECK_FALSE(fs::exists(dir.file("out.fa.partial")));
}

TEST_CASE("duplicates are re-expanded onto their representative's row") {
    TempDir dir("dups");
    write_input(dir.file("in.fa"), {{"a", "ACGTACGT"},
                                    {"b", "ACTTACGT"},
                                    {"c", "ACGTACGT"},
                                    {"d", "ACGT"},
                                    {"e", "ACGTACGT"}});

    RunConfig config;
    config.threads = 1;
    config.order = RowOrder::Input;
    config.dump_dedup_path = dir.file("dedup.tsv");
    const auto summary = run_align(config, dir.file("in.fa"), dir.file("out.fa"));

    CHECK(summary.input_count == 5);
    CHECK(summary.unique_count == 3);
    CHECK(summary.duplicate_count == 2);

    const auto rows = parse_fasta(dir.file("out.fa"), {.allow_gaps = true});
    REQUIRE(rows.size() == 5);
    // Input order preserved, duplicate rows identical to the representative.
    CHECK(rows[0].id == "a");
    CHECK(rows[1].id == "b");
    CHECK(rows[2].id == "c");
    CHECK(rows[3].id == "d");
    CHECK(rows[4].id == "e");
    CHECK(rows[2].residues == rows[0].residues);
    CHECK(rows[4].residues == rows[0].residues);

    const std::string tsv = read_bytes(dir.file("dedup.tsv"));
    CHECK(tsv == "a\tc\na\te\n");
}

TEST_CASE("tree order places duplicates right after their representative") {
    TempDir dir("treeorder");
    write_input(dir.file("in.fa"), {{"a", "ACGTACGT"},
                                    {"b", "TTTTTTTT"},
                                    {"c", "ACGTACGT"}});

    RunConfig config;
    config.threads = 1;
    config.order = RowOrder::Tree;
    run_align(config, dir.file("in.fa"), dir.file("out.fa"));

    const auto rows = parse_fasta(dir.file("out.fa"), {.allow_gaps = true});
    REQUIRE(rows.size() == 3);
    // Wherever 'a' lands, its duplicate 'c' is the next record.
    std::size_t a_at = 3;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].id == "a") a_at = i;
    }
    REQUIRE(a_at < 2);
    CHECK(rows[a_at + 1].id == "c");
}

TEST_CASE("a single sequence aligns to itself") {
    TempDir dir("single");
    write_input(dir.file("in.fa"), {{"only", "ACGTTGCA"}});

    RunConfig config;
    config.threads = 1;
    const auto summary = run_align(config, dir.file("in.fa"), dir.file("out.fa"));
    CHECK(summary.width == 8);
    CHECK(summary.tree_depth == 0);

    const auto rows = parse_fasta(dir.file("out.fa"), {.allow_gaps = true});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].residues == "ACGTTGCA");
}

TEST_CASE("failed runs leave no output behind") {
    TempDir dir("failure");
    std::ofstream(dir.file("empty.fa")).close();

    RunConfig config;
    CHECK_THROWS_AS(run_align(config, dir.file("empty.fa"), dir.file("out.fa")),
                    std::runtime_error);
    CHECK_FALSE(fs::exists(dir.file("out.fa")));
    CHECK_FALSE(fs::exists(dir.file("out.fa.partial")));
}

TEST_CASE("gap penalty configuration is validated") {
    std::vector<Sequence> seqs;
    seqs.push_back(Sequence{"a", "", "ACGT", 0});
    seqs.push_back(Sequence{"b", "", "AGT", 1});

    RunConfig config;
    config.threads = 1;
    config.gap_open = -1;
    config.gap_extend = -5; // open must be <= extend
    CHECK_THROWS_AS(align_sequences(seqs, config), std::invalid_argument);
    config.gap_open = -5;
    config.gap_extend = 1; // extend must be <= 0
    CHECK_THROWS_AS(align_sequences(seqs, config), std::invalid_argument);
}

TEST_CASE("forced and detected alphabets") {
    TempDir dir("alpha");
    write_input(dir.file("aa.fa"), {{"p1", "MKVLAARNDE"}, {"p2", "MKVLAARNDW"}});

    RunConfig config;
    config.threads = 1;
    const auto summary =
        run_align(config, dir.file("aa.fa"), dir.file("out.fa"));
    CHECK(summary.alphabet == "protein");

    // Forcing nucleotide makes the same input a parse error.
    config.alphabet = AlphabetChoice::Nucleotide;
    CHECK_THROWS_WITH_AS(
        run_align(config, dir.file("aa.fa"), dir.file("out2.fa")),
        doctest::Contains("nucleotide"), std::runtime_error);
}

TEST_CASE("a custom matrix defines its own symbol universe") {
    TempDir dir("matrix");
    const std::string matrix =
        "0 1\n"
        "2 -1\n"
        "-1 2\n";
    std::ofstream(dir.file("matrix.txt")) << matrix;
    write_input(dir.file("in.fa"), {{"x", "0110"}, {"y", "010"}});

    RunConfig config;
    config.threads = 1;
    config.matrix_path = dir.file("matrix.txt");
    const auto summary = run_align(config, dir.file("in.fa"), dir.file("out.fa"));
    CHECK(summary.input_count == 2);

    const auto rows = parse_fasta(dir.file("out.fa"), {.allow_gaps = true});
    std::map<std::string, std::string> by_id;
    for (const auto& r : rows) by_id[r.id] = degap(r.residues);
    CHECK(by_id.at("x") == "0110");
    CHECK(by_id.at("y") == "010");

    // Symbols the matrix does not score are still rejected.
    write_input(dir.file("bad.fa"), {{"x", "0110"}, {"y", "012"}});
    CHECK_THROWS_WITH_AS(
        run_align(config, dir.file("bad.fa"), dir.file("out2.fa")),
        doctest::Contains("does not score"), std::runtime_error);
}

TEST_CASE("alignment output is byte-identical across thread counts") {
    TempDir dir("threads");
    std::mt19937_64 rng(141);
    const auto records = random_records(rng, 40, 15, 35);
    write_input(dir.file("in.fa"), records);

    std::string first;
    for (unsigned threads : {1u, 2u, 8u}) {
        RunConfig config;
        config.threads = threads;
        const auto out = dir.file("out" + std::to_string(threads) + ".fa");
        run_align(config, dir.file("in.fa"), out);
        const std::string bytes = read_bytes(out);
        if (first.empty()) {
            first = bytes;
        } else {
            CHECK(bytes == first);
        }
    }
}

TEST_CASE("run_evaluate reports on the engine's own output") {
    TempDir dir("evaluate");
    std::mt19937_64 rng(151);
    const auto records = random_records(rng, 25, 10, 30);
    write_input(dir.file("raw.fa"), records);

    RunConfig config;
    config.threads = 2;
    run_align(config, dir.file("raw.fa"), dir.file("aligned.fa"));

    const auto report = run_evaluate(config, dir.file("aligned.fa"),
                                     dir.file("raw.fa"), dir.file("report.json"));
    CHECK(report.stretch >= 1.0);
    CHECK(report.distortion >= 1.0);
    CHECK(report.p_min >= 0.0);
    CHECK(report.p_max <= 1.0);
    CHECK(report.time_s >= 0.0);

    // JSON report round-trips; the CSV lands next to it.
    const auto j = nlohmann::json::parse(read_bytes(dir.file("report.json")));
    CHECK(j["width"] == report.width);
    CHECK(j["distortion"] == doctest::Approx(report.distortion));

    const std::string csv = read_bytes(dir.file("report.csv"));
    CHECK(csv.find(MetricsReport::csv_header()) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("run_evaluate rejects mismatched inputs") {
    TempDir dir("evalerr");
    RunConfig config;
    config.threads = 1;

    write_input(dir.file("raw.fa"), {{"a", "ACGT"}, {"b", "AGT"}});
    write_input(dir.file("aligned.fa"), {{"a", "ACGT"}, {"b", "A-GT"}});
    CHECK_NOTHROW(run_evaluate(config, dir.file("aligned.fa"), dir.file("raw.fa"),
                               dir.file("report.json")));

    SUBCASE("ragged aligned widths") {
        write_input(dir.file("ragged.fa"), {{"a", "ACGT"}, {"b", "A-GTT"}});
        CHECK_THROWS_WITH_AS(
            run_evaluate(config, dir.file("ragged.fa"), dir.file("raw.fa"),
                         dir.file("r.json")),
            doctest::Contains("differing widths"), std::runtime_error);
    }
    SUBCASE("record count mismatch") {
        write_input(dir.file("extra.fa"),
                    {{"a", "ACGT"}, {"b", "A-GT"}, {"c", "AAAA"}});
        CHECK_THROWS_WITH_AS(
            run_evaluate(config, dir.file("extra.fa"), dir.file("raw.fa"),
                         dir.file("r.json")),
            doctest::Contains("records"), std::runtime_error);
    }
    SUBCASE("id missing from the raw file") {
        write_input(dir.file("renamed.fa"), {{"a", "ACGT"}, {"z", "A-GT"}});
        CHECK_THROWS_WITH_AS(
            run_evaluate(config, dir.file("renamed.fa"), dir.file("raw.fa"),
                         dir.file("r.json")),
            doctest::Contains("no counterpart"), std::runtime_error);
    }
    SUBCASE("row content disagrees with the raw sequence") {
        write_input(dir.file("wrong.fa"), {{"a", "ACGT"}, {"b", "AGTT"}});
        CHECK_THROWS_WITH_AS(
            run_evaluate(config, dir.file("wrong.fa"), dir.file("raw.fa"),
                         dir.file("r.json")),
            doctest::Contains("de-gapped"), std::runtime_error);
    }
    SUBCASE("duplicate raw ids") {
        write_input(dir.file("dupraw.fa"), {{"a", "ACGT"}, {"a", "AGT"}});
        CHECK_THROWS_WITH_AS(
            run_evaluate(config, dir.file("aligned.fa"), dir.file("dupraw.fa"),
                         dir.file("r.json")),
            doctest::Contains("duplicate id"), std::runtime_error);
    }
}

TEST_CASE("evaluate reports are deterministic across thread counts") {
    TempDir dir("evaldet");
    std::mt19937_64 rng(161);
    const auto records = random_records(rng, 30, 12, 30);
    write_input(dir.file("raw.fa"), records);

    RunConfig config;
    config.threads = 2;
    config.sample_size = 20;
    config.pair_budget = 50;
    run_align(config, dir.file("raw.fa"), dir.file("aligned.fa"));

    nlohmann::json first;
    for (unsigned threads : {1u, 2u, 8u}) {
        config.threads = threads;
        run_evaluate(config, dir.file("aligned.fa"), dir.file("raw.fa"),
                     dir.file("report.json"));
        auto j = nlohmann::json::parse(read_bytes(dir.file("report.json")));
        j.erase("time_s"); // wall-clock, legitimately varies
        if (first.is_null()) {
            first = j;
        } else {
            CHECK(j == first);
        }
    }
}

TEST_CASE("tree dump from the pipeline is valid NDJSON") {
    TempDir dir("dump");
    std::mt19937_64 rng(171);
    const auto records = random_records(rng, 12, 8, 20);
    write_input(dir.file("in.fa"), records);

    RunConfig config;
    config.threads = 1;
    config.dump_tree_path = dir.file("tree.ndjson");
    run_align(config, dir.file("in.fa"), dir.file("out.fa"));

    std::istringstream is(read_bytes(dir.file("tree.ndjson")));
    std::string line;
    std::size_t nodes = 0;
    std::size_t leaves = 0;
    while (std::getline(is, line)) {
        const auto j = nlohmann::json::parse(line);
        if (j["cardinality"] == 1) ++leaves;
        ++nodes;
    }
    CHECK(leaves == records.size());
    CHECK(nodes == 2 * records.size() - 1);
}

TEST_CASE("align summary serializes cleanly") {
    AlignSummary summary;
    summary.input_count = 10;
    summary.unique_count = 8;
    summary.duplicate_count = 2;
    summary.tree_depth = 3;
    summary.width = 44;
    summary.alphabet = "nucleotide";
    summary.elapsed_s = 0.5;
    const auto j = nlohmann::json::parse(summary.to_json());
    CHECK(j["input_count"] == 10);
    CHECK(j["unique_count"] == 8);
    CHECK(j["duplicate_count"] == 2);
    CHECK(j["tree_depth"] == 3);
    CHECK(j["width"] == 44);
    CHECK(j["alphabet"] == "nucleotide");
}
