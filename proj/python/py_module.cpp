#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "divmsa/distance.hpp"
#include "divmsa/metrics.hpp"
#include "divmsa/pairwise.hpp"
#include "divmsa/pipeline.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;

namespace {

divmsa::GapMode parse_gap_mode(const std::string& mode) {
    if (mode == "affine") {
        return divmsa::GapMode::Affine;
    }
    if (mode == "flat") {
        return divmsa::GapMode::Flat;
    }
    throw std::invalid_argument("gap_mode must be 'affine' or 'flat'");
}

divmsa::ScoringScheme scheme_for(const std::string& alphabet, int gap_open,
                                 int gap_extend, const std::string& gap_mode) {
    const divmsa::GapMode mode = parse_gap_mode(gap_mode);
    if (alphabet == "nt") {
        return divmsa::default_nucleotide_scheme(gap_open, gap_extend, mode);
    }
    if (alphabet == "aa") {
        return divmsa::default_protein_scheme(gap_open, gap_extend, mode);
    }
    throw std::invalid_argument("alphabet must be 'nt' or 'aa'");
}

divmsa::AlphabetChoice parse_alphabet_choice(const std::string& alphabet) {
    if (alphabet == "auto") {
        return divmsa::AlphabetChoice::Auto;
    }
    if (alphabet == "nt") {
        return divmsa::AlphabetChoice::Nucleotide;
    }
    if (alphabet == "aa") {
        return divmsa::AlphabetChoice::Protein;
    }
    throw std::invalid_argument("alphabet must be 'nt', 'aa' or 'auto'");
}

py::dict report_to_dict(const divmsa::MetricsReport& r) {
    py::dict d;
    d["width"] = r.width;
    d["stretch"] = r.stretch;
    d["gap_percent"] = r.gap_percent;
    d["distortion"] = r.distortion;
    d["p_min"] = r.p_min;
    d["p_avg"] = r.p_avg;
    d["p_max"] = r.p_max;
    d["sample_size"] = r.sample_size;
    d["pair_count"] = r.pair_count;
    d["seed"] = r.seed;
    d["zero_distance_pairs"] = r.zero_distance_pairs;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Progressive multiple sequence alignment on a divisive-clustering "
              "guide tree";

    m.def(
        "levenshtein",
        [](const std::string& a, const std::string& b) {
            py::gil_scoped_release release;
            return divmsa::levenshtein(a, b);
        },
        py::arg("a"), py::arg("b"),
        "Exact unit-cost edit distance between two strings.");

    m.def(
        "hamming_aligned",
        [](const std::string& a, const std::string& b) {
            return divmsa::hamming_aligned(a, b);
        },
        py::arg("a"), py::arg("b"),
        "Positionwise mismatch count between equal-length gapped rows.");

    py::class_<divmsa::PairwiseResult>(m, "PairwiseResult")
        .def_readonly("aligned_a", &divmsa::PairwiseResult::aligned_a)
        .def_readonly("aligned_b", &divmsa::PairwiseResult::aligned_b)
        .def_readonly("score", &divmsa::PairwiseResult::score)
        .def_readonly("gaps_into_a", &divmsa::PairwiseResult::gaps_into_a)
        .def_readonly("gaps_into_b", &divmsa::PairwiseResult::gaps_into_b)
        .def("__repr__", [](const divmsa::PairwiseResult& r) {
            return "PairwiseResult(aligned_a='" + r.aligned_a + "', aligned_b='" +
                   r.aligned_b + "', score=" + std::to_string(r.score) + ")";
        });

    m.def(
        "nw_align",
        [](const std::string& a, const std::string& b,
           const std::string& alphabet, int gap_open, int gap_extend,
           const std::string& gap_mode) {
            const divmsa::ScoringScheme scheme =
                scheme_for(alphabet, gap_open, gap_extend, gap_mode);
            py::gil_scoped_release release;
            return divmsa::nw_align(a, b, scheme);
        },
        py::arg("a"), py::arg("b"), py::arg("alphabet") = "nt",
        py::arg("gap_open") = -10, py::arg("gap_extend") = -1,
        py::arg("gap_mode") = "affine",
        "Global alignment of two (possibly gapped) strings.");

    m.def(
        "align",
        [](const std::vector<std::string>& sequences,
           const std::string& alphabet, int gap_open, int gap_extend,
           const std::string& gap_mode, std::uint64_t seed, unsigned threads) {
            divmsa::RunConfig config;
            config.alphabet = parse_alphabet_choice(alphabet);
            config.gap_open = gap_open;
            config.gap_extend = gap_extend;
            config.gap_mode = parse_gap_mode(gap_mode);
            config.seed = seed;
            config.threads = threads;
            config.order = divmsa::RowOrder::Input;

            std::vector<divmsa::Sequence> seqs(sequences.size());
            for (std::size_t i = 0; i < sequences.size(); ++i) {
                seqs[i].id = "seq" + std::to_string(i);
                seqs[i].residues = sequences[i];
                seqs[i].original_index = static_cast<std::uint32_t>(i);
            }

            py::gil_scoped_release release;
            divmsa::AlignOutput out =
                divmsa::align_sequences(std::move(seqs), config);
            std::vector<std::string> rows;
            rows.reserve(out.records.size());
            for (auto& rec : out.records) {
                rows.push_back(std::move(rec.row));
            }
            return rows;
        },
        py::arg("sequences"), py::arg("alphabet") = "auto",
        py::arg("gap_open") = -10, py::arg("gap_extend") = -1,
        py::arg("gap_mode") = "affine", py::arg("seed") = 42,
        py::arg("threads") = 0,
        "Align residue strings; returns gapped rows parallel to the input.");

    m.def(
        "evaluate",
        [](const std::vector<std::string>& rows,
           const std::vector<std::string>& raws, std::size_t sample_size,
           std::size_t pair_budget, std::uint64_t seed, unsigned threads) {
            if (rows.size() != raws.size()) {
                throw std::invalid_argument(
                    "rows and raws must have the same length");
            }
            divmsa::MetricsReport report;
            {
                py::gil_scoped_release release;
                divmsa::Msa msa;
                msa.rows = rows;
                msa.width = rows.empty() ? 0 : rows[0].size();
                msa.row_to_sequence.resize(rows.size());
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    if (rows[i].size() != msa.width) {
                        throw std::invalid_argument(
                            "aligned rows have differing widths");
                    }
                    msa.row_to_sequence[i] = static_cast<std::uint32_t>(i);
                }
                std::vector<std::string_view> views(raws.begin(), raws.end());
                divmsa::ThreadPool pool(threads > 0 ? threads : 1);
                report = divmsa::evaluate(msa, views, sample_size, pair_budget,
                                          seed, pool);
            }
            return report_to_dict(report);
        },
        py::arg("rows"), py::arg("raws"), py::arg("sample_size") = 10000,
        py::arg("pair_budget") = 100000, py::arg("seed") = 42,
        py::arg("threads") = 0,
        "Quality metrics for an alignment; rows and raws are parallel lists.");

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
