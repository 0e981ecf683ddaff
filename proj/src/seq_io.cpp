#include "divmsa/seq_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace divmsa {

namespace {

constexpr std::size_t kFastaLineWidth = 80;

[[noreturn]] void parse_error(std::string_view source, std::size_t line,
                              const std::string& what) {
    std::ostringstream os;
    os << std::string(source) << ":" << line << ": " << what;
    throw std::runtime_error(os.str());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string() + " for reading");
    }
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) {
        throw std::runtime_error("I/O error while reading " + path.string());
    }
    return std::move(os).str();
}

} // namespace

std::size_t DedupMap::duplicate_count() const {
    std::size_t n = 0;
    for (const auto& list : duplicates_of) n += list.size();
    return n;
}

namespace {

std::vector<Sequence> parse_fasta_impl(std::string_view text,
                                       const Alphabet* alphabet,
                                       const ParseOptions& options,
                                       std::string_view source_name) {
    std::vector<Sequence> out;
    bool in_record = false;
    std::size_t line_no = 0;
    std::size_t record_start_line = 0;

    auto finish_record = [&]() {
        if (in_record && out.back().residues.empty()) {
            parse_error(source_name, record_start_line,
                        "record '" + out.back().id + "' has no sequence data");
        }
    };

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_no;

        if (line.empty()) continue;
        if (line.front() == '>') {
            finish_record();
            std::string_view header = line.substr(1);
            std::size_t ws = header.find_first_of(" \t");
            Sequence seq;
            seq.id = std::string(header.substr(0, ws));
            if (ws != std::string_view::npos) {
                std::string_view rest = header.substr(ws + 1);
                std::size_t first = rest.find_first_not_of(" \t");
                if (first != std::string_view::npos) {
                    seq.description = std::string(rest.substr(first));
                }
            }
            if (seq.id.empty()) {
                parse_error(source_name, line_no, "header has an empty id");
            }
            seq.original_index = static_cast<std::uint32_t>(out.size());
            out.push_back(std::move(seq));
            in_record = true;
            record_start_line = line_no;
            continue;
        }
        if (!in_record) {
            parse_error(source_name, line_no, "sequence data before the first '>' header");
        }
        Sequence& seq = out.back();
        seq.residues.reserve(seq.residues.size() + line.size());
        for (char raw : line) {
            if (std::isspace(static_cast<unsigned char>(raw))) continue;
            char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
            if (c == kGapSymbol) {
                if (!options.allow_gaps) {
                    parse_error(source_name, line_no,
                                "record '" + seq.id + "' contains gap symbol '-' in unaligned input");
                }
            } else if (alphabet && !alphabet->contains(c)) {
                parse_error(source_name, line_no,
                            "record '" + seq.id + "' contains character '" +
                                std::string(1, raw) + "' outside the " +
                                alphabet->name() + " alphabet");
            }
            seq.residues.push_back(c);
        }
    }
    finish_record();
    if (out.empty()) {
        parse_error(source_name, line_no, "no FASTA records found");
    }
    return out;
}

} // namespace

std::vector<Sequence> parse_fasta_text(std::string_view text,
                                       const Alphabet& alphabet,
                                       const ParseOptions& options,
                                       std::string_view source_name) {
    return parse_fasta_impl(text, &alphabet, options, source_name);
}

std::vector<Sequence> parse_fasta_text(std::string_view text,
                                       const ParseOptions& options,
                                       std::string_view source_name) {
    return parse_fasta_impl(text, nullptr, options, source_name);
}

std::vector<Sequence> parse_fasta(const std::filesystem::path& path,
                                  const Alphabet& alphabet,
                                  const ParseOptions& options) {
    return parse_fasta_impl(read_file(path), &alphabet, options, path.string());
}

std::vector<Sequence> parse_fasta(const std::filesystem::path& path,
                                  const ParseOptions& options) {
    return parse_fasta_impl(read_file(path), nullptr, options, path.string());
}

void validate_residues(std::span<const Sequence> seqs, const Alphabet& alphabet,
                       const ParseOptions& options) {
    for (const Sequence& seq : seqs) {
        for (char c : seq.residues) {
            if (c == kGapSymbol) {
                if (!options.allow_gaps) {
                    throw std::runtime_error("record '" + seq.id +
                                             "' contains gap symbol '-' in unaligned input");
                }
                continue;
            }
            if (!alphabet.contains(c)) {
                throw std::runtime_error("record '" + seq.id + "' contains character '" +
                                         std::string(1, c) + "' outside the " +
                                         alphabet.name() + " alphabet");
            }
        }
    }
}

std::pair<std::vector<Sequence>, DedupMap> deduplicate(const std::vector<Sequence>& seqs) {
    std::vector<Sequence> kept;
    DedupMap map;
    std::unordered_map<std::string_view, std::size_t> first_seen; // residues -> kept index
    first_seen.reserve(seqs.size());
    for (const Sequence& s : seqs) {
        auto it = first_seen.find(std::string_view(s.residues));
        if (it == first_seen.end()) {
            first_seen.emplace(std::string_view(s.residues), kept.size());
            kept.push_back(s);
            map.duplicates_of.emplace_back();
        } else {
            map.duplicates_of[it->second].push_back(
                DedupMap::Duplicate{s.id, s.description, s.original_index});
        }
    }
    // first_seen holds views into `seqs`; kept copies own their storage.
    return {std::move(kept), std::move(map)};
}

std::string format_fasta(std::span<const FastaRecordView> records) {
    std::size_t bytes = 0;
    for (const auto& r : records) {
        bytes += 2 + r.id.size() + (r.description.empty() ? 0 : r.description.size() + 1);
        bytes += r.residues.size() + r.residues.size() / kFastaLineWidth + 1;
    }
    std::string out;
    out.reserve(bytes);
    for (const auto& r : records) {
        out.push_back('>');
        out.append(r.id);
        if (!r.description.empty()) {
            out.push_back(' ');
            out.append(r.description);
        }
        out.push_back('\n');
        for (std::size_t i = 0; i < r.residues.size(); i += kFastaLineWidth) {
            std::size_t n = std::min(kFastaLineWidth, r.residues.size() - i);
            out.append(r.residues.substr(i, n));
            out.push_back('\n');
        }
    }
    return out;
}

void write_fasta(std::span<const FastaRecordView> records,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    std::string text = format_fasta(records);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw std::runtime_error("I/O error while writing " + path.string());
    }
}

void write_dedup_tsv(const DedupMap& map,
                     std::span<const Sequence> representatives,
                     const std::filesystem::path& path) {
    if (map.duplicates_of.size() != representatives.size()) {
        throw std::invalid_argument("DedupMap does not match the representative list");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    for (std::size_t i = 0; i < representatives.size(); ++i) {
        for (const auto& dup : map.duplicates_of[i]) {
            out << representatives[i].id << '\t' << dup.id << '\n';
        }
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("I/O error while writing " + path.string());
    }
}

} // namespace divmsa
