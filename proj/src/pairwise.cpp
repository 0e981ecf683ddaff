#include "divmsa/pairwise.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace divmsa {

namespace {

// Extended IUPAC nucleotide codes as bitmasks over {A, C, G, T}.
struct IupacEntry {
    char symbol;
    unsigned mask;
};

constexpr IupacEntry kIupac[] = {
    {'A', 0b0001}, {'C', 0b0010}, {'G', 0b0100}, {'T', 0b1000},
    {'U', 0b1000}, {'R', 0b0101}, {'Y', 0b1010}, {'S', 0b0110},
    {'W', 0b1001}, {'K', 0b1100}, {'M', 0b0011}, {'B', 0b1110},
    {'D', 0b1101}, {'H', 0b1011}, {'V', 0b0111}, {'N', 0b1111},
};

constexpr char kBlosumSymbols[] = "ARNDCQEGHILKMFPSTWYVBZX*";

// BLOSUM62, row-major over kBlosumSymbols.
constexpr int kBlosum62[24 * 24] = {
     4, -1, -2, -2,  0, -1, -1,  0, -2, -1, -1, -1, -1, -2, -1,  1,  0, -3, -2,  0, -2, -1,  0, -4,
    -1,  5,  0, -2, -3,  1,  0, -2,  0, -3, -2,  2, -1, -3, -2, -1, -1, -3, -2, -3, -1,  0, -1, -4,
    -2,  0,  6,  1, -3,  0,  0,  0,  1, -3, -3,  0, -2, -3, -2,  1,  0, -4, -2, -3,  3,  0, -1, -4,
    -2, -2,  1,  6, -3,  0,  2, -1, -1, -3, -4, -1, -3, -3, -1,  0, -1, -4, -3, -3,  4,  1, -1, -4,
     0, -3, -3, -3,  9, -3, -4, -3, -3, -1, -1, -3, -1, -2, -3, -1, -1, -2, -2, -1, -3, -3, -2, -4,
    -1,  1,  0,  0, -3,  5,  2, -2,  0, -3, -2,  1,  0, -3, -1,  0, -1, -2, -1, -2,  0,  3, -1, -4,
    -1,  0,  0,  2, -4,  2,  5, -2,  0, -3, -3,  1, -2, -3, -1,  0, -1, -3, -2, -2,  1,  4, -1, -4,
     0, -2,  0, -1, -3, -2, -2,  6, -2, -4, -4, -2, -3, -3, -2,  0, -2, -2, -3, -3, -1, -2, -1, -4,
    -2,  0,  1, -1, -3,  0,  0, -2,  8, -3, -3, -1, -2, -1, -2, -1, -2, -2,  2, -3,  0,  0, -1, -4,
    -1, -3, -3, -3, -1, -3, -3, -4, -3,  4,  2, -3,  1,  0, -3, -2, -1, -3, -1,  3, -3, -3, -1, -4,
    -1, -2, -3, -4, -1, -2, -3, -4, -3,  2,  4, -2,  2,  0, -3, -2, -1, -2, -1,  1, -4, -3, -1, -4,
    -1,  2,  0, -1, -3,  1,  1, -2, -1, -3, -2,  5, -1, -3, -1,  0, -1, -3, -2, -2,  0,  1, -1, -4,
    -1, -1, -2, -3, -1,  0, -2, -3, -2,  1,  2, -1,  5,  0, -2, -1, -1, -1, -1,  1, -3, -1, -1, -4,
    -2, -3, -3, -3, -2, -3, -3, -3, -1,  0,  0, -3,  0,  6, -4, -2, -2,  1,  3, -1, -3, -3, -1, -4,
    -1, -2, -2, -1, -3, -1, -1, -2, -2, -3, -3, -1, -2, -4,  7, -1, -1, -4, -3, -2, -2, -1, -2, -4,
     1, -1,  1,  0, -1,  0,  0,  0, -1, -2, -2,  0, -1, -2, -1,  4,  1, -3, -2, -2,  0,  0,  0, -4,
     0, -1,  0, -1, -1, -1, -1, -2, -2, -1, -1, -1, -1, -2, -1,  1,  5, -2, -2,  0, -1, -1,  0, -4,
    -3, -3, -4, -4, -2, -2, -3, -2, -2, -3, -2, -3, -1,  1, -4, -3, -2, 11,  2, -3, -4, -3, -2, -4,
    -2, -2, -2, -3, -2, -1, -2, -3,  2, -1, -1, -2, -1,  3, -3, -2, -2,  2,  7, -1, -3, -2, -1, -4,
     0, -3, -3, -3, -1, -2, -2, -3, -3,  3,  1, -2,  1, -1, -2, -2,  0, -3, -1,  4, -3, -2, -1, -4,
    -2, -1,  3,  4, -3,  0,  1, -1,  0, -3, -4,  0, -3, -3, -2,  0, -1, -4, -3, -3,  4,  1, -1, -4,
    -1,  0,  0,  1, -3,  3,  4, -2,  0, -3, -3,  1, -1, -3, -1,  0, -1, -3, -2, -2,  1,  4, -1, -4,
     0, -1, -1, -1, -2, -1, -1, -1, -1, -1, -1, -1, -1, -1, -2,  0,  0, -2, -1, -1, -1, -1, -1, -4,
    -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4, -4,  1,
};

} // namespace

ScoringScheme::ScoringScheme(std::string_view symbols, std::span<const int> matrix,
                             int gap_open, int gap_extend, GapMode mode)
    : symbols_(symbols),
      gap_open_(gap_open),
      gap_extend_(gap_extend),
      mode_(mode),
      table_(128 * 128, 0) {
    const std::size_t n = symbols_.size();
    if (n == 0) {
        throw std::invalid_argument("scoring scheme needs at least one symbol");
    }
    if (matrix.size() != n * n) {
        throw std::invalid_argument("substitution matrix size does not match symbol count");
    }
    if (gap_open > 0 || gap_extend > 0) {
        throw std::invalid_argument("gap penalties must be <= 0");
    }
    if (gap_open > gap_extend) {
        throw std::invalid_argument("gap_open must be <= gap_extend");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char c = static_cast<unsigned char>(symbols_[i]);
        if (c >= 128) {
            throw std::invalid_argument("substitution symbols must be ASCII");
        }
        if (symbols_[i] == kGapSymbol) {
            throw std::invalid_argument("the gap symbol cannot appear in the residue alphabet");
        }
        if (present_[c]) {
            throw std::invalid_argument(std::string("duplicate symbol '") + symbols_[i] +
                                        "' in substitution matrix");
        }
        present_[c] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (matrix[i * n + j] != matrix[j * n + i]) {
                throw std::invalid_argument(std::string("substitution matrix is not symmetric at '") +
                                            symbols_[i] + "'/'" + symbols_[j] + "'");
            }
            set_score(symbols_[i], symbols_[j], matrix[i * n + j]);
        }
    }
    // Gap rows: matching gaps are free, a residue against a pre-existing gap
    // costs one extension step.
    present_[static_cast<unsigned char>(kGapSymbol)] = true;
    set_score(kGapSymbol, kGapSymbol, 0);
    for (std::size_t i = 0; i < n; ++i) {
        set_score(kGapSymbol, symbols_[i], gap_extend_);
    }
}

void ScoringScheme::set_score(char x, char y, int value) {
    if (value < std::numeric_limits<std::int16_t>::min() ||
        value > std::numeric_limits<std::int16_t>::max()) {
        throw std::invalid_argument("substitution score out of range");
    }
    const auto ux = static_cast<unsigned char>(x);
    const auto uy = static_cast<unsigned char>(y);
    table_[ux * 128 + uy] = static_cast<std::int16_t>(value);
    table_[uy * 128 + ux] = static_cast<std::int16_t>(value);
}

ScoringScheme default_nucleotide_scheme(int gap_open, int gap_extend,
                                        GapMode mode) {
    constexpr std::size_t n = std::size(kIupac);
    std::string symbols;
    symbols.reserve(n);
    for (const auto& e : kIupac) {
        symbols.push_back(e.symbol);
    }
    std::vector<int> matrix(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            matrix[i * n + j] = (kIupac[i].mask & kIupac[j].mask) != 0 ? 1 : -1;
        }
    }
    return ScoringScheme(symbols, matrix, gap_open, gap_extend, mode);
}

ScoringScheme default_protein_scheme(int gap_open, int gap_extend, GapMode mode) {
    return ScoringScheme(std::string_view(kBlosumSymbols, 24), kBlosum62,
                         gap_open, gap_extend, mode);
}

ScoringScheme parse_scoring_matrix(std::string_view text, int gap_open,
                                   int gap_extend, GapMode mode,
                                   std::string_view source_name) {
    const std::string where(source_name);
    std::istringstream in{std::string(text)};
    std::string line;

    std::vector<char> header;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (line[line.find_first_not_of(" \t")] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string tok;
        while (fields >> tok) {
            if (tok.size() != 1) {
                throw std::runtime_error(where + ": matrix header entries must be single characters, got '" +
                                         tok + "'");
            }
            header.push_back(tok[0]);
        }
        break;
    }
    if (header.empty()) {
        throw std::runtime_error(where + ": no matrix header row found");
    }

    const std::size_t n = header.size();
    std::vector<int> values(n * n, 0);
    std::size_t row = 0;
    while (row < n && std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (line[line.find_first_not_of(" \t")] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::vector<std::string> toks;
        std::string tok;
        while (fields >> tok) {
            toks.push_back(tok);
        }
        std::size_t first = 0;
        if (toks.size() == n + 1) {
            if (toks[0].size() != 1 || toks[0][0] != header[row]) {
                throw std::runtime_error(where + ": row label '" + toks[0] +
                                         "' does not match header symbol '" +
                                         std::string(1, header[row]) + "'");
            }
            first = 1;
        } else if (toks.size() != n) {
            throw std::runtime_error(where + ": matrix row " + std::to_string(row + 1) +
                                     " has " + std::to_string(toks.size()) +
                                     " fields, expected " + std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            const std::string& field = toks[first + j];
            char* end = nullptr;
            const long v = std::strtol(field.c_str(), &end, 10);
            if (end == field.c_str() || *end != '\0') {
                throw std::runtime_error(where + ": matrix entry '" + field +
                                         "' is not an integer");
            }
            values[row * n + j] = static_cast<int>(v);
        }
        ++row;
    }
    if (row != n) {
        throw std::runtime_error(where + ": matrix has " + std::to_string(row) +
                                 " data rows, expected " + std::to_string(n));
    }

    // A matrix file may score the gap symbol explicitly; pull those entries
    // out, build the scheme over the residues, then apply the overrides.
    std::string residues;
    std::vector<std::size_t> residue_cols;
    std::size_t gap_col = n; // sentinel: no gap column
    for (std::size_t i = 0; i < n; ++i) {
        if (header[i] == kGapSymbol) {
            gap_col = i;
        } else {
            residues.push_back(header[i]);
            residue_cols.push_back(i);
        }
    }
    const std::size_t m = residues.size();
    std::vector<int> residue_matrix(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            residue_matrix[i * m + j] = values[residue_cols[i] * n + residue_cols[j]];
        }
    }
    ScoringScheme scheme(residues, residue_matrix, gap_open, gap_extend, mode);
    if (gap_col != n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (values[gap_col * n + i] != values[i * n + gap_col]) {
                throw std::runtime_error(where + ": matrix is not symmetric in the gap column");
            }
            scheme.set_score(kGapSymbol, header[i], values[gap_col * n + i]);
        }
    }
    return scheme;
}

ScoringScheme load_scoring_matrix(const std::filesystem::path& path,
                                  int gap_open, int gap_extend, GapMode mode) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open matrix file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scoring_matrix(buf.str(), gap_open, gap_extend, mode,
                                path.string());
}

namespace {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min() / 4;

// Gotoh states. M consumes a residue pair diagonally, GapB consumes from `a`
// while inserting a gap column into `b`, GapA the reverse.
enum State : std::uint8_t { kM = 0, kGapB = 1, kGapA = 2 };

inline State pick_best(std::int64_t m, std::int64_t gb, std::int64_t ga,
                       std::int64_t& out) {
    // Tie order: diagonal, then gap in b, then gap in a.
    State s = kM;
    out = m;
    if (gb > out) {
        out = gb;
        s = kGapB;
    }
    if (ga > out) {
        out = ga;
        s = kGapA;
    }
    return s;
}

void check_symbols(std::string_view s, const ScoringScheme& scheme,
                   std::string_view which) {
    for (char c : s) {
        if (!scheme.has_symbol(c)) {
            throw std::invalid_argument(std::string("sequence ") + std::string(which) +
                                        " contains symbol '" + c +
                                        "' absent from the substitution table");
        }
    }
}

} // namespace

PairwiseResult nw_align(std::string_view a, std::string_view b,
                        const ScoringScheme& scheme) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("nw_align requires non-empty inputs");
    }
    check_symbols(a, scheme, "a");
    check_symbols(b, scheme, "b");

    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::int64_t open = scheme.open_surcharge();
    const std::int64_t extend = scheme.gap_extend();

    // Rolling score rows per state; the traceback keeps, for every cell, the
    // predecessor state of each of the three states packed into one byte.
    std::vector<std::int64_t> row_m(m + 1), row_gb(m + 1), row_ga(m + 1);
    std::vector<std::uint8_t> trace((n + 1) * (m + 1));
    const auto pack = [](State pm, State pgb, State pga) -> std::uint8_t {
        return static_cast<std::uint8_t>(pm | (pgb << 2) | (pga << 4));
    };

    row_m[0] = 0;
    row_gb[0] = kNegInf;
    row_ga[0] = kNegInf;
    for (std::size_t j = 1; j <= m; ++j) {
        row_m[j] = kNegInf;
        row_gb[j] = kNegInf;
        row_ga[j] = (j == 1 ? open + extend : row_ga[j - 1] + extend);
        trace[j] = pack(kM, kM, j == 1 ? kM : kGapA);
    }

    for (std::size_t i = 1; i <= n; ++i) {
        std::int64_t diag_m = row_m[0];
        std::int64_t diag_gb = row_gb[0];
        std::int64_t diag_ga = row_ga[0];
        row_m[0] = kNegInf;
        row_ga[0] = kNegInf;
        row_gb[0] = open + static_cast<std::int64_t>(i) * extend;
        trace[i * (m + 1)] = pack(kM, i == 1 ? kM : kGapB, kM);
        const char ai = a[i - 1];

        for (std::size_t j = 1; j <= m; ++j) {
            const std::int64_t up_m = row_m[j];
            const std::int64_t up_gb = row_gb[j];
            const std::int64_t up_ga = row_ga[j];

            std::int64_t best_m;
            const State pm = pick_best(diag_m, diag_gb, diag_ga, best_m);
            best_m += scheme.score(ai, b[j - 1]);

            // Opening is charged when the run starts, i.e. when the previous
            // column was not already the same gap state.
            std::int64_t best_gb;
            const State pgb =
                pick_best(up_m + open, up_gb, up_ga + open, best_gb);
            best_gb += extend;

            std::int64_t best_ga;
            const State pga = pick_best(row_m[j - 1] + open,
                                        row_gb[j - 1] + open,
                                        row_ga[j - 1], best_ga);
            best_ga += extend;

            diag_m = up_m;
            diag_gb = up_gb;
            diag_ga = up_ga;
            row_m[j] = best_m;
            row_gb[j] = best_gb;
            row_ga[j] = best_ga;
            trace[i * (m + 1) + j] = pack(pm, pgb, pga);
        }
    }

    std::int64_t final_score;
    State state = pick_best(row_m[m], row_gb[m], row_ga[m], final_score);

    PairwiseResult result;
    result.score = final_score;
    result.aligned_a.reserve(n + m);
    result.aligned_b.reserve(n + m);

    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 || j > 0) {
        const std::uint8_t packed = trace[i * (m + 1) + j];
        switch (state) {
        case kM:
            result.aligned_a.push_back(a[i - 1]);
            result.aligned_b.push_back(b[j - 1]);
            state = static_cast<State>(packed & 0x3);
            --i;
            --j;
            break;
        case kGapB:
            result.aligned_a.push_back(a[i - 1]);
            result.aligned_b.push_back(kGapSymbol);
            result.gaps_into_b.push_back(static_cast<std::uint32_t>(j));
            state = static_cast<State>((packed >> 2) & 0x3);
            --i;
            break;
        case kGapA:
            result.aligned_a.push_back(kGapSymbol);
            result.aligned_b.push_back(b[j - 1]);
            result.gaps_into_a.push_back(static_cast<std::uint32_t>(i));
            state = static_cast<State>((packed >> 4) & 0x3);
            --j;
            break;
        }
    }
    std::reverse(result.aligned_a.begin(), result.aligned_a.end());
    std::reverse(result.aligned_b.begin(), result.aligned_b.end());
    std::reverse(result.gaps_into_a.begin(), result.gaps_into_a.end());
    std::reverse(result.gaps_into_b.begin(), result.gaps_into_b.end());
    return result;
}

} // namespace divmsa
