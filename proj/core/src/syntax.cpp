#include "subseg/syntax.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>

#include "subseg/error.hpp"
#include "subseg/text.hpp"

namespace subseg {

std::vector<AnnotationRow> AnnotationFile::rows() const {
    std::vector<AnnotationRow> out;
    out.reserve(token_count());
    for (const auto& s : sentences) {
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

std::size_t AnnotationFile::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) {
        n += s.size();
    }
    return n;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) {
            return cols;
        }
        start = tab + 1;
    }
}

bool is_plain_id(std::string_view id) {
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), value);
    return ec == std::errc{} && ptr == id.data() + id.size();
}

std::string unknown_if_blank(std::string_view field) {
    return field == "_" ? std::string{} : std::string(field);
}

}  // namespace

AnnotationFile parse_annotations(std::istream& in, std::string_view source) {
    AnnotationFile file;
    std::vector<AnnotationRow> sentence;
    std::string line;
    std::size_t line_no = 0;
    const auto end_sentence = [&] {
        if (!sentence.empty()) {
            file.sentences.push_back(std::move(sentence));
            sentence.clear();
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            end_sentence();
            continue;
        }
        if (line.front() == '#') {
            continue;
        }
        const auto cols = split_tabs(line);
        const auto where = std::string(source) + ":" + std::to_string(line_no);
        if (cols.size() != 10) {
            throw DataError(where + ": expected 10 tab-separated columns, found " +
                            std::to_string(cols.size()));
        }
        const std::string_view id = cols[0];
        if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
            continue;  // multiword range or empty node
        }
        if (!is_plain_id(id)) {
            throw DataError(where + ": invalid token id '" + std::string(id) + "'");
        }
        if (cols[1].empty()) {
            throw DataError(where + ": empty form");
        }
        sentence.push_back(AnnotationRow{std::string(cols[1]), unknown_if_blank(cols[3]),
                                         unknown_if_blank(cols[7])});
    }
    end_sentence();
    return file;
}

AnnotationFile load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return parse_annotations(in, path.string());
}

namespace {

std::vector<std::optional<std::size_t>> strict_alignment(const TokenList& tokens,
                                                         const std::vector<std::string>& forms) {
    const std::size_t common = std::min(tokens.size(), forms.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (tokens[i] != forms[i]) {
            throw DataError("strict alignment failed at token " + std::to_string(i) + ": '" + tokens[i] +
                            "' vs annotation '" + forms[i] + "'");
        }
    }
    if (tokens.size() != forms.size()) {
        throw DataError("strict alignment failed at token " + std::to_string(common) + ": " +
                        std::to_string(tokens.size()) + " tokens vs " + std::to_string(forms.size()) +
                        " annotation rows");
    }
    std::vector<std::optional<std::size_t>> map(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        map[i] = i;
    }
    return map;
}

// Suffix longest-common-subsequence table restricted to the diagonals
// lo <= i - j <= hi. Cells outside the band read as -infinity, so values
// inside never exceed the unrestricted ones.
class BandedLcs {
  public:
    BandedLcs(const TokenList& a, const std::vector<std::string>& b, std::ptrdiff_t lo, std::ptrdiff_t hi)
        : n_(static_cast<std::ptrdiff_t>(a.size())), m_(static_cast<std::ptrdiff_t>(b.size())), lo_(lo),
          width_(hi - lo + 1), table_(static_cast<std::size_t>((n_ + 1) * width_), kOutside) {
        for (std::ptrdiff_t i = n_; i >= 0; --i) {
            const std::ptrdiff_t j_hi = std::min(m_, i - lo);
            const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, i - hi);
            for (std::ptrdiff_t j = j_hi; j >= j_lo; --j) {
                int best;
                if (i == n_ || j == m_) {
                    best = 0;
                } else {
                    best = std::max(at(i + 1, j), at(i, j + 1));
                    if (a[static_cast<std::size_t>(i)] == b[static_cast<std::size_t>(j)]) {
                        best = std::max(best, at(i + 1, j + 1) + 1);
                    }
                }
                cell(i, j) = best;
            }
        }
    }

    int at(std::ptrdiff_t i, std::ptrdiff_t j) const {
        const std::ptrdiff_t k = i - j - lo_;
        if (i > n_ || j > m_ || k < 0 || k >= width_) {
            return kOutside;
        }
        return table_[static_cast<std::size_t>(i * width_ + k)];
    }

  private:
    static constexpr int kOutside = std::numeric_limits<int>::min() / 4;

    int& cell(std::ptrdiff_t i, std::ptrdiff_t j) {
        return table_[static_cast<std::size_t>(i * width_ + (i - j - lo_))];
    }

    std::ptrdiff_t n_, m_, lo_, width_;
    std::vector<int> table_;
};

std::vector<std::optional<std::size_t>> lenient_alignment(const TokenList& tokens,
                                                          const std::vector<std::string>& forms) {
    const auto n = static_cast<std::ptrdiff_t>(tokens.size());
    const auto m = static_cast<std::ptrdiff_t>(forms.size());
    const std::ptrdiff_t offset = n - m;

    // Any alignment with at most `width` unmatched items on either side stays
    // within `width` diagonals of the ends, so once the banded optimum needs
    // no more than that, it is the true optimum.
    std::ptrdiff_t width = 16;
    while (true) {
        const std::ptrdiff_t lo = std::min<std::ptrdiff_t>(0, offset) - width;
        const std::ptrdiff_t hi = std::max<std::ptrdiff_t>(0, offset) + width;
        const BandedLcs lcs(tokens, forms, lo, hi);
        const std::ptrdiff_t unmatched = n + m - 2 * static_cast<std::ptrdiff_t>(lcs.at(0, 0));
        if (unmatched <= width || width >= n + m) {
            std::vector<std::optional<std::size_t>> map(tokens.size());
            std::ptrdiff_t i = 0, j = 0;
            while (i < n && j < m) {
                const int here = lcs.at(i, j);
                if (tokens[static_cast<std::size_t>(i)] == forms[static_cast<std::size_t>(j)] &&
                    lcs.at(i + 1, j + 1) + 1 == here) {
                    map[static_cast<std::size_t>(i)] = static_cast<std::size_t>(j);
                    ++i;
                    ++j;
                } else if (lcs.at(i + 1, j) == here) {
                    ++i;
                } else {
                    ++j;
                }
            }
            return map;
        }
        width *= 2;
    }
}

}  // namespace

std::vector<std::optional<std::size_t>> alignment_map(const TokenList& tokens,
                                                      const std::vector<AnnotationRow>& rows,
                                                      AlignMode mode) {
    std::vector<std::string> forms;
    forms.reserve(rows.size());
    for (const auto& r : rows) {
        forms.push_back(text::to_lower(r.form));
    }
    return mode == AlignMode::strict ? strict_alignment(tokens, forms) : lenient_alignment(tokens, forms);
}

void apply_annotations(std::vector<AnnotatedToken>& tokens, const AnnotationFile& annotations,
                       AlignMode mode) {
    const auto rows = annotations.rows();
    const auto map = alignment_map(surfaces_of(tokens), rows, mode);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (map[i]) {
            tokens[i].pos = rows[*map[i]].upos;
            tokens[i].dep = rows[*map[i]].deprel;
        } else {
            tokens[i].pos.clear();
            tokens[i].dep.clear();
        }
    }
}

std::vector<AnnotatedToken> align(const TokenList& tokens, const AnnotationFile& annotations,
                                  AlignMode mode) {
    auto out = make_tokens(tokens);
    apply_annotations(out, annotations, mode);
    return out;
}

std::vector<AnnotatedToken> null_annotate(const TokenList& tokens) {
    return make_tokens(tokens);
}

SegmentAnnotator directory_annotator(std::filesystem::path dir, AlignMode mode) {
    return [dir = std::move(dir), mode](const RawDocument& doc, const SegmentList& segments) {
        const auto path = dir / (doc.doc_id + ".conllu");
        if (!std::filesystem::is_regular_file(path)) {
            throw DataError("no annotation file for document " + doc.doc_id + ": " + path.string());
        }
        TokenList flat;
        for (const auto& seg : segments) {
            flat.insert(flat.end(), seg.begin(), seg.end());
        }
        const auto annotated = align(flat, load_annotations(path), mode);
        AnnotatedSegments out;
        out.reserve(segments.size());
        auto it = annotated.begin();
        for (const auto& seg : segments) {
            const auto n = static_cast<std::ptrdiff_t>(seg.size());
            out.emplace_back(it, it + n);
            it += n;
        }
        return out;
    };
}

}  // namespace subseg
