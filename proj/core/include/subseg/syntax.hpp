#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subseg/corpus.hpp"
#include "subseg/token.hpp"

namespace subseg {

/// One token row of a ten-column dependency treebank file.
struct AnnotationRow {
    std::string form;
    std::string upos;
    std::string deprel;

    bool operator==(const AnnotationRow&) const = default;
};

struct AnnotationFile {
    std::vector<std::vector<AnnotationRow>> sentences;

    std::vector<AnnotationRow> rows() const;
    std::size_t token_count() const;
};

/// Parses tab-separated treebank rows (form, upos and deprel from columns
/// 2, 4 and 8). Comment lines, multiword ranges and empty nodes are skipped;
/// blank lines end sentences. Throws DataError naming the offending line.
AnnotationFile parse_annotations(std::istream& in, std::string_view source = "<input>");
AnnotationFile load_annotations(const std::filesystem::path& path);

enum class AlignMode { strict, lenient };

/// For each token, the index of the annotation row aligned to it.
///
/// Strict mode requires the lowercased forms to equal the tokens position by
/// position. Lenient mode computes a maximum-match alignment, preferring at
/// each step a match, then leaving the token unannotated, then dropping the
/// annotation row.
std::vector<std::optional<std::size_t>> alignment_map(const TokenList& tokens,
                                                      const std::vector<AnnotationRow>& rows,
                                                      AlignMode mode);

std::vector<AnnotatedToken> align(const TokenList& tokens, const AnnotationFile& annotations,
                                  AlignMode mode);

/// Fills pos/dep of `tokens` in place; unaligned tokens become unknown.
void apply_annotations(std::vector<AnnotatedToken>& tokens, const AnnotationFile& annotations,
                       AlignMode mode);

std::vector<AnnotatedToken> null_annotate(const TokenList& tokens);

/// Annotates each document from `<dir>/<doc_id>.conllu`, aligning the
/// document's whole token stream at once. A missing file is a DataError.
SegmentAnnotator directory_annotator(std::filesystem::path dir, AlignMode mode);

}  // namespace subseg
