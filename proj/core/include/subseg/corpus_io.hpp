#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "subseg/corpus.hpp"

namespace subseg {

/// Passage records are stored one JSON object per line with the fields
/// doc_id, passage_index, tokens, labels and, when annotated, pos and dep.
std::string passage_to_json_line(const Passage& passage);
Passage passage_from_json_line(std::string_view line, std::string_view source = "<input>",
                               std::size_t line_no = 0);

void write_passages(std::ostream& out, const std::vector<Passage>& passages);
std::vector<Passage> read_passages(std::istream& in, std::string_view source = "<input>");
void write_passages_file(const std::filesystem::path& path, const std::vector<Passage>& passages);
std::vector<Passage> read_passages_file(const std::filesystem::path& path);

/// Reads every regular, non-hidden file in `dir` as one document (one
/// subtitle line per text line), sorted by file name; the stem is the doc id.
std::vector<RawDocument> read_document_dir(const std::filesystem::path& dir);
RawDocument read_document_file(const std::filesystem::path& path);
void write_document_dir(const std::filesystem::path& dir, const std::vector<RawDocument>& docs);

struct SplitStats {
    std::size_t documents = 0;
    std::size_t passages = 0;
    std::size_t segments = 0;
    std::size_t tokens = 0;
};

SplitStats compute_stats(const std::vector<Passage>& passages, std::size_t documents);

/// Tab-separated table: split, documents, passages, segments, tokens.
std::string format_stats_table(const SplitStats& train, const SplitStats& valid);

}  // namespace subseg
