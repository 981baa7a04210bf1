#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "subseg/token.hpp"

namespace subseg {

/// Characters that terminate a segment in subtitle text.
inline constexpr std::string_view kDefaultBoundaryChars = "():-!?.";

using Labels = std::vector<std::uint8_t>;
using SegmentList = std::vector<TokenList>;
using AnnotatedSegments = std::vector<std::vector<AnnotatedToken>>;

/// One subtitle document. Each entry of `segments` is one subtitle line or
/// speaker turn as it appeared in the source file.
struct RawDocument {
    std::string doc_id;
    std::vector<std::string> segments;
};

/// A token sequence with one boundary label per token; label i is 1 when a
/// segment ends after token i.
struct Passage {
    std::string doc_id;
    int passage_index = 0;
    std::vector<AnnotatedToken> tokens;
    Labels labels;

    bool operator==(const Passage&) const = default;
};

struct CorpusSplit {
    std::vector<Passage> train;
    std::vector<Passage> valid;
    std::vector<std::string> train_doc_ids;
    std::vector<std::string> valid_doc_ids;
    std::uint64_t seed = 0;
};

struct CorpusOptions {
    std::string boundary_chars{kDefaultBoundaryChars};
    int n_passages = 20;
    double train_ratio = 0.75;
    std::uint64_t seed = 0;
};

/// Tokenizes one document into boundary-delimited segments: punctuation is
/// stripped, tokens are lowercased, line ends (speaker turns) and boundary
/// characters close the current segment, and empty segments are dropped.
SegmentList extract_segments(const RawDocument& doc,
                             std::string_view boundary_chars = kDefaultBoundaryChars);

/// Concatenates segments and labels each segment's last token with 1.
/// Throws ConfigError on an empty segment list or an empty segment.
Passage label_passage(const AnnotatedSegments& segments);
Passage label_passage(const SegmentList& segments);

/// Inverse of label_passage: splits after every label-1 token. A trailing
/// run without a closing label forms a final segment.
AnnotatedSegments split_at_labels(const std::vector<AnnotatedToken>& tokens, const Labels& labels);

/// Greedy in-order partition into min(n_passages, #segments) passages of
/// roughly total/n_passages tokens; segments are never split.
std::vector<Passage> split_passages(const AnnotatedSegments& doc_segments, int n_passages = 20,
                                    std::string_view doc_id = {});

/// Number of training documents for a given ratio; always in [1, n_docs - 1].
std::size_t train_document_count(std::size_t n_docs, double ratio);

/// Turns a document's extracted segments into annotated segments.
using SegmentAnnotator =
    std::function<AnnotatedSegments(const RawDocument&, const SegmentList&)>;

AnnotatedSegments plain_annotator(const RawDocument& doc, const SegmentList& segments);

/// Shuffles documents under the seed, assigns the first
/// round(ratio * N) to training, and splits each into passages.
CorpusSplit split_train_valid(const std::vector<RawDocument>& docs, const CorpusOptions& options,
                              const SegmentAnnotator& annotate = plain_annotator);

}  // namespace subseg
