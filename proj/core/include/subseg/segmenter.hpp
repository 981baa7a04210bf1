#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "subseg/corpus.hpp"
#include "subseg/tagger.hpp"

namespace subseg {

struct Segment {
    std::vector<AnnotatedToken> tokens;
    std::optional<double> start_time;
    std::optional<double> end_time;
    std::optional<int> channel;

    bool operator==(const Segment&) const = default;
};

struct SegmentedDocument {
    std::string doc_id;
    std::vector<Segment> segments;

    std::vector<AnnotatedToken> concatenated() const;
};

/// label_i = 1 iff probs_i >= threshold; the last label is always 1.
Labels threshold_probabilities(const Eigen::VectorXd& probs, double threshold);

/// Runs the tagger over the whole token stream in one pass.
Labels predict_boundaries(const Model& model, const std::vector<AnnotatedToken>& tokens, double threshold = 0.5);

/// Splits after every label-1 token. Segment times span the earliest token
/// start to the latest token end (start + duration) when tokens are timed.
SegmentedDocument labels_to_segments(const std::vector<AnnotatedToken>& tokens, const Labels& labels,
                                     std::string_view doc_id = {});

SegmentedDocument segment_tokens(const Model& model, const std::vector<AnnotatedToken>& tokens,
                                 double threshold = 0.5, std::string_view doc_id = {});

/// Interleaves per-channel segmentations by ascending start time, breaking
/// ties by channel id and then by original order within the channel.
/// Throws DataError if a segment has no start time.
SegmentedDocument merge_channels(const std::vector<SegmentedDocument>& channels, std::string_view doc_id = {});

/// Segments each channel as a separate document, then merges them. Every
/// token must carry a start time. A token's channel field, when present,
/// overrides the channel's position in `channels` as its id.
SegmentedDocument segment_channels(const Model& model, const std::vector<std::vector<AnnotatedToken>>& channels,
                                   double threshold = 0.5, std::string_view doc_id = {});

SegmentedDocument segment_conversation(const Model& model, const std::vector<AnnotatedToken>& channel_a,
                                       const std::vector<AnnotatedToken>& channel_b, double threshold = 0.5,
                                       std::string_view doc_id = {});

/// Time-marked tokens of one document, grouped by channel in ascending
/// channel order.
struct TimedDocument {
    std::string doc_id;
    std::vector<std::vector<AnnotatedToken>> channels;
};

/// Reads whitespace-separated rows "doc_id channel start duration word
/// [confidence]". Lines starting with ";;" are comments. Channels may be
/// integers or single letters (A = 1). Words are lowercased. Documents keep
/// the order of their first appearance.
std::vector<TimedDocument> read_ctm(std::istream& in, std::string_view source = "<input>");

/// One segment per line: doc_id, channel, start, end and the space-joined
/// tokens, tab-separated; absent values are written as "-".
void write_segments(std::ostream& out, const SegmentedDocument& doc);
std::vector<SegmentedDocument> read_segments(std::istream& in, std::string_view source = "<input>");

std::string format_time(double seconds);

}  // namespace subseg
