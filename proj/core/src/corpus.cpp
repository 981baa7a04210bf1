#include "subseg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "subseg/error.hpp"
#include "subseg/random.hpp"
#include "subseg/text.hpp"

namespace subseg {

namespace {

std::unordered_set<char32_t> decode_set(std::string_view chars) {
    std::unordered_set<char32_t> out;
    std::size_t pos = 0;
    while (pos < chars.size()) {
        out.insert(text::next_code_point(chars, pos));
    }
    return out;
}

class SegmentAccumulator {
  public:
    explicit SegmentAccumulator(SegmentList& out) : out_(out) {}

    void push_char(char32_t cp) { text::append_utf8(token_, cp); }

    void end_token() {
        // Quotes written with apostrophes never belong to the word itself.
        std::size_t begin = 0;
        std::size_t end = token_.size();
        while (begin < end && token_[begin] == '\'') {
            ++begin;
        }
        while (end > begin && token_[end - 1] == '\'') {
            --end;
        }
        if (end > begin) {
            segment_.push_back(token_.substr(begin, end - begin));
        }
        token_.clear();
    }

    void end_segment() {
        end_token();
        if (!segment_.empty()) {
            out_.push_back(std::move(segment_));
            segment_.clear();
        }
    }

  private:
    SegmentList& out_;
    std::string token_;
    TokenList segment_;
};

}  // namespace

SegmentList extract_segments(const RawDocument& doc, std::string_view boundary_chars) {
    const auto boundaries = decode_set(boundary_chars);
    SegmentList out;
    SegmentAccumulator acc(out);
    for (const auto& line : doc.segments) {
        const std::string lowered = text::to_lower(line);
        std::size_t pos = 0;
        while (pos < lowered.size()) {
            const char32_t cp = text::next_code_point(lowered, pos);
            if (boundaries.contains(cp) || cp == U'\n' || cp == U'\r') {
                acc.end_segment();
            } else if (text::is_space(cp)) {
                acc.end_token();
            } else if (text::is_apostrophe(cp)) {
                acc.push_char(U'\'');
            } else if (!text::is_punctuation(cp)) {
                acc.push_char(cp);
            }
        }
        acc.end_segment();
    }
    return out;
}

Passage label_passage(const AnnotatedSegments& segments) {
    if (segments.empty()) {
        throw ConfigError("label_passage: no segments");
    }
    Passage passage;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (segments[s].empty()) {
            throw ConfigError("label_passage: segment " + std::to_string(s) + " is empty");
        }
        for (std::size_t i = 0; i < segments[s].size(); ++i) {
            passage.tokens.push_back(segments[s][i]);
            passage.labels.push_back(i + 1 == segments[s].size() ? 1 : 0);
        }
    }
    return passage;
}

Passage label_passage(const SegmentList& segments) {
    AnnotatedSegments annotated;
    annotated.reserve(segments.size());
    for (const auto& seg : segments) {
        annotated.push_back(make_tokens(seg));
    }
    return label_passage(annotated);
}

AnnotatedSegments split_at_labels(const std::vector<AnnotatedToken>& tokens, const Labels& labels) {
    if (tokens.size() != labels.size()) {
        throw DataError("split_at_labels: " + std::to_string(tokens.size()) + " tokens but " +
                        std::to_string(labels.size()) + " labels");
    }
    AnnotatedSegments out;
    std::vector<AnnotatedToken> current;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        current.push_back(tokens[i]);
        if (labels[i] != 0) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        out.push_back(std::move(current));
    }
    return out;
}

std::vector<Passage> split_passages(const AnnotatedSegments& doc_segments, int n_passages,
                                    std::string_view doc_id) {
    if (n_passages < 1) {
        throw ConfigError("split_passages: n_passages must be >= 1");
    }
    if (doc_segments.empty()) {
        throw ConfigError("split_passages: document has no segments");
    }
    const std::size_t total = std::accumulate(
        doc_segments.begin(), doc_segments.end(), std::size_t{0},
        [](std::size_t acc, const auto& seg) { return acc + seg.size(); });
    const double target = static_cast<double>(total) / n_passages;
    const std::size_t n_out = std::min<std::size_t>(n_passages, doc_segments.size());

    std::vector<Passage> passages;
    passages.reserve(n_out);
    AnnotatedSegments current;
    std::size_t current_tokens = 0;
    for (std::size_t s = 0; s < doc_segments.size(); ++s) {
        current.push_back(doc_segments[s]);
        current_tokens += doc_segments[s].size();
        const std::size_t passages_after_current = n_out - passages.size() - 1;
        if (passages_after_current == 0) {
            continue;  // the last passage takes everything that remains
        }
        const std::size_t segments_left = doc_segments.size() - s - 1;
        if (static_cast<double>(current_tokens) >= target || segments_left == passages_after_current) {
            passages.push_back(label_passage(current));
            current.clear();
            current_tokens = 0;
        }
    }
    if (!current.empty()) {
        passages.push_back(label_passage(current));
    }
    for (std::size_t p = 0; p < passages.size(); ++p) {
        passages[p].doc_id = std::string(doc_id);
        passages[p].passage_index = static_cast<int>(p);
    }
    return passages;
}

std::size_t train_document_count(std::size_t n_docs, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ConfigError("train ratio must lie in (0, 1)");
    }
    if (n_docs < 2) {
        throw ConfigError("a train/valid split needs at least 2 documents");
    }
    const auto rounded = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n_docs)));
    return std::clamp<std::size_t>(rounded, 1, n_docs - 1);
}

AnnotatedSegments plain_annotator(const RawDocument&, const SegmentList& segments) {
    AnnotatedSegments out;
    out.reserve(segments.size());
    for (const auto& seg : segments) {
        out.push_back(make_tokens(seg));
    }
    return out;
}

CorpusSplit split_train_valid(const std::vector<RawDocument>& docs, const CorpusOptions& options,
                              const SegmentAnnotator& annotate) {
    const std::size_t n_train = train_document_count(docs.size(), options.train_ratio);

    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(options.seed);
    shuffle_in_place(std::span(order), rng);

    CorpusSplit split;
    split.seed = options.seed;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const RawDocument& doc = docs[order[rank]];
        const bool is_train = rank < n_train;
        (is_train ? split.train_doc_ids : split.valid_doc_ids).push_back(doc.doc_id);

        const SegmentList segments = extract_segments(doc, options.boundary_chars);
        if (segments.empty()) {
            continue;
        }
        auto passages = split_passages(annotate(doc, segments), options.n_passages, doc.doc_id);
        auto& target = is_train ? split.train : split.valid;
        std::move(passages.begin(), passages.end(), std::back_inserter(target));
    }
    return split;
}

}  // namespace subseg
