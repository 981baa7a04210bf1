#include "subseg/segmenter.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "subseg/error.hpp"
#include "subseg/text.hpp"

namespace subseg {

std::vector<AnnotatedToken> SegmentedDocument::concatenated() const {
    std::vector<AnnotatedToken> out;
    for (const auto& s : segments) {
        out.insert(out.end(), s.tokens.begin(), s.tokens.end());
    }
    return out;
}

Labels threshold_probabilities(const Eigen::VectorXd& probs, double threshold) {
    Labels labels(static_cast<std::size_t>(probs.size()));
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        labels[static_cast<std::size_t>(i)] = probs(i) >= threshold ? 1 : 0;
    }
    if (!labels.empty()) {
        labels.back() = 1;
    }
    return labels;
}

Labels predict_boundaries(const Model& model, const std::vector<AnnotatedToken>& tokens, double threshold) {
    if (tokens.empty()) {
        return {};
    }
    return threshold_probabilities(forward(model.params, encode(model.vocab, tokens)).probs, threshold);
}

SegmentedDocument labels_to_segments(const std::vector<AnnotatedToken>& tokens, const Labels& labels,
                                     std::string_view doc_id) {
    SegmentedDocument doc;
    doc.doc_id = std::string(doc_id);
    for (auto& toks : split_at_labels(tokens, labels)) {
        Segment seg;
        for (const auto& tok : toks) {
            if (tok.start_time) {
                const double end = *tok.start_time + tok.duration.value_or(0.0);
                seg.start_time = seg.start_time ? std::min(*seg.start_time, *tok.start_time) : *tok.start_time;
                seg.end_time = seg.end_time ? std::max(*seg.end_time, end) : end;
            }
            if (!seg.channel && tok.channel) {
                seg.channel = tok.channel;
            }
        }
        seg.tokens = std::move(toks);
        doc.segments.push_back(std::move(seg));
    }
    return doc;
}

SegmentedDocument segment_tokens(const Model& model, const std::vector<AnnotatedToken>& tokens, double threshold,
                                 std::string_view doc_id) {
    return labels_to_segments(tokens, predict_boundaries(model, tokens, threshold), doc_id);
}

SegmentedDocument merge_channels(const std::vector<SegmentedDocument>& channels, std::string_view doc_id) {
    struct Entry {
        double start;
        int channel;
        std::size_t order;
        const Segment* segment;
    };
    std::vector<Entry> entries;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto& segments = channels[c].segments;
        for (std::size_t s = 0; s < segments.size(); ++s) {
            const Segment& seg = segments[s];
            if (!seg.start_time) {
                throw DataError("merge_channels: segment without a start time in channel " + std::to_string(c));
            }
            entries.push_back(Entry{*seg.start_time, seg.channel.value_or(static_cast<int>(c)), s, &seg});
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.start != b.start) {
            return a.start < b.start;
        }
        if (a.channel != b.channel) {
            return a.channel < b.channel;
        }
        return a.order < b.order;
    });
    SegmentedDocument merged;
    merged.doc_id = std::string(doc_id);
    for (const auto& e : entries) {
        merged.segments.push_back(*e.segment);
        merged.segments.back().channel = e.channel;
    }
    return merged;
}

SegmentedDocument segment_channels(const Model& model, const std::vector<std::vector<AnnotatedToken>>& channels,
                                   double threshold, std::string_view doc_id) {
    std::vector<SegmentedDocument> per_channel;
    per_channel.reserve(channels.size());
    for (std::size_t c = 0; c < channels.size(); ++c) {
        std::vector<AnnotatedToken> tokens = channels[c];
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!tokens[i].start_time) {
                throw DataError("segment_channels: token " + std::to_string(i) + " of channel " + std::to_string(c) +
                                " has no start time");
            }
            if (!tokens[i].channel) {
                tokens[i].channel = static_cast<int>(c);
            }
        }
        per_channel.push_back(segment_tokens(model, tokens, threshold, doc_id));
    }
    return merge_channels(per_channel, doc_id);
}

SegmentedDocument segment_conversation(const Model& model, const std::vector<AnnotatedToken>& channel_a,
                                       const std::vector<AnnotatedToken>& channel_b, double threshold,
                                       std::string_view doc_id) {
    return segment_channels(model, {channel_a, channel_b}, threshold, doc_id);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    if (sep == '\t') {
        std::size_t start = 0;
        while (true) {
            const auto pos = line.find('\t', start);
            out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
            if (pos == std::string_view::npos) {
                return out;
            }
            start = pos + 1;
        }
    }
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') {
            ++pos;
        }
        if (pos > start) {
            out.push_back(line.substr(start, pos - start));
        }
    }
    return out;
}

double parse_double(std::string_view field, const std::string& where) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw DataError(where + ": invalid number '" + std::string(field) + "'");
    }
    return value;
}

int parse_channel(std::string_view field, const std::string& where) {
    if (field.size() == 1 && field[0] >= 'A' && field[0] <= 'Z') {
        return field[0] - 'A' + 1;
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw DataError(where + ": invalid channel '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

std::vector<TimedDocument> read_ctm(std::istream& in, std::string_view source) {
    std::vector<std::string> order;
    std::map<std::string, std::map<int, std::vector<AnnotatedToken>>> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.starts_with(";;") || line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const std::string where = std::string(source) + ":" + std::to_string(line_no);
        const auto fields = split_fields(line, ' ');
        if (fields.size() < 5 || fields.size() > 6) {
            throw DataError(where + ": expected 5 or 6 fields, found " + std::to_string(fields.size()));
        }
        AnnotatedToken tok;
        tok.channel = parse_channel(fields[1], where);
        tok.start_time = parse_double(fields[2], where);
        tok.duration = parse_double(fields[3], where);
        if (*tok.duration < 0.0) {
            throw DataError(where + ": negative duration");
        }
        tok.surface = text::to_lower(fields[4]);
        const std::string doc_id(fields[0]);
        if (!docs.contains(doc_id)) {
            order.push_back(doc_id);
        }
        docs[doc_id][*tok.channel].push_back(std::move(tok));
    }
    std::vector<TimedDocument> out;
    out.reserve(order.size());
    for (const auto& id : order) {
        TimedDocument doc{id, {}};
        for (auto& [channel, tokens] : docs[id]) {
            doc.channels.push_back(std::move(tokens));
        }
        out.push_back(std::move(doc));
    }
    return out;
}

std::string format_time(double seconds) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), seconds);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

void write_segments(std::ostream& out, const SegmentedDocument& doc) {
    for (const auto& seg : doc.segments) {
        out << doc.doc_id << '\t' << (seg.channel ? std::to_string(*seg.channel) : "-") << '\t'
            << (seg.start_time ? format_time(*seg.start_time) : "-") << '\t'
            << (seg.end_time ? format_time(*seg.end_time) : "-") << '\t';
        for (std::size_t i = 0; i < seg.tokens.size(); ++i) {
            if (i > 0) {
                out << ' ';
            }
            out << seg.tokens[i].surface;
        }
        out << '\n';
    }
}

std::vector<SegmentedDocument> read_segments(std::istream& in, std::string_view source) {
    std::vector<SegmentedDocument> docs;
    std::map<std::string, std::size_t> index;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::string where = std::string(source) + ":" + std::to_string(line_no);
        const auto fields = split_fields(line, '\t');
        if (fields.size() != 5) {
            throw DataError(where + ": expected 5 tab-separated fields, found " + std::to_string(fields.size()));
        }
        Segment seg;
        if (fields[1] != "-") {
            seg.channel = parse_channel(fields[1], where);
        }
        if (fields[2] != "-") {
            seg.start_time = parse_double(fields[2], where);
        }
        if (fields[3] != "-") {
            seg.end_time = parse_double(fields[3], where);
        }
        for (auto word : split_fields(fields[4], ' ')) {
            seg.tokens.push_back(AnnotatedToken{.surface = std::string(word), .channel = seg.channel});
        }
        if (seg.tokens.empty()) {
            throw DataError(where + ": empty segment");
        }
        const std::string doc_id(fields[0]);
        auto [it, inserted] = index.try_emplace(doc_id, docs.size());
        if (inserted) {
            docs.push_back(SegmentedDocument{doc_id, {}});
        }
        docs[it->second].segments.push_back(std::move(seg));
    }
    return docs;
}

}  // namespace subseg
