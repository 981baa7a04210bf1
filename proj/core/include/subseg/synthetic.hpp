#pragma once

#include <cstdint>
#include <vector>

#include "subseg/corpus.hpp"

namespace subseg {

/// Settings for the synthetic subtitle generator.
///
/// Segments are built from a filler lexicon. With probability
/// `cue_probability` a segment starts with an opener word and ends with a
/// closer word; both come from small lexicons disjoint from the fillers, so
/// boundaries are predictable from the surrounding words.
struct SyntheticConfig {
    int n_documents = 10;
    int min_segments = 30;
    int max_segments = 50;
    int min_segment_length = 3;
    int max_segment_length = 10;
    int filler_vocab_size = 300;
    int cue_vocab_size = 8;
    double cue_probability = 1.0;
    int max_segments_per_line = 3;
    double unpunctuated_turn_probability = 0.2;
    double parenthetical_probability = 0.05;
    double dash_turn_probability = 0.2;
    double comma_probability = 0.1;
    double possessive_probability = 0.05;
    double capitalize_probability = 0.7;
};

struct SyntheticDocument {
    RawDocument raw;
    /// The segments extract_segments must recover from `raw`.
    SegmentList truth;
};

std::vector<SyntheticDocument> generate_synthetic_corpus(const SyntheticConfig& config,
                                                         std::uint64_t seed);

std::vector<RawDocument> raw_documents(const std::vector<SyntheticDocument>& docs);

}  // namespace subseg
