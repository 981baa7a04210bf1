#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "subseg/corpus.hpp"

namespace subseg {

struct BoundaryCounts {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;

    BoundaryCounts& operator+=(const BoundaryCounts& other);
};

struct PrfScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Counts boundary agreement, skipping the final position (a forced
/// boundary in both sequences). Throws DataError on length mismatch.
BoundaryCounts count_boundaries(const Labels& ref, const Labels& hyp);
PrfScore prf_from_counts(const BoundaryCounts& counts);
PrfScore boundary_prf(const Labels& ref, const Labels& hyp);

/// max(2, round(N / (2 * reference segments))).
int default_window(const Labels& ref);

/// Fraction of the N - k windows [i, i + k) whose reference and hypothesis
/// boundary counts differ. Throws DataError on length mismatch and
/// ConfigError unless 1 <= k < N.
double window_diff(const Labels& ref, const Labels& hyp, std::optional<int> k = std::nullopt);

struct IntrinsicReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// Absent when the sequence is too short for the default window.
    std::optional<double> window_diff;
    int k = 0;
    std::size_t tokens = 0;
    BoundaryCounts counts;
};

IntrinsicReport intrinsic_report(const Labels& ref, const Labels& hyp);

inline constexpr int kBleuOrder = 4;

/// Sufficient statistics for BLEU-4; sums across documents give
/// corpus-level pooling.
struct BleuStats {
    std::array<std::size_t, kBleuOrder> matches{};
    std::array<std::size_t, kBleuOrder> totals{};
    std::size_t hyp_length = 0;
    std::size_t ref_length = 0;

    BleuStats& operator+=(const BleuStats& other);
};

struct BleuScore {
    double bleu = 0.0;
    double brevity_penalty = 0.0;
    std::array<double, kBleuOrder> precisions{};
    std::size_t hyp_length = 0;
    std::size_t ref_length = 0;
    /// Set when the hypothesis is empty; the score is then 0.
    bool empty_hypothesis = false;
};

BleuStats bleu_stats(const TokenList& hyp, const TokenList& ref);

/// BP * exp(mean log p_n) with clipped n-gram precisions and no smoothing;
/// any zero precision gives 0.
BleuScore bleu_from_stats(const BleuStats& stats);

TokenList concatenate(const SegmentList& segments);

/// Document-level BLEU: both sides are concatenated into a single segment
/// before scoring, so the result does not depend on segmentation.
BleuScore doc_bleu(const SegmentList& hyp_doc, const SegmentList& ref_doc);

}  // namespace subseg
