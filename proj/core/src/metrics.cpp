#include "subseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "subseg/error.hpp"

namespace subseg {

BoundaryCounts& BoundaryCounts::operator+=(const BoundaryCounts& other) {
    true_positives += other.true_positives;
    false_positives += other.false_positives;
    false_negatives += other.false_negatives;
    return *this;
}

namespace {

void require_same_length(const Labels& ref, const Labels& hyp, std::string_view what) {
    if (ref.size() != hyp.size()) {
        throw DataError(std::string(what) + ": reference has " + std::to_string(ref.size()) +
                        " labels but hypothesis has " + std::to_string(hyp.size()));
    }
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

BoundaryCounts count_boundaries(const Labels& ref, const Labels& hyp) {
    require_same_length(ref, hyp, "boundary_prf");
    BoundaryCounts c;
    for (std::size_t i = 0; i + 1 < ref.size(); ++i) {
        const bool r = ref[i] != 0;
        const bool h = hyp[i] != 0;
        c.true_positives += (r && h) ? 1 : 0;
        c.false_positives += (!r && h) ? 1 : 0;
        c.false_negatives += (r && !h) ? 1 : 0;
    }
    return c;
}

PrfScore prf_from_counts(const BoundaryCounts& c) {
    PrfScore s;
    s.precision = ratio(c.true_positives, c.true_positives + c.false_positives);
    s.recall = ratio(c.true_positives, c.true_positives + c.false_negatives);
    s.f1 = (s.precision + s.recall) == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

PrfScore boundary_prf(const Labels& ref, const Labels& hyp) {
    return prf_from_counts(count_boundaries(ref, hyp));
}

int default_window(const Labels& ref) {
    const auto segments = std::max<std::ptrdiff_t>(1, std::count_if(ref.begin(), ref.end(), [](auto v) { return v != 0; }));
    const double half_mean = static_cast<double>(ref.size()) / (2.0 * static_cast<double>(segments));
    return std::max(2, static_cast<int>(std::lround(half_mean)));
}

double window_diff(const Labels& ref, const Labels& hyp, std::optional<int> k) {
    require_same_length(ref, hyp, "window_diff");
    const auto n = static_cast<std::ptrdiff_t>(ref.size());
    const std::ptrdiff_t window = k.value_or(default_window(ref));
    if (window < 1 || window >= n) {
        throw ConfigError("window_diff: window " + std::to_string(window) + " must lie in [1, " +
                          std::to_string(n) + ")");
    }
    // Running boundary counts over labels [i, i + window).
    std::ptrdiff_t ref_count = 0, hyp_count = 0;
    for (std::ptrdiff_t j = 0; j < window; ++j) {
        ref_count += ref[static_cast<std::size_t>(j)] != 0;
        hyp_count += hyp[static_cast<std::size_t>(j)] != 0;
    }
    std::size_t disagreements = 0;
    for (std::ptrdiff_t i = 0; i + window < n; ++i) {
        disagreements += ref_count != hyp_count ? 1 : 0;
        const auto out = static_cast<std::size_t>(i);
        const auto in = static_cast<std::size_t>(i + window);
        ref_count += (ref[in] != 0) - (ref[out] != 0);
        hyp_count += (hyp[in] != 0) - (hyp[out] != 0);
    }
    return static_cast<double>(disagreements) / static_cast<double>(n - window);
}

IntrinsicReport intrinsic_report(const Labels& ref, const Labels& hyp) {
    IntrinsicReport report;
    report.counts = count_boundaries(ref, hyp);
    const PrfScore prf = prf_from_counts(report.counts);
    report.precision = prf.precision;
    report.recall = prf.recall;
    report.f1 = prf.f1;
    report.tokens = ref.size();
    report.k = default_window(ref);
    if (report.k < static_cast<int>(ref.size())) {
        report.window_diff = window_diff(ref, hyp, report.k);
    }
    return report;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
    for (int n = 0; n < kBleuOrder; ++n) {
        matches[static_cast<std::size_t>(n)] += other.matches[static_cast<std::size_t>(n)];
        totals[static_cast<std::size_t>(n)] += other.totals[static_cast<std::size_t>(n)];
    }
    hyp_length += other.hyp_length;
    ref_length += other.ref_length;
    return *this;
}

namespace {

std::map<std::vector<std::string>, std::size_t> ngram_counts(const TokenList& tokens, std::size_t order) {
    std::map<std::vector<std::string>, std::size_t> counts;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
        ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                          tokens.begin() + static_cast<std::ptrdiff_t>(i + order))];
    }
    return counts;
}

}  // namespace

BleuStats bleu_stats(const TokenList& hyp, const TokenList& ref) {
    BleuStats stats;
    stats.hyp_length = hyp.size();
    stats.ref_length = ref.size();
    for (std::size_t order = 1; order <= kBleuOrder; ++order) {
        const auto hyp_counts = ngram_counts(hyp, order);
        const auto ref_counts = ngram_counts(ref, order);
        std::size_t matched = 0;
        for (const auto& [gram, count] : hyp_counts) {
            const auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) {
                matched += std::min(count, it->second);
            }
        }
        stats.matches[order - 1] = matched;
        stats.totals[order - 1] = hyp.size() >= order ? hyp.size() - order + 1 : 0;
    }
    return stats;
}

BleuScore bleu_from_stats(const BleuStats& stats) {
    BleuScore score;
    score.hyp_length = stats.hyp_length;
    score.ref_length = stats.ref_length;
    if (stats.hyp_length == 0) {
        score.empty_hypothesis = true;
        return score;
    }
    double log_sum = 0.0;
    bool any_zero = false;
    for (std::size_t n = 0; n < kBleuOrder; ++n) {
        score.precisions[n] = ratio(stats.matches[n], stats.totals[n]);
        if (score.precisions[n] == 0.0) {
            any_zero = true;
        } else {
            log_sum += std::log(score.precisions[n]);
        }
    }
    score.brevity_penalty =
        std::min(1.0, std::exp(1.0 - static_cast<double>(stats.ref_length) / static_cast<double>(stats.hyp_length)));
    score.bleu = any_zero ? 0.0 : score.brevity_penalty * std::exp(log_sum / kBleuOrder);
    return score;
}

TokenList concatenate(const SegmentList& segments) {
    TokenList out;
    for (const auto& s : segments) {
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

BleuScore doc_bleu(const SegmentList& hyp_doc, const SegmentList& ref_doc) {
    return bleu_from_stats(bleu_stats(concatenate(hyp_doc), concatenate(ref_doc)));
}

}  // namespace subseg
