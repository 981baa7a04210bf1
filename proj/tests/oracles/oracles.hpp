#pragma once

// Reference implementations used only by tests. None of them shares code or
// data layout with the library routine it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "subseg/clir.hpp"
#include "subseg/corpus.hpp"
#include "subseg/tagger.hpp"

namespace subseg::oracle {

/// Gap positions (1..N) that carry a boundary: label j marks the gap j + 1.
inline std::set<std::size_t> boundary_gaps(const Labels& labels) {
    std::set<std::size_t> gaps;
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] == 1) {
            gaps.insert(j + 1);
        }
    }
    return gaps;
}

inline double window_diff(const Labels& ref, const Labels& hyp, std::size_t k) {
    const auto r = boundary_gaps(ref);
    const auto h = boundary_gaps(hyp);
    const std::size_t n = ref.size();
    std::size_t errors = 0;
    for (std::size_t i = 0; i < n - k; ++i) {
        // Boundaries strictly between token i and token i + k.
        std::size_t in_ref = 0, in_hyp = 0;
        for (std::size_t gap = i + 1; gap <= i + k; ++gap) {
            in_ref += r.count(gap);
            in_hyp += h.count(gap);
        }
        if (in_ref != in_hyp) {
            ++errors;
        }
    }
    return static_cast<double>(errors) / static_cast<double>(n - k);
}

struct Prf {
    double precision, recall, f1;
};

inline Prf prf(const Labels& ref, const Labels& hyp) {
    auto r = boundary_gaps(ref);
    auto h = boundary_gaps(hyp);
    r.erase(ref.size());
    h.erase(hyp.size());
    std::vector<std::size_t> both;
    std::set_intersection(r.begin(), r.end(), h.begin(), h.end(), std::back_inserter(both));
    const double tp = static_cast<double>(both.size());
    const double p = h.empty() ? 0.0 : tp / static_cast<double>(h.size());
    const double rc = r.empty() ? 0.0 : tp / static_cast<double>(r.size());
    const double f = (p + rc) > 0.0 ? 2.0 * p * rc / (p + rc) : 0.0;
    return {p, rc, f};
}

inline double bleu(const TokenList& hyp, const TokenList& ref) {
    if (hyp.empty()) {
        return 0.0;
    }
    double log_precision_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        if (hyp.size() < n) {
            return 0.0;
        }
        const auto key = [&](const TokenList& t, std::size_t i) {
            std::string k;
            for (std::size_t j = i; j < i + n; ++j) {
                k += t[j];
                k += '\x1f';
            }
            return k;
        };
        std::unordered_map<std::string, int> hyp_counts, ref_counts;
        for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
            ++hyp_counts[key(hyp, i)];
        }
        for (std::size_t i = 0; i + n <= ref.size(); ++i) {
            ++ref_counts[key(ref, i)];
        }
        int clipped = 0;
        for (const auto& [gram, c] : hyp_counts) {
            clipped += std::min(c, ref_counts[gram]);
        }
        if (clipped == 0) {
            return 0.0;
        }
        log_precision_sum += std::log(static_cast<double>(clipped) / static_cast<double>(hyp.size() - n + 1));
    }
    const double c = static_cast<double>(hyp.size());
    const double r = static_cast<double>(ref.size());
    const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_precision_sum / 4.0);
}

inline double aqwv(const std::map<std::string, std::set<std::string>>& retrieved,
                   const std::map<std::string, std::set<std::string>>& relevant, std::size_t n_docs, double beta) {
    double sum = 0.0;
    int scored = 0;
    for (const auto& [q, rel] : relevant) {
        if (rel.empty()) {
            continue;
        }
        const auto it = retrieved.find(q);
        const std::set<std::string> ret = it == retrieved.end() ? std::set<std::string>{} : it->second;
        std::vector<std::string> missed, false_alarms;
        std::set_difference(rel.begin(), rel.end(), ret.begin(), ret.end(), std::back_inserter(missed));
        std::set_difference(ret.begin(), ret.end(), rel.begin(), rel.end(), std::back_inserter(false_alarms));
        const double p_miss = static_cast<double>(missed.size()) / static_cast<double>(rel.size());
        const double p_fa = static_cast<double>(false_alarms.size()) / static_cast<double>(n_docs - rel.size());
        sum += 1.0 - p_miss - beta * p_fa;
        ++scored;
    }
    return sum / scored;
}

/// Greedy passage sizes (in segments) from a cumulative-count formulation.
inline std::vector<std::size_t> passage_segment_counts(const std::vector<std::size_t>& seg_lengths, int n_passages) {
    const std::size_t total = std::accumulate(seg_lengths.begin(), seg_lengths.end(), std::size_t{0});
    const std::size_t wanted = std::min<std::size_t>(n_passages, seg_lengths.size());
    const double target = static_cast<double>(total) / n_passages;
    std::vector<std::size_t> counts;
    std::size_t begin = 0;
    while (counts.size() + 1 < wanted) {
        std::size_t end = begin;
        std::size_t size = 0;
        // Extend until the target is met, but leave one segment for each
        // passage still to come.
        do {
            size += seg_lengths[end++];
        } while (static_cast<double>(size) < target && seg_lengths.size() - end > wanted - counts.size() - 1);
        counts.push_back(end - begin);
        begin = end;
    }
    counts.push_back(seg_lengths.size() - begin);
    return counts;
}

/// Full-table alignment: maximum matches, preferring at each step a match,
/// then skipping the token, then skipping the annotation row.
inline std::vector<std::optional<std::size_t>> align(const TokenList& a, const TokenList& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            lcs[i][j] = a[i] == b[j] ? std::max({lcs[i + 1][j + 1] + 1, lcs[i + 1][j], lcs[i][j + 1]})
                                     : std::max(lcs[i + 1][j], lcs[i][j + 1]);
        }
    }
    std::vector<std::optional<std::size_t>> out(n);
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (a[i] == b[j] && lcs[i][j] == lcs[i + 1][j + 1] + 1) {
            out[i++] = j++;
        } else if (lcs[i][j] == lcs[i + 1][j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

/// A segment as (start, channel, payload id) for the merge oracle.
using TimedItem = std::tuple<double, int, int>;

inline std::vector<int> merge_order(std::vector<TimedItem> items) {
    std::stable_sort(items.begin(), items.end(), [](const TimedItem& x, const TimedItem& y) {
        return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
    });
    std::vector<int> ids;
    for (const auto& it : items) {
        ids.push_back(std::get<2>(it));
    }
    return ids;
}

/// Scalar BiLSTM recurrence, element by element, straight from the LSTM
/// equations; returns p(boundary) per position.
inline std::vector<double> lstm_probabilities(const TaggerParams& p, const EncodedSequence& seq) {
    const auto& d = p.dims;
    const int h = d.hidden;
    const std::size_t n = seq.size();
    const auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };

    std::vector<std::vector<double>> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        for (int c = 0; c < d.word_dim; ++c) {
            x[t].push_back(p.word_emb(seq.words[t], c));
        }
        if (d.syntactic) {
            for (int c = 0; c < d.pos_dim; ++c) {
                x[t].push_back(p.pos_emb(seq.pos[t], c));
            }
            for (int c = 0; c < d.dep_dim; ++c) {
                x[t].push_back(p.dep_emb(seq.dep[t], c));
            }
        }
    }

    const auto run = [&](const LstmParams& w, bool reverse) {
        std::vector<std::vector<double>> hs(n, std::vector<double>(h));
        std::vector<double> hp(h, 0.0), cp(h, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            const std::size_t t = reverse ? n - 1 - s : s;
            std::vector<double> hn(h), cn(h);
            for (int k = 0; k < h; ++k) {
                double a[4];
                for (int gate = 0; gate < 4; ++gate) {
                    const int row = gate * h + k;
                    double v = w.b(row);
                    for (std::size_t c = 0; c < x[t].size(); ++c) {
                        v += w.w_x(row, static_cast<Eigen::Index>(c)) * x[t][c];
                    }
                    for (int c = 0; c < h; ++c) {
                        v += w.w_h(row, c) * hp[static_cast<std::size_t>(c)];
                    }
                    a[gate] = v;
                }
                const double in = sig(a[0]), forget = sig(a[1]), cand = std::tanh(a[2]), out = sig(a[3]);
                cn[static_cast<std::size_t>(k)] = forget * cp[static_cast<std::size_t>(k)] + in * cand;
                hn[static_cast<std::size_t>(k)] = out * std::tanh(cn[static_cast<std::size_t>(k)]);
            }
            hs[t] = hn;
            hp = hn;
            cp = cn;
        }
        return hs;
    };
    const auto hf = run(p.fwd, false);
    const auto hb = run(p.bwd, true);
    std::vector<double> probs(n);
    for (std::size_t t = 0; t < n; ++t) {
        double z = p.proj_b;
        for (int k = 0; k < h; ++k) {
            z += p.proj_w(k) * hf[t][static_cast<std::size_t>(k)] + p.proj_w(h + k) * hb[t][static_cast<std::size_t>(k)];
        }
        probs[t] = sig(z);
    }
    return probs;
}

inline double log_loss(const std::vector<double>& probs, const Labels& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double q = std::min(std::max(probs[i], 1e-12), 1.0 - 1e-12);
        total += labels[i] ? -std::log(q) : -std::log(1.0 - q);
    }
    return total;
}

struct GradientCheck {
    double max_relative_error = 0.0;
    std::string worst_tensor;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
    std::size_t coordinates = 0;
};

/// Central differences of the oracle loss against the analytic gradient,
/// for every coordinate of every tensor. Relative error is
/// |a - n| / max(|a|, |n|, floor).
inline GradientCheck check_gradients(TaggerParams params, const EncodedSequence& seq, const Labels& labels,
                                     const TaggerParams& analytic, double step = 1e-5, double floor = 1e-6) {
    std::vector<std::pair<std::string, std::vector<double>>> analytic_flat;
    for_each_tensor(analytic, [&](std::string_view name, std::span<const double> t) {
        analytic_flat.emplace_back(std::string(name), std::vector<double>(t.begin(), t.end()));
    });
    GradientCheck result;
    std::size_t tensor = 0;
    for_each_tensor(params, [&](std::string_view name, std::span<double> values) {
        const auto& expected = analytic_flat[tensor++].second;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double saved = values[i];
            values[i] = saved + step;
            const double up = log_loss(lstm_probabilities(params, seq), labels);
            values[i] = saved - step;
            const double down = log_loss(lstm_probabilities(params, seq), labels);
            values[i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double scale = std::max({std::abs(numeric), std::abs(expected[i]), floor});
            const double rel = std::abs(numeric - expected[i]) / scale;
            if (rel > result.max_relative_error) {
                result.max_relative_error = rel;
                result.worst_tensor = std::string(name);
                result.worst_analytic = expected[i];
                result.worst_numeric = numeric;
            }
            ++result.coordinates;
        }
    });
    return result;
}

}  // namespace subseg::oracle
