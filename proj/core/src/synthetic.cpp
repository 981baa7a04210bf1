#include "subseg/synthetic.hpp"

#include <cstdio>

#include "subseg/error.hpp"
#include "subseg/random.hpp"

namespace subseg {

namespace {

constexpr const char* kOnsets[] = {"b", "d", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};
constexpr std::size_t kSyllables = std::size(kOnsets) * std::size(kVowels);

// Distinct words for distinct (prefix, index); fillers never start with
// the 'x'/'z' prefixes used by the cue lexicons.
std::string make_word(std::string_view prefix, int index) {
    std::string word(prefix);
    auto k = static_cast<std::size_t>(index);
    do {
        const std::size_t syl = k % kSyllables;
        word += kOnsets[syl / std::size(kVowels)];
        word += kVowels[syl % std::size(kVowels)];
        k /= kSyllables;
    } while (k > 0);
    if (word.size() < 3) {
        word += "n";
    }
    return word;
}

int draw_between(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(hi - lo + 1)));
}

class DocumentWriter {
  public:
    DocumentWriter(const SyntheticConfig& config, Rng& rng) : config_(config), rng_(rng) {}

    SyntheticDocument write(const std::string& doc_id) {
        SyntheticDocument doc;
        doc.raw.doc_id = doc_id;
        const int n_segments = draw_between(rng_, config_.min_segments, config_.max_segments);
        int emitted = 0;
        while (emitted < n_segments) {
            std::string line;
            if (uniform_unit(rng_) < config_.dash_turn_probability) {
                line += "- ";
            }
            const int on_line =
                std::min(draw_between(rng_, 1, config_.max_segments_per_line), n_segments - emitted);
            for (int s = 0; s < on_line; ++s) {
                const bool last_on_line = s + 1 == on_line;
                if (s > 0) {
                    line += ' ';
                }
                if (s > 0 && uniform_unit(rng_) < config_.parenthetical_probability) {
                    line += '(';
                    append_segment(line, doc.truth, /*capitalize=*/false);
                    line += ')';
                } else {
                    append_segment(line, doc.truth, uniform_unit(rng_) < config_.capitalize_probability);
                    if (!last_on_line || uniform_unit(rng_) >= config_.unpunctuated_turn_probability) {
                        line += terminator();
                    }
                }
                ++emitted;
            }
            doc.raw.segments.push_back(std::move(line));
        }
        return doc;
    }

  private:
    std::string_view terminator() {
        static constexpr std::string_view kTerminators[] = {".", ".", ".", "?", "!", ":", " -", "...", "?!"};
        return kTerminators[uniform_index(rng_, std::size(kTerminators))];
    }

    std::string filler() {
        // Squaring the uniform draw skews the lexicon towards a few frequent words.
        const double u = uniform_unit(rng_);
        return make_word("", static_cast<int>(u * u * config_.filler_vocab_size));
    }

    void append_segment(std::string& line, SegmentList& truth, bool capitalize) {
        const bool cued = uniform_unit(rng_) < config_.cue_probability;
        const int length = draw_between(rng_, config_.min_segment_length, config_.max_segment_length);
        TokenList words;
        for (int i = 0; i < length; ++i) {
            if (cued && i == 0) {
                words.push_back(make_word("x", static_cast<int>(uniform_index(rng_, config_.cue_vocab_size))));
            } else if (cued && i + 1 == length) {
                words.push_back(make_word("z", static_cast<int>(uniform_index(rng_, config_.cue_vocab_size))));
            } else {
                std::string w = filler();
                if (uniform_unit(rng_) < config_.possessive_probability) {
                    w += "'s";
                }
                words.push_back(std::move(w));
            }
        }
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (i > 0) {
                line += ' ';
            }
            std::string surface = words[i];
            if (i == 0 && capitalize) {
                surface[0] = static_cast<char>(surface[0] - 'a' + 'A');
            }
            line += surface;
            if (i + 1 < words.size() && uniform_unit(rng_) < config_.comma_probability) {
                line += ',';
            }
        }
        truth.push_back(std::move(words));
    }

    const SyntheticConfig& config_;
    Rng& rng_;
};

}  // namespace

std::vector<SyntheticDocument> generate_synthetic_corpus(const SyntheticConfig& config,
                                                         std::uint64_t seed) {
    if (config.n_documents < 0 || config.min_segments < 1 || config.max_segments < config.min_segments ||
        config.min_segment_length < 1 || config.max_segment_length < config.min_segment_length ||
        config.filler_vocab_size < 1 || config.cue_vocab_size < 1 || config.max_segments_per_line < 1) {
        throw ConfigError("invalid synthetic corpus settings");
    }
    if (config.cue_probability > 0.0 && config.min_segment_length < 2) {
        throw ConfigError("cued segments need min_segment_length >= 2");
    }
    Rng rng(seed);
    std::vector<SyntheticDocument> docs;
    docs.reserve(static_cast<std::size_t>(config.n_documents));
    DocumentWriter writer(config, rng);
    for (int d = 0; d < config.n_documents; ++d) {
        char id[32];
        std::snprintf(id, sizeof(id), "doc%05d", d);
        docs.push_back(writer.write(id));
    }
    return docs;
}

std::vector<RawDocument> raw_documents(const std::vector<SyntheticDocument>& docs) {
    std::vector<RawDocument> out;
    out.reserve(docs.size());
    for (const auto& d : docs) {
        out.push_back(d.raw);
    }
    return out;
}

}  // namespace subseg
