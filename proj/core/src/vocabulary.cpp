#include "subseg/vocabulary.hpp"

#include <algorithm>

#include "subseg/error.hpp"

namespace subseg {

StringIndex::StringIndex() {
    add(kPadToken);
    add(kUnkToken);
}

int StringIndex::id(std::string_view token) const {
    const auto it = ids_.find(std::string(token));
    return it == ids_.end() ? kUnkId : it->second;
}

const std::string& StringIndex::token(int id) const {
    if (id < 0 || id >= size()) {
        throw DataError("vocabulary id " + std::to_string(id) + " out of range");
    }
    return tokens_[static_cast<std::size_t>(id)];
}

bool StringIndex::contains(std::string_view token) const {
    return ids_.contains(std::string(token));
}

int StringIndex::add(std::string_view token) {
    const auto [it, inserted] = ids_.try_emplace(std::string(token), size());
    if (inserted) {
        tokens_.emplace_back(token);
    }
    return it->second;
}

StringIndex StringIndex::from_tokens(std::vector<std::string> tokens) {
    if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnkToken) {
        throw DataError("vocabulary table must start with the reserved <pad> and <unk> entries");
    }
    StringIndex index;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (index.contains(tokens[i])) {
            throw DataError("duplicate vocabulary entry '" + tokens[i] + "'");
        }
        index.add(tokens[i]);
    }
    return index;
}

namespace {

StringIndex index_by_frequency(const std::unordered_map<std::string, int>& counts, int min_freq) {
    std::vector<std::pair<std::string, int>> entries(counts.begin(), counts.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    StringIndex index;
    for (const auto& [token, count] : entries) {
        if (count >= min_freq) {
            index.add(token);
        }
    }
    return index;
}

}  // namespace

Vocabulary build_vocab(const std::vector<Passage>& train, int min_freq) {
    if (train.empty()) {
        throw ConfigError("build_vocab: empty training set");
    }
    std::unordered_map<std::string, int> words, pos, dep;
    for (const auto& passage : train) {
        for (const auto& tok : passage.tokens) {
            ++words[tok.surface];
            if (!tok.pos.empty()) {
                ++pos[tok.pos];
            }
            if (!tok.dep.empty()) {
                ++dep[tok.dep];
            }
        }
    }
    // Reserved spellings never become ordinary entries.
    for (auto* counts : {&words, &pos, &dep}) {
        counts->erase(std::string(kPadToken));
        counts->erase(std::string(kUnkToken));
    }
    return Vocabulary{index_by_frequency(words, min_freq), index_by_frequency(pos, 1),
                      index_by_frequency(dep, 1)};
}

}  // namespace subseg
