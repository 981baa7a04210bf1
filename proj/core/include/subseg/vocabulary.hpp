#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subseg/corpus.hpp"

namespace subseg {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

/// String-to-id map with PAD and UNK reserved at ids 0 and 1.
class StringIndex {
  public:
    StringIndex();

    /// Id of `token`, or kUnkId when absent. Empty strings are unknown.
    int id(std::string_view token) const;
    const std::string& token(int id) const;
    int size() const { return static_cast<int>(tokens_.size()); }
    bool contains(std::string_view token) const;

    /// Adds `token` if absent and returns its id.
    int add(std::string_view token);

    const std::vector<std::string>& tokens() const { return tokens_; }

    /// Rebuilds an index from a token table; the first two entries must be
    /// the reserved PAD and UNK tokens.
    static StringIndex from_tokens(std::vector<std::string> tokens);

    bool operator==(const StringIndex& other) const { return tokens_ == other.tokens_; }

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> ids_;
};

struct Vocabulary {
    StringIndex words;
    StringIndex pos;
    StringIndex dep;

    bool operator==(const Vocabulary&) const = default;
};

/// Words occurring at least `min_freq` times get ids ordered by descending
/// frequency, then lexicographically; POS and dependency labels use a
/// threshold of 1. Throws ConfigError on an empty training set.
Vocabulary build_vocab(const std::vector<Passage>& train, int min_freq = 2);

}  // namespace subseg
