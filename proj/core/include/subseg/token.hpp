#pragma once

#include <optional>
#include <string>
#include <vector>

namespace subseg {

/// A surface token with optional syntactic annotation and timing.
///
/// An empty `pos` or `dep` means "unknown"; the tagger maps it to the
/// reserved UNK id of the corresponding vocabulary.
struct AnnotatedToken {
    std::string surface;
    std::string pos;
    std::string dep;
    std::optional<int> channel;
    std::optional<double> start_time;
    std::optional<double> duration;

    bool operator==(const AnnotatedToken&) const = default;
};

using TokenList = std::vector<std::string>;

inline std::vector<AnnotatedToken> make_tokens(const TokenList& surfaces) {
    std::vector<AnnotatedToken> out;
    out.reserve(surfaces.size());
    for (const auto& s : surfaces) {
        out.push_back(AnnotatedToken{.surface = s});
    }
    return out;
}

inline TokenList surfaces_of(const std::vector<AnnotatedToken>& tokens) {
    TokenList out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        out.push_back(t.surface);
    }
    return out;
}

}  // namespace subseg
