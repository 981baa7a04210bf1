#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subseg/token.hpp"

namespace subseg {

struct DocumentCounts {
    std::unordered_map<std::string, std::size_t> term_frequencies;
    std::size_t length = 0;
};

/// Term statistics of a document collection, keyed by doc id in sorted order.
class Index {
  public:
    /// Throws ConfigError on an empty collection.
    static Index build(const std::map<std::string, TokenList>& docs);

    std::size_t document_count() const { return docs_.size(); }
    std::size_t collection_length() const { return collection_length_; }
    std::size_t collection_frequency(const std::string& term) const;
    std::size_t term_frequency(const std::string& doc_id, const std::string& term) const;
    std::size_t document_length(const std::string& doc_id) const;
    bool contains_document(const std::string& doc_id) const { return docs_.contains(doc_id); }
    const std::map<std::string, DocumentCounts>& documents() const { return docs_; }

  private:
    const DocumentCounts& doc(const std::string& doc_id) const;

    std::map<std::string, DocumentCounts> docs_;
    std::unordered_map<std::string, std::size_t> collection_;
    std::size_t collection_length_ = 0;
};

Index build_index(const std::map<std::string, TokenList>& docs);

inline constexpr double kDefaultMu = 2500.0;
inline constexpr double kUnseenTermFloor = 1e-10;

/// Dirichlet-smoothed query log-likelihood:
///   sum over query terms t of ln((tf(t, d) + mu * P(t | C)) / (|d| + mu)),
/// where a term absent from the collection contributes
/// ln(1e-10 / (|d| + mu)).
double score(const Index& index, const TokenList& query, const std::string& doc_id, double mu = kDefaultMu);

struct RankedDocument {
    std::string doc_id;
    double score = 0.0;
    bool retrieved = false;
};

/// All documents by descending score, ties by ascending doc id. The top
/// `cutoff` documents that contain at least one query term are retrieved.
std::vector<RankedDocument> retrieve(const Index& index, const TokenList& query, std::size_t cutoff = 20,
                                     double mu = kDefaultMu);

std::set<std::string> retrieved_set(const std::vector<RankedDocument>& ranking);

struct RelevanceSet {
    std::map<std::string, std::set<std::string>> relevant;
    std::map<std::string, TokenList> queries;
};

/// Judgment rows: query_id, doc_id, relevance (0 or 1), tab-separated.
void read_judgments(std::istream& in, RelevanceSet& into, std::string_view source = "<input>");
/// Query rows: query_id, tab, space-separated terms (lowercased on read).
void read_queries(std::istream& in, RelevanceSet& into, std::string_view source = "<input>");

/// Throws DataError if a relevant document is missing from the index.
void check_judgments(const RelevanceSet& judgments, const Index& index);

inline constexpr double kDefaultBeta = 40.0;

struct QueryValue {
    std::string query_id;
    std::size_t relevant = 0;
    std::size_t retrieved = 0;
    std::size_t hits = 0;
    double p_miss = 0.0;
    double p_false_alarm = 0.0;
    double value = 0.0;
};

struct AqwvResult {
    double aqwv = 0.0;
    std::vector<QueryValue> queries;
};

using Decisions = std::map<std::string, std::set<std::string>>;

/// Per query: 1 - P_miss - beta * P_fa, with P_fa over the N - |relevant|
/// non-relevant documents; averaged over queries with at least one relevant
/// document. Throws DataError when no query is scorable.
AqwvResult aqwv(const Decisions& decisions, const RelevanceSet& judgments, std::size_t n_docs,
                double beta = kDefaultBeta);

}  // namespace subseg
