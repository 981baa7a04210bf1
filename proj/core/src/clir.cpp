#include "subseg/clir.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "subseg/error.hpp"
#include "subseg/text.hpp"

namespace subseg {

Index Index::build(const std::map<std::string, TokenList>& docs) {
    if (docs.empty()) {
        throw ConfigError("build_index: empty collection");
    }
    Index index;
    for (const auto& [doc_id, tokens] : docs) {
        DocumentCounts& counts = index.docs_[doc_id];
        for (const auto& t : tokens) {
            ++counts.term_frequencies[t];
            ++index.collection_[t];
        }
        counts.length = tokens.size();
        index.collection_length_ += tokens.size();
    }
    return index;
}

Index build_index(const std::map<std::string, TokenList>& docs) {
    return Index::build(docs);
}

const DocumentCounts& Index::doc(const std::string& doc_id) const {
    const auto it = docs_.find(doc_id);
    if (it == docs_.end()) {
        throw DataError("unknown document '" + doc_id + "'");
    }
    return it->second;
}

std::size_t Index::collection_frequency(const std::string& term) const {
    const auto it = collection_.find(term);
    return it == collection_.end() ? 0 : it->second;
}

std::size_t Index::term_frequency(const std::string& doc_id, const std::string& term) const {
    const auto& tf = doc(doc_id).term_frequencies;
    const auto it = tf.find(term);
    return it == tf.end() ? 0 : it->second;
}

std::size_t Index::document_length(const std::string& doc_id) const {
    return doc(doc_id).length;
}

double score(const Index& index, const TokenList& query, const std::string& doc_id, double mu) {
    if (!(mu > 0.0)) {
        throw ConfigError("Dirichlet mu must be positive");
    }
    const double denominator = static_cast<double>(index.document_length(doc_id)) + mu;
    const double collection_length = static_cast<double>(index.collection_length());
    double total = 0.0;
    for (const auto& term : query) {
        const std::size_t cf = index.collection_frequency(term);
        if (cf == 0 || collection_length == 0.0) {
            total += std::log(kUnseenTermFloor / denominator);
            continue;
        }
        const double background = static_cast<double>(cf) / collection_length;
        total += std::log((static_cast<double>(index.term_frequency(doc_id, term)) + mu * background) / denominator);
    }
    return total;
}

std::vector<RankedDocument> retrieve(const Index& index, const TokenList& query, std::size_t cutoff, double mu) {
    std::vector<RankedDocument> ranking;
    ranking.reserve(index.document_count());
    for (const auto& [doc_id, counts] : index.documents()) {
        ranking.push_back(RankedDocument{doc_id, score(index, query, doc_id, mu), false});
    }
    std::stable_sort(ranking.begin(), ranking.end(), [](const RankedDocument& a, const RankedDocument& b) {
        return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
    });
    for (std::size_t rank = 0; rank < std::min(cutoff, ranking.size()); ++rank) {
        const auto& tf = index.documents().at(ranking[rank].doc_id).term_frequencies;
        ranking[rank].retrieved =
            std::any_of(query.begin(), query.end(), [&](const std::string& t) { return tf.contains(t); });
    }
    return ranking;
}

std::set<std::string> retrieved_set(const std::vector<RankedDocument>& ranking) {
    std::set<std::string> out;
    for (const auto& r : ranking) {
        if (r.retrieved) {
            out.insert(r.doc_id);
        }
    }
    return out;
}

namespace {

std::vector<std::string> tab_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == '\t') {
        out.emplace_back();
    }
    return out;
}

template <typename Fn>
void for_each_row(std::istream& in, std::string_view source, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') {
            continue;
        }
        fn(tab_fields(line), std::string(source) + ":" + std::to_string(line_no));
    }
}

}  // namespace

void read_judgments(std::istream& in, RelevanceSet& into, std::string_view source) {
    for_each_row(in, source, [&](const std::vector<std::string>& f, const std::string& where) {
        if (f.size() != 3 || f[0].empty() || f[1].empty()) {
            throw DataError(where + ": expected query_id, doc_id, relevance");
        }
        if (f[2] != "0" && f[2] != "1") {
            throw DataError(where + ": relevance must be 0 or 1");
        }
        auto& relevant = into.relevant[f[0]];
        if (f[2] == "1") {
            relevant.insert(f[1]);
        }
    });
}

void read_queries(std::istream& in, RelevanceSet& into, std::string_view source) {
    for_each_row(in, source, [&](const std::vector<std::string>& f, const std::string& where) {
        if (f.size() != 2 || f[0].empty()) {
            throw DataError(where + ": expected query_id, tab, terms");
        }
        TokenList terms;
        std::istringstream words(text::to_lower(f[1]));
        for (std::string w; words >> w;) {
            terms.push_back(w);
        }
        if (terms.empty()) {
            throw DataError(where + ": query has no terms");
        }
        into.queries[f[0]] = std::move(terms);
    });
}

void check_judgments(const RelevanceSet& judgments, const Index& index) {
    for (const auto& [query, docs] : judgments.relevant) {
        for (const auto& doc : docs) {
            if (!index.contains_document(doc)) {
                throw DataError("query " + query + " judges unknown document '" + doc + "' relevant");
            }
        }
    }
}

AqwvResult aqwv(const Decisions& decisions, const RelevanceSet& judgments, std::size_t n_docs, double beta) {
    AqwvResult result;
    double total = 0.0;
    static const std::set<std::string> kNothing;
    for (const auto& [query_id, relevant] : judgments.relevant) {
        if (relevant.empty()) {
            continue;
        }
        const auto it = decisions.find(query_id);
        const std::set<std::string>& retrieved = it == decisions.end() ? kNothing : it->second;
        QueryValue q;
        q.query_id = query_id;
        q.relevant = relevant.size();
        q.retrieved = retrieved.size();
        q.hits = static_cast<std::size_t>(std::count_if(
            retrieved.begin(), retrieved.end(), [&](const std::string& d) { return relevant.contains(d); }));
        const std::size_t misses = q.relevant - q.hits;
        const std::size_t false_alarms = q.retrieved - q.hits;
        const std::size_t non_relevant = n_docs > q.relevant ? n_docs - q.relevant : 0;
        q.p_miss = static_cast<double>(misses) / static_cast<double>(q.relevant);
        q.p_false_alarm = non_relevant == 0 ? 0.0 : static_cast<double>(false_alarms) / static_cast<double>(non_relevant);
        q.value = 1.0 - q.p_miss - beta * q.p_false_alarm;
        total += q.value;
        result.queries.push_back(q);
    }
    if (result.queries.empty()) {
        throw DataError("aqwv: no query has a relevant document");
    }
    result.aqwv = total / static_cast<double>(result.queries.size());
    return result;
}

}  // namespace subseg
