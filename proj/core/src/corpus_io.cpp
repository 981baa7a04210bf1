#include "subseg/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "subseg/error.hpp"

namespace subseg {

using nlohmann::json;

std::string passage_to_json_line(const Passage& passage) {
    json record;
    record["doc_id"] = passage.doc_id;
    record["passage_index"] = passage.passage_index;
    std::vector<std::string> tokens, pos, dep;
    bool annotated = false;
    for (const auto& tok : passage.tokens) {
        tokens.push_back(tok.surface);
        pos.push_back(tok.pos);
        dep.push_back(tok.dep);
        annotated = annotated || !tok.pos.empty() || !tok.dep.empty();
    }
    record["tokens"] = tokens;
    record["labels"] = std::vector<int>(passage.labels.begin(), passage.labels.end());
    if (annotated) {
        record["pos"] = pos;
        record["dep"] = dep;
    }
    return record.dump();
}

Passage passage_from_json_line(std::string_view line, std::string_view source, std::size_t line_no) {
    const auto where = [&] { return std::string(source) + ":" + std::to_string(line_no) + ": "; };
    json record;
    try {
        record = json::parse(line);
    } catch (const json::parse_error& e) {
        throw DataError(where() + "invalid JSON: " + e.what());
    }
    try {
        Passage passage;
        passage.doc_id = record.at("doc_id").get<std::string>();
        passage.passage_index = record.at("passage_index").get<int>();
        const auto tokens = record.at("tokens").get<std::vector<std::string>>();
        const auto labels = record.at("labels").get<std::vector<int>>();
        if (tokens.size() != labels.size()) {
            throw DataError(where() + "tokens and labels differ in length");
        }
        std::vector<std::string> pos, dep;
        if (record.contains("pos")) {
            pos = record.at("pos").get<std::vector<std::string>>();
        }
        if (record.contains("dep")) {
            dep = record.at("dep").get<std::vector<std::string>>();
        }
        if ((!pos.empty() && pos.size() != tokens.size()) || (!dep.empty() && dep.size() != tokens.size())) {
            throw DataError(where() + "pos/dep arrays must match the token count");
        }
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i].empty()) {
                throw DataError(where() + "empty token at position " + std::to_string(i));
            }
            if (labels[i] != 0 && labels[i] != 1) {
                throw DataError(where() + "labels must be 0 or 1");
            }
            AnnotatedToken tok{.surface = tokens[i]};
            if (!pos.empty()) {
                tok.pos = pos[i];
            }
            if (!dep.empty()) {
                tok.dep = dep[i];
            }
            passage.tokens.push_back(std::move(tok));
            passage.labels.push_back(static_cast<std::uint8_t>(labels[i]));
        }
        return passage;
    } catch (const json::exception& e) {
        throw DataError(where() + "bad passage record: " + e.what());
    }
}

void write_passages(std::ostream& out, const std::vector<Passage>& passages) {
    for (const auto& p : passages) {
        out << passage_to_json_line(p) << '\n';
    }
}

std::vector<Passage> read_passages(std::istream& in, std::string_view source) {
    std::vector<Passage> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        out.push_back(passage_from_json_line(line, source, line_no));
    }
    return out;
}

void write_passages_file(const std::filesystem::path& path, const std::vector<Passage>& passages) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    write_passages(out, passages);
    if (!out) {
        throw DataError("write failed for " + path.string());
    }
}

std::vector<Passage> read_passages_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return read_passages(in, path.string());
}

RawDocument read_document_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    RawDocument doc;
    doc.doc_id = path.stem().string();
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        doc.segments.push_back(std::move(line));
    }
    return doc;
}

std::vector<RawDocument> read_document_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw DataError(dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && !name.starts_with('.')) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<RawDocument> docs;
    docs.reserve(files.size());
    for (const auto& f : files) {
        docs.push_back(read_document_file(f));
    }
    return docs;
}

void write_document_dir(const std::filesystem::path& dir, const std::vector<RawDocument>& docs) {
    std::filesystem::create_directories(dir);
    for (const auto& doc : docs) {
        const auto path = dir / (doc.doc_id + ".txt");
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw DataError("cannot write " + path.string());
        }
        for (const auto& line : doc.segments) {
            out << line << '\n';
        }
    }
}

SplitStats compute_stats(const std::vector<Passage>& passages, std::size_t documents) {
    SplitStats stats;
    stats.documents = documents;
    stats.passages = passages.size();
    for (const auto& p : passages) {
        stats.tokens += p.tokens.size();
        stats.segments += static_cast<std::size_t>(std::count(p.labels.begin(), p.labels.end(), 1));
    }
    return stats;
}

std::string format_stats_table(const SplitStats& train, const SplitStats& valid) {
    std::ostringstream out;
    out << "split\tdocuments\tpassages\tsegments\ttokens\n";
    const auto row = [&](std::string_view name, const SplitStats& s) {
        out << name << '\t' << s.documents << '\t' << s.passages << '\t' << s.segments << '\t' << s.tokens
            << '\n';
    };
    row("train", train);
    row("valid", valid);
    SplitStats total{train.documents + valid.documents, train.passages + valid.passages,
                     train.segments + valid.segments, train.tokens + valid.tokens};
    row("total", total);
    return out.str();
}

}  // namespace subseg
