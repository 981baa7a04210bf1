// subseg: corpus building, training, segmentation and evaluation.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subseg/checkpoint.hpp"
#include "subseg/clir.hpp"
#include "subseg/corpus.hpp"
#include "subseg/corpus_io.hpp"
#include "subseg/error.hpp"
#include "subseg/metrics.hpp"
#include "subseg/segmenter.hpp"
#include "subseg/synthetic.hpp"
#include "subseg/syntax.hpp"
#include "subseg/tagger.hpp"
#include "subseg/vocabulary.hpp"

namespace fs = std::filesystem;
using namespace subseg;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return in;
}

void echo_config(const CLI::App& sub, const fs::path& dir) {
    write_file(dir / "config.ini", "[" + sub.get_name() + "]\n" + sub.config_to_str(true, false));
}

// Writes the report to stdout and, when an output directory is given, to
// report.txt and the named table file alongside the echoed config.
void emit_report(const CLI::App& sub, const std::string& out_dir, const std::string& report,
                 const std::string& table_name, const std::string& table) {
    std::cout << report << '\n' << table;
    if (!out_dir.empty()) {
        write_file(fs::path(out_dir) / "report.txt", report);
        write_file(fs::path(out_dir) / table_name, table);
        echo_config(sub, out_dir);
    }
}

TokenList split_words(const std::string& line) {
    TokenList out;
    std::istringstream ss(line);
    for (std::string w; ss >> w;) {
        out.push_back(w);
    }
    return out;
}

// ---- synth ----

struct SynthArgs {
    std::string output;
    std::uint64_t seed = 0;
    SyntheticConfig config;
};

void run_synth(const CLI::App& sub, const SynthArgs& a) {
    const auto docs = generate_synthetic_corpus(a.config, a.seed);
    const fs::path out(a.output);
    write_document_dir(out / "docs", raw_documents(docs));
    for (const auto& d : docs) {
        std::string text;
        for (const auto& seg : d.truth) {
            for (std::size_t i = 0; i < seg.size(); ++i) {
                text += (i ? " " : "") + seg[i];
            }
            text += '\n';
        }
        write_file(out / "truth" / (d.raw.doc_id + ".txt"), text);
    }
    echo_config(sub, out);
}

// ---- build-corpus ----

struct BuildArgs {
    std::string input;
    std::string output;
    std::string annotations;
    std::string align = "lenient";
    CorpusOptions options;
};

void run_build_corpus(const CLI::App& sub, const BuildArgs& a) {
    const auto docs = read_document_dir(a.input);
    if (docs.empty()) {
        throw DataError("no documents in " + a.input);
    }
    SegmentAnnotator annotate = plain_annotator;
    if (!a.annotations.empty()) {
        annotate = directory_annotator(a.annotations, a.align == "strict" ? AlignMode::strict : AlignMode::lenient);
    }
    const auto split = split_train_valid(docs, a.options, annotate);
    const fs::path out(a.output);
    fs::create_directories(out);
    write_passages_file(out / "train.jsonl", split.train);
    write_passages_file(out / "valid.jsonl", split.valid);
    const auto table = format_stats_table(compute_stats(split.train, split.train_doc_ids.size()),
                                          compute_stats(split.valid, split.valid_doc_ids.size()));
    write_file(out / "stats.tsv", table);
    echo_config(sub, out);
    std::cout << table;
}

// ---- train ----

struct TrainArgs {
    std::string train;
    std::string valid;
    std::string output;
    bool syntactic = false;
    int min_freq = 2;
    int word_dim = 256;
    int pos_dim = 32;
    int dep_dim = 32;
    int hidden = 128;
    bool no_early_stopping = false;
    TrainConfig config;
};

void run_train(const CLI::App& sub, TrainArgs a) {
    a.config.early_stopping = !a.no_early_stopping;
    a.config.validate();
    const auto train_passages = read_passages_file(a.train);
    const auto valid_passages = a.valid.empty() ? std::vector<Passage>{} : read_passages_file(a.valid);
    Model model;
    model.vocab = build_vocab(train_passages, a.min_freq);
    TaggerDims dims = dims_for(model.vocab, a.syntactic);
    dims.word_dim = a.word_dim;
    dims.pos_dim = a.pos_dim;
    dims.dep_dim = a.dep_dim;
    dims.hidden = a.hidden;

    std::string history = "epoch\tlearning_rate\ttrain_loss\tvalid_loss\timproved\n";
    const auto result = train(encode_passages(model.vocab, train_passages), encode_passages(model.vocab, valid_passages),
                              dims, a.config, [&](const EpochStats& e) {
                                  const std::string row = std::to_string(e.epoch) + '\t' + general(e.learning_rate) +
                                                          '\t' + general(e.train_loss) + '\t' +
                                                          general(e.valid_loss) + '\t' + (e.improved ? "1" : "0") +
                                                          '\n';
                                  history += row;
                                  std::cerr << row;
                              });
    model.params = result.params;
    const fs::path out(a.output);
    fs::create_directories(out);
    save_checkpoint(model, out / "model.ckpt");
    write_file(out / "history.tsv", history);
    echo_config(sub, out);
    std::cout << "best_epoch=" << result.best_epoch << "\nbest_loss=" << general(result.best_valid_loss) << '\n';
}

// ---- segment ----

struct SegmentArgs {
    std::string model;
    std::string corpus;
    std::string ctm;
    std::string output;
    double threshold = 0.5;
};

void run_segment(const CLI::App& sub, const SegmentArgs& a) {
    if (a.corpus.empty() == a.ctm.empty()) {
        throw ConfigError("exactly one of --corpus and --ctm is required");
    }
    if (!(a.threshold >= 0.0 && a.threshold <= 1.0)) {
        throw ConfigError("threshold must lie in [0, 1]");
    }
    const Model model = load_checkpoint(a.model);
    const fs::path out(a.output);
    fs::create_directories(out);
    if (!a.corpus.empty()) {
        auto passages = read_passages_file(a.corpus);
        for (auto& p : passages) {
            p.labels = predict_boundaries(model, p.tokens, a.threshold);
        }
        write_passages_file(out / "predictions.jsonl", passages);
    } else {
        auto in = open_input(a.ctm);
        std::ostringstream segments;
        for (const auto& doc : read_ctm(in, a.ctm)) {
            write_segments(segments, segment_channels(model, doc.channels, a.threshold, doc.doc_id));
        }
        write_file(out / "segments.tsv", segments.str());
    }
    echo_config(sub, out);
}

// ---- eval-intrinsic ----

struct IntrinsicArgs {
    std::string ref;
    std::string hyp;
    std::string output;
};

// Passage labels per document, concatenated in passage order.
std::map<std::string, std::pair<TokenList, Labels>> by_document(const std::vector<Passage>& passages) {
    std::map<std::string, std::map<int, const Passage*>> grouped;
    for (const auto& p : passages) {
        if (!grouped[p.doc_id].emplace(p.passage_index, &p).second) {
            throw DataError("duplicate passage " + std::to_string(p.passage_index) + " of document " + p.doc_id);
        }
    }
    std::map<std::string, std::pair<TokenList, Labels>> out;
    for (const auto& [doc, parts] : grouped) {
        auto& [tokens, labels] = out[doc];
        for (const auto& [idx, p] : parts) {
            const auto s = surfaces_of(p->tokens);
            tokens.insert(tokens.end(), s.begin(), s.end());
            labels.insert(labels.end(), p->labels.begin(), p->labels.end());
        }
    }
    return out;
}

void run_eval_intrinsic(const CLI::App& sub, const IntrinsicArgs& a) {
    const auto ref = by_document(read_passages_file(a.ref));
    const auto hyp = by_document(read_passages_file(a.hyp));
    std::string table = "doc_id\ttokens\ttp\tfp\tfn\tprecision\trecall\tf1\tk\twindow_diff\n";
    BoundaryCounts total;
    std::size_t tokens = 0, wd_tokens = 0;
    double wd_weighted = 0.0;
    for (const auto& [doc, r] : ref) {
        const auto it = hyp.find(doc);
        if (it == hyp.end()) {
            throw DataError("document " + doc + " missing from " + a.hyp);
        }
        if (it->second.first != r.first) {
            throw DataError("tokens of document " + doc + " differ between " + a.ref + " and " + a.hyp);
        }
        const auto rep = intrinsic_report(r.second, it->second.second);
        total += rep.counts;
        tokens += rep.tokens;
        if (rep.window_diff) {
            wd_weighted += *rep.window_diff * static_cast<double>(rep.tokens);
            wd_tokens += rep.tokens;
        }
        table += doc + '\t' + std::to_string(rep.tokens) + '\t' + std::to_string(rep.counts.true_positives) + '\t' +
                 std::to_string(rep.counts.false_positives) + '\t' + std::to_string(rep.counts.false_negatives) +
                 '\t' + fixed(rep.precision) + '\t' + fixed(rep.recall) + '\t' + fixed(rep.f1) + '\t' +
                 std::to_string(rep.k) + '\t' + (rep.window_diff ? fixed(*rep.window_diff) : "-") + '\n';
    }
    for (const auto& [doc, h] : hyp) {
        if (!ref.contains(doc)) {
            throw DataError("document " + doc + " missing from " + a.ref);
        }
    }
    const auto prf = prf_from_counts(total);
    const std::string wd = wd_tokens > 0 ? fixed(wd_weighted / static_cast<double>(wd_tokens)) : "-";
    table += "ALL\t" + std::to_string(tokens) + '\t' + std::to_string(total.true_positives) + '\t' +
             std::to_string(total.false_positives) + '\t' + std::to_string(total.false_negatives) + '\t' +
             fixed(prf.precision) + '\t' + fixed(prf.recall) + '\t' + fixed(prf.f1) + "\t-\t" + wd + '\n';
    const std::string report = "documents=" + std::to_string(ref.size()) + "\ntokens=" + std::to_string(tokens) +
                               "\nprecision=" + fixed(prf.precision) + "\nrecall=" + fixed(prf.recall) +
                               "\nf1=" + fixed(prf.f1) + "\nwindow_diff=" + wd + '\n';
    emit_report(sub, a.output, report, "intrinsic.tsv", table);
}

// ---- eval-bleu ----

struct BleuArgs {
    std::string hyp;
    std::string ref;
    std::string output;
};

std::map<std::string, SegmentList> read_segment_docs(const fs::path& dir) {
    std::map<std::string, SegmentList> out;
    for (const auto& doc : read_document_dir(dir)) {
        auto& segs = out[doc.doc_id];
        for (const auto& line : doc.segments) {
            segs.push_back(split_words(line));
        }
    }
    return out;
}

void run_eval_bleu(const CLI::App& sub, const BleuArgs& a) {
    const auto hyp = read_segment_docs(a.hyp);
    const auto ref = read_segment_docs(a.ref);
    if (ref.empty()) {
        throw DataError("no reference documents in " + a.ref);
    }
    std::string table = "doc_id\thyp_length\tref_length\tbleu\n";
    BleuStats pooled;
    for (const auto& [doc, r] : ref) {
        const auto it = hyp.find(doc);
        if (it == hyp.end()) {
            throw DataError("document " + doc + " missing from " + a.hyp);
        }
        const auto stats = bleu_stats(concatenate(it->second), concatenate(r));
        pooled += stats;
        table += doc + '\t' + std::to_string(stats.hyp_length) + '\t' + std::to_string(stats.ref_length) + '\t' +
                 fixed(bleu_from_stats(stats).bleu) + '\n';
    }
    for (const auto& [doc, h] : hyp) {
        if (!ref.contains(doc)) {
            throw DataError("document " + doc + " missing from " + a.ref);
        }
    }
    const auto score = bleu_from_stats(pooled);
    table += "ALL\t" + std::to_string(pooled.hyp_length) + '\t' + std::to_string(pooled.ref_length) + '\t' +
             fixed(score.bleu) + '\n';
    std::string report = "documents=" + std::to_string(ref.size()) + "\nbleu=" + fixed(score.bleu) +
                         "\nbrevity_penalty=" + fixed(score.brevity_penalty);
    for (int n = 0; n < kBleuOrder; ++n) {
        report += "\nprecision_" + std::to_string(n + 1) + '=' + fixed(score.precisions[static_cast<std::size_t>(n)]);
    }
    report += "\nhyp_length=" + std::to_string(score.hyp_length) + "\nref_length=" + std::to_string(score.ref_length) +
              '\n';
    emit_report(sub, a.output, report, "bleu.tsv", table);
}

// ---- eval-clir ----

struct ClirArgs {
    std::string docs;
    std::string queries;
    std::string judgments;
    std::string domains;
    std::string output;
    std::size_t cutoff = 20;
    double mu = kDefaultMu;
    double beta = kDefaultBeta;
};

std::map<std::string, std::string> read_domains(const fs::path& path) {
    auto in = open_input(path);
    std::map<std::string, std::string> out;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        if (line.empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
            throw DataError(path.string() + ":" + std::to_string(n) + ": expected doc_id<TAB>domain");
        }
        out[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return out;
}

std::string aqwv_or_dash(const Decisions& d, const RelevanceSet& j, std::size_t n, double beta) {
    for (const auto& [q, rel] : j.relevant) {
        if (!rel.empty()) {
            return fixed(aqwv(d, j, n, beta).aqwv);
        }
    }
    return "-";
}

void run_eval_clir(const CLI::App& sub, const ClirArgs& a) {
    std::map<std::string, TokenList> docs;
    for (const auto& doc : read_document_dir(a.docs)) {
        docs[doc.doc_id] = concatenate(extract_segments(doc));
    }
    if (docs.empty()) {
        throw DataError("no documents in " + a.docs);
    }
    const Index index = build_index(docs);
    RelevanceSet judgments;
    {
        auto in = open_input(a.queries);
        read_queries(in, judgments, a.queries);
    }
    {
        auto in = open_input(a.judgments);
        read_judgments(in, judgments, a.judgments);
    }
    check_judgments(judgments, index);

    Decisions decisions;
    for (const auto& [qid, query] : judgments.queries) {
        decisions[qid] = retrieved_set(retrieve(index, query, a.cutoff, a.mu));
    }
    for (const auto& [qid, rel] : judgments.relevant) {
        if (!judgments.queries.contains(qid)) {
            throw DataError("judged query " + qid + " has no entry in " + a.queries);
        }
    }
    const auto result = aqwv(decisions, judgments, index.document_count(), a.beta);

    std::string table = "query_id\trelevant\tretrieved\thits\tp_miss\tp_fa\tqwv\n";
    for (const auto& q : result.queries) {
        table += q.query_id + '\t' + std::to_string(q.relevant) + '\t' + std::to_string(q.retrieved) + '\t' +
                 std::to_string(q.hits) + '\t' + fixed(q.p_miss) + '\t' + fixed(q.p_false_alarm) + '\t' +
                 fixed(q.value) + '\n';
    }
    std::string report = "documents=" + std::to_string(index.document_count()) +
                         "\nqueries_scored=" + std::to_string(result.queries.size()) +
                         "\naqwv=" + fixed(result.aqwv) + '\n';

    if (!a.domains.empty()) {
        const auto domain_of = read_domains(a.domains);
        std::map<std::string, std::set<std::string>> members;
        for (const auto& [doc, tokens] : docs) {
            const auto it = domain_of.find(doc);
            if (it == domain_of.end()) {
                throw DataError("document " + doc + " has no domain in " + a.domains);
            }
            members[it->second].insert(doc);
        }
        table += "\ndomain\tdocuments\taqwv\n";
        for (const auto& [domain, in_domain] : members) {
            const auto restrict_to = [&](const std::set<std::string>& s) {
                std::set<std::string> out;
                for (const auto& d : s) {
                    if (in_domain.contains(d)) {
                        out.insert(d);
                    }
                }
                return out;
            };
            RelevanceSet sub_judgments;
            Decisions sub_decisions;
            for (const auto& [q, rel] : judgments.relevant) {
                sub_judgments.relevant[q] = restrict_to(rel);
            }
            for (const auto& [q, ret] : decisions) {
                sub_decisions[q] = restrict_to(ret);
            }
            const auto value = aqwv_or_dash(sub_decisions, sub_judgments, in_domain.size(), a.beta);
            table += domain + '\t' + std::to_string(in_domain.size()) + '\t' + value + '\n';
            report += "aqwv." + domain + '=' + value + '\n';
        }
    }
    emit_report(sub, a.output, report, "clir.tsv", table);
}

// Lets --config appear after the subcommand name as well as before it.
std::vector<std::string> hoist_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> front, rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            front.push_back(args[i]);
            front.push_back(args[++i]);
        } else if (args[i].starts_with("--config=")) {
            front.push_back(args[i]);
        } else {
            rest.push_back(args[i]);
        }
    }
    front.insert(front.end(), rest.begin(), rest.end());
    return front;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subtitle-trained sentence segmentation for speech transcripts", "subseg"};
    app.set_config("--config", "", "INI/TOML file with one [subcommand] section; flags override it");
    app.allow_config_extras(false);
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic subtitle corpus with known segments");
    synth_cmd->add_option("--output", synth.output, "Output directory (docs/ and truth/)")->required();
    synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--documents", synth.config.n_documents, "Number of documents")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--min-segments", synth.config.min_segments, "Minimum segments per document")
        ->capture_default_str();
    synth_cmd->add_option("--max-segments", synth.config.max_segments, "Maximum segments per document")
        ->capture_default_str();
    synth_cmd->add_option("--cue-probability", synth.config.cue_probability, "Probability a segment carries cue words")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build-corpus", "Extract, label and split subtitle documents into passages");
    build_cmd->add_option("--input", build.input, "Directory of subtitle documents")->required();
    build_cmd->add_option("--output", build.output, "Output directory")->required();
    build_cmd->add_option("--annotations", build.annotations, "Directory of <doc_id>.conllu parses");
    build_cmd->add_option("--align", build.align, "Annotation alignment mode")
        ->capture_default_str()
        ->check(CLI::IsMember({"strict", "lenient"}));
    build_cmd->add_option("--passages", build.options.n_passages, "Passages per document")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    build_cmd->add_option("--train-ratio", build.options.train_ratio, "Fraction of documents used for training")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    build_cmd->add_option("--seed", build.options.seed, "Split seed")->capture_default_str();
    build_cmd->add_option("--boundary-chars", build.options.boundary_chars, "Characters that end a segment")
        ->capture_default_str();

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Train the boundary tagger");
    train_cmd->add_option("--train", tr.train, "Training passages (JSONL)")->required();
    train_cmd->add_option("--valid", tr.valid, "Validation passages (JSONL)");
    train_cmd->add_option("--output", tr.output, "Output directory")->required();
    train_cmd->add_flag("--syntactic", tr.syntactic, "Use POS and dependency features");
    train_cmd->add_option("--min-freq", tr.min_freq, "Minimum word frequency kept in the vocabulary")
        ->capture_default_str();
    train_cmd->add_option("--word-dim", tr.word_dim, "Word embedding size")->capture_default_str();
    train_cmd->add_option("--pos-dim", tr.pos_dim, "POS embedding size")->capture_default_str();
    train_cmd->add_option("--dep-dim", tr.dep_dim, "Dependency embedding size")->capture_default_str();
    train_cmd->add_option("--hidden", tr.hidden, "LSTM size per direction")->capture_default_str();
    train_cmd->add_option("--learning-rate", tr.config.learning_rate, "Initial SGD step size")->capture_default_str();
    train_cmd->add_option("--max-epochs", tr.config.max_epochs, "Epoch limit")->capture_default_str();
    train_cmd->add_option("--clip-norm", tr.config.clip_norm, "Global gradient norm limit")->capture_default_str();
    train_cmd->add_option("--patience", tr.config.patience, "Non-improving epochs before stopping")
        ->capture_default_str();
    train_cmd->add_option("--lr-decay", tr.config.lr_decay, "Learning-rate factor on a non-improving epoch")
        ->capture_default_str();
    train_cmd->add_option("--seed", tr.config.seed, "Initialisation and shuffling seed")->capture_default_str();
    train_cmd->add_option("--threshold", tr.config.threshold, "Decision threshold")->capture_default_str();
    train_cmd->add_flag("--no-early-stopping", tr.no_early_stopping, "Run all epochs");

    SegmentArgs seg;
    auto* seg_cmd = app.add_subcommand("segment", "Segment passages or time-marked tokens with a trained model");
    seg_cmd->add_option("--model", seg.model, "Checkpoint file")->required();
    seg_cmd->add_option("--corpus", seg.corpus, "Passages (JSONL) to relabel");
    seg_cmd->add_option("--ctm", seg.ctm, "Time-marked tokens");
    seg_cmd->add_option("--output", seg.output, "Output directory")->required();
    seg_cmd->add_option("--threshold", seg.threshold, "Decision threshold")->capture_default_str();

    IntrinsicArgs intr;
    auto* intr_cmd = app.add_subcommand("eval-intrinsic", "Boundary P/R/F1 and WindowDiff");
    intr_cmd->add_option("--ref", intr.ref, "Reference passages (JSONL)")->required();
    intr_cmd->add_option("--hyp", intr.hyp, "Hypothesis passages (JSONL)")->required();
    intr_cmd->add_option("--output", intr.output, "Report directory");

    BleuArgs bl;
    auto* bleu_cmd = app.add_subcommand("eval-bleu", "Document-level BLEU-4");
    bleu_cmd->add_option("--hyp", bl.hyp, "Hypothesis documents, one segment per line")->required();
    bleu_cmd->add_option("--ref", bl.ref, "Reference documents, one segment per line")->required();
    bleu_cmd->add_option("--output", bl.output, "Report directory");

    ClirArgs cl;
    auto* clir_cmd = app.add_subcommand("eval-clir", "Query-likelihood retrieval scored with AQWV");
    clir_cmd->add_option("--docs", cl.docs, "Directory of (translated) documents")->required();
    clir_cmd->add_option("--queries", cl.queries, "Queries file")->required();
    clir_cmd->add_option("--judgments", cl.judgments, "Relevance judgments file")->required();
    clir_cmd->add_option("--domains", cl.domains, "doc_id<TAB>domain file for a per-domain breakdown");
    clir_cmd->add_option("--cutoff", cl.cutoff, "Retrieved documents per query")->capture_default_str();
    clir_cmd->add_option("--mu", cl.mu, "Dirichlet prior")->capture_default_str()->check(CLI::PositiveNumber);
    clir_cmd->add_option("--beta", cl.beta, "False-alarm weight")->capture_default_str();
    clir_cmd->add_option("--output", cl.output, "Report directory");

    auto args = hoist_config(argc, argv);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*synth_cmd) {
            run_synth(*synth_cmd, synth);
        } else if (*build_cmd) {
            run_build_corpus(*build_cmd, build);
        } else if (*train_cmd) {
            run_train(*train_cmd, tr);
        } else if (*seg_cmd) {
            run_segment(*seg_cmd, seg);
        } else if (*intr_cmd) {
            run_eval_intrinsic(*intr_cmd, intr);
        } else if (*bleu_cmd) {
            run_eval_bleu(*bleu_cmd, bl);
        } else if (*clir_cmd) {
            run_eval_clir(*clir_cmd, cl);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}
