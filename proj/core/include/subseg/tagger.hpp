#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "subseg/corpus.hpp"
#include "subseg/vocabulary.hpp"

namespace subseg {

/// Shape of a boundary tagger. The defaults give 256-d word embeddings,
/// 32-d POS and dependency embeddings, and 128 units per LSTM direction
/// (256-d concatenated states).
struct TaggerDims {
    int word_vocab = 0;
    int pos_vocab = 0;
    int dep_vocab = 0;
    int word_dim = 256;
    int pos_dim = 32;
    int dep_dim = 32;
    int hidden = 128;
    bool syntactic = false;

    int input_dim() const { return word_dim + (syntactic ? pos_dim + dep_dim : 0); }

    bool operator==(const TaggerDims&) const = default;
};

TaggerDims dims_for(const Vocabulary& vocab, bool syntactic);

/// One LSTM direction. Gate blocks are stacked input, forget, cell, output.
struct LstmParams {
    Eigen::MatrixXd w_x;  // 4h x d_in
    Eigen::MatrixXd w_h;  // 4h x h
    Eigen::VectorXd b;    // 4h
};

struct TaggerParams {
    TaggerDims dims;
    Eigen::MatrixXd word_emb;  // |V_w| x word_dim
    Eigen::MatrixXd pos_emb;   // |V_p| x pos_dim
    Eigen::MatrixXd dep_emb;   // |V_d| x dep_dim
    LstmParams fwd;
    LstmParams bwd;
    Eigen::VectorXd proj_w;    // 2h
    double proj_b = 0.0;

    bool operator==(const TaggerParams& other) const;
};

/// Visits every tensor as a flat span, in a fixed order.
template <typename Params, typename Fn>
    requires std::is_same_v<std::remove_const_t<Params>, TaggerParams>
void for_each_tensor(Params& p, Fn&& fn) {
    const auto view = [](auto& tensor) { return std::span(tensor.data(), static_cast<std::size_t>(tensor.size())); };
    fn(std::string_view("word_emb"), view(p.word_emb));
    fn(std::string_view("pos_emb"), view(p.pos_emb));
    fn(std::string_view("dep_emb"), view(p.dep_emb));
    fn(std::string_view("fwd.w_x"), view(p.fwd.w_x));
    fn(std::string_view("fwd.w_h"), view(p.fwd.w_h));
    fn(std::string_view("fwd.b"), view(p.fwd.b));
    fn(std::string_view("bwd.w_x"), view(p.bwd.w_x));
    fn(std::string_view("bwd.w_h"), view(p.bwd.w_h));
    fn(std::string_view("bwd.b"), view(p.bwd.b));
    fn(std::string_view("proj_w"), view(p.proj_w));
    fn(std::string_view("proj_b"), std::span(&p.proj_b, 1));
}

/// All-zero tensors of the given shape.
TaggerParams zero_params(const TaggerDims& dims);

/// Glorot-uniform matrices, zero biases except a forget-gate bias of 1.
/// Deterministic under `seed`; throws ConfigError on empty vocabularies or
/// non-positive dimensions.
TaggerParams init_params(const TaggerDims& dims, std::uint64_t seed);

/// Vocabulary ids for one token sequence.
struct EncodedSequence {
    std::vector<int> words;
    std::vector<int> pos;
    std::vector<int> dep;

    std::size_t size() const { return words.size(); }
};

EncodedSequence encode(const Vocabulary& vocab, const std::vector<AnnotatedToken>& tokens);

struct LabeledSequence {
    EncodedSequence input;
    Labels labels;
};

std::vector<LabeledSequence> encode_passages(const Vocabulary& vocab, const std::vector<Passage>& passages);

struct DirectionTrace {
    Eigen::MatrixXd gates;   // 4h x n, post-activation
    Eigen::MatrixXd cells;   // h x n
    Eigen::MatrixXd hidden;  // h x n
};

struct ForwardTrace {
    EncodedSequence input;
    Eigen::MatrixXd inputs;  // d_in x n
    DirectionTrace fwd;
    DirectionTrace bwd;
    Eigen::VectorXd probs;   // p(boundary after token i)
};

/// Throws DataError if any id is outside its vocabulary.
ForwardTrace forward(const TaggerParams& params, const EncodedSequence& input);

inline constexpr double kProbabilityFloor = 1e-12;

/// Negative log-likelihood of `labels` in nats, with probabilities clamped
/// to [1e-12, 1 - 1e-12].
double nll_loss(const ForwardTrace& trace, const Labels& labels);

/// Gradient accumulator. Embedding rows not listed in the touched-row sets
/// are exactly zero.
class TaggerGradients {
  public:
    explicit TaggerGradients(const TaggerDims& dims);

    TaggerParams& tensors() { return grads_; }
    const TaggerParams& tensors() const { return grads_; }

    void touch_word(int row) { word_rows_.push_back(row); }
    void touch_pos(int row) { pos_rows_.push_back(row); }
    void touch_dep(int row) { dep_rows_.push_back(row); }

    double squared_norm() const;
    void scale(double factor);
    /// params -= step * gradients, visiting only touched embedding rows.
    void apply(TaggerParams& params, double step) const;
    void clear();

  private:
    void dedupe() const;

    TaggerParams grads_;
    mutable std::vector<int> word_rows_;
    mutable std::vector<int> pos_rows_;
    mutable std::vector<int> dep_rows_;
};

/// Adds the exact gradient of nll_loss(trace, labels) to `grads`.
void backward(const TaggerParams& params, const ForwardTrace& trace, const Labels& labels,
              TaggerGradients& grads);
TaggerGradients backward(const TaggerParams& params, const ForwardTrace& trace, const Labels& labels);

/// Clips the global gradient norm to `clip_norm`, then takes a step of
/// size `learning_rate`. Returns the clip factor applied (1 when unclipped).
double sgd_step(TaggerParams& params, TaggerGradients& grads, double learning_rate, double clip_norm);

struct TrainConfig {
    double learning_rate = 0.1;
    int max_epochs = 30;
    double clip_norm = 5.0;
    int patience = 3;
    double lr_decay = 0.5;
    std::uint64_t seed = 0;
    double threshold = 0.5;
    bool early_stopping = true;

    void validate() const;
};

struct EpochStats {
    int epoch = 0;
    double learning_rate = 0.0;
    double train_loss = 0.0;  // nats per token, accumulated during the epoch
    double valid_loss = 0.0;  // nats per token after the epoch
    bool improved = false;

    bool operator==(const EpochStats&) const = default;
};

struct TrainResult {
    TaggerParams params;
    std::vector<EpochStats> history;
    int best_epoch = 0;
    double best_valid_loss = 0.0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// One passage per SGD step in a seeded shuffled order. The learning rate is
/// decayed whenever the monitored loss fails to improve and training stops
/// after `patience` such epochs; the best parameters are returned. The
/// monitored loss is the validation loss, or the training loss when
/// `valid` is empty.
TrainResult train(const std::vector<LabeledSequence>& train, const std::vector<LabeledSequence>& valid,
                  const TaggerDims& dims, const TrainConfig& config, const EpochCallback& on_epoch = {});

/// Mean loss per token.
double mean_loss(const TaggerParams& params, const std::vector<LabeledSequence>& data);

/// A tagger bundled with the vocabularies that produced its ids.
struct Model {
    Vocabulary vocab;
    TaggerParams params;

    bool operator==(const Model&) const = default;
};

}  // namespace subseg
