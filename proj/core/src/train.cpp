#include <cmath>
#include <numeric>

#include "subseg/error.hpp"
#include "subseg/random.hpp"
#include "subseg/tagger.hpp"

namespace subseg {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) {
        throw ConfigError("learning_rate must be positive");
    }
    if (max_epochs < 1) {
        throw ConfigError("max_epochs must be at least 1");
    }
    if (!(clip_norm > 0.0)) {
        throw ConfigError("clip_norm must be positive");
    }
    if (patience < 1) {
        throw ConfigError("patience must be at least 1");
    }
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) {
        throw ConfigError("lr_decay must lie in (0, 1]");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ConfigError("threshold must lie in (0, 1)");
    }
}

double mean_loss(const TaggerParams& params, const std::vector<LabeledSequence>& data) {
    double loss = 0.0;
    std::size_t tokens = 0;
    for (const auto& item : data) {
        loss += nll_loss(forward(params, item.input), item.labels);
        tokens += item.labels.size();
    }
    return tokens == 0 ? 0.0 : loss / static_cast<double>(tokens);
}

TrainResult train(const std::vector<LabeledSequence>& train_set, const std::vector<LabeledSequence>& valid_set,
                  const TaggerDims& dims, const TrainConfig& config, const EpochCallback& on_epoch) {
    config.validate();
    if (train_set.empty()) {
        throw ConfigError("train: empty training set");
    }

    TrainResult result;
    TaggerParams params = init_params(dims, config.seed);
    TaggerGradients grads(dims);
    // Separate stream from the initializer so the two never share draws.
    Rng order_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    double learning_rate = config.learning_rate;
    double best = INFINITY;
    int bad_epochs = 0;
    result.params = params;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        shuffle_in_place(std::span(order), order_rng);
        double epoch_loss = 0.0;
        std::size_t epoch_tokens = 0;
        for (std::size_t index : order) {
            const auto& item = train_set[index];
            if (item.labels.empty()) {
                continue;
            }
            const ForwardTrace trace = forward(params, item.input);
            epoch_loss += nll_loss(trace, item.labels);
            epoch_tokens += item.labels.size();
            grads.clear();
            backward(params, trace, item.labels, grads);
            sgd_step(params, grads, learning_rate, config.clip_norm);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.learning_rate = learning_rate;
        stats.train_loss = epoch_tokens == 0 ? 0.0 : epoch_loss / static_cast<double>(epoch_tokens);
        stats.valid_loss = valid_set.empty() ? stats.train_loss : mean_loss(params, valid_set);
        if (!std::isfinite(stats.valid_loss)) {
            throw DataError("training diverged at epoch " + std::to_string(epoch));
        }
        stats.improved = stats.valid_loss < best;
        if (stats.improved) {
            best = stats.valid_loss;
            bad_epochs = 0;
            result.params = params;
            result.best_epoch = epoch;
            result.best_valid_loss = best;
        } else {
            ++bad_epochs;
            learning_rate *= config.lr_decay;
        }
        result.history.push_back(stats);
        if (on_epoch) {
            on_epoch(stats);
        }
        if (config.early_stopping && bad_epochs >= config.patience) {
            break;
        }
    }
    return result;
}

}  // namespace subseg
