#include "subseg/tagger.hpp"

#include <algorithm>
#include <cmath>

#include "subseg/error.hpp"
#include "subseg/random.hpp"

namespace subseg {

namespace {

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

void fill_uniform(Eigen::MatrixXd& m, double scale, Rng& rng) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = uniform_real(rng, -scale, scale);
        }
    }
}

void fill_glorot(Eigen::MatrixXd& m, Rng& rng) {
    fill_uniform(m, std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols())), rng);
}

LstmParams zero_lstm(int hidden, int input_dim) {
    return LstmParams{Eigen::MatrixXd::Zero(4 * hidden, input_dim), Eigen::MatrixXd::Zero(4 * hidden, hidden),
                      Eigen::VectorXd::Zero(4 * hidden)};
}

void check_id(int id, int size, std::string_view what, std::size_t position) {
    if (id < 0 || id >= size) {
        throw DataError(std::string(what) + " id " + std::to_string(id) + " at position " +
                        std::to_string(position) + " is outside a vocabulary of size " + std::to_string(size));
    }
}

// Runs one LSTM direction over precomputed input projections.
void run_direction(const LstmParams& lstm, const Eigen::MatrixXd& projected, bool reverse, DirectionTrace& out) {
    const Eigen::Index h = lstm.w_h.cols();
    const Eigen::Index n = projected.cols();
    out.gates.resize(4 * h, n);
    out.cells.resize(h, n);
    out.hidden.resize(h, n);
    Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd a(4 * h);
    for (Eigen::Index step = 0; step < n; ++step) {
        const Eigen::Index t = reverse ? n - 1 - step : step;
        a.noalias() = projected.col(t);
        a.noalias() += lstm.w_h * h_prev;
        auto gates = out.gates.col(t);
        for (Eigen::Index k = 0; k < h; ++k) {
            gates(k) = sigmoid(a(k));
            gates(h + k) = sigmoid(a(h + k));
            gates(2 * h + k) = std::tanh(a(2 * h + k));
            gates(3 * h + k) = sigmoid(a(3 * h + k));
        }
        for (Eigen::Index k = 0; k < h; ++k) {
            const double c = gates(h + k) * c_prev(k) + gates(k) * gates(2 * h + k);
            out.cells(k, t) = c;
            out.hidden(k, t) = gates(3 * h + k) * std::tanh(c);
        }
        h_prev = out.hidden.col(t);
        c_prev = out.cells.col(t);
    }
}

// Backpropagates through one direction given dL/dh for every step; adds
// parameter gradients to `grads` and input gradients to `d_inputs`.
void backprop_direction(const LstmParams& lstm, const DirectionTrace& trace, const Eigen::MatrixXd& inputs,
                        const Eigen::MatrixXd& d_hidden, bool reverse, LstmParams& grads,
                        Eigen::MatrixXd& d_inputs) {
    const Eigen::Index h = lstm.w_h.cols();
    const Eigen::Index n = inputs.cols();
    Eigen::MatrixXd d_pre(4 * h, n);
    Eigen::MatrixXd h_before = Eigen::MatrixXd::Zero(h, n);
    Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);

    for (Eigen::Index step = n - 1; step >= 0; --step) {
        const Eigen::Index t = reverse ? n - 1 - step : step;
        const bool has_prev = step > 0;
        const Eigen::Index t_prev = reverse ? t + 1 : t - 1;
        const auto gates = trace.gates.col(t);
        auto da = d_pre.col(t);
        for (Eigen::Index k = 0; k < h; ++k) {
            const double i = gates(k), f = gates(h + k), g = gates(2 * h + k), o = gates(3 * h + k);
            const double c_prev = has_prev ? trace.cells(k, t_prev) : 0.0;
            const double tanh_c = std::tanh(trace.cells(k, t));
            const double dh = d_hidden(k, t) + dh_next(k);
            const double dc = dh * o * (1.0 - tanh_c * tanh_c) + dc_next(k);
            da(k) = dc * g * i * (1.0 - i);
            da(h + k) = dc * c_prev * f * (1.0 - f);
            da(2 * h + k) = dc * i * (1.0 - g * g);
            da(3 * h + k) = dh * tanh_c * o * (1.0 - o);
            dc_next(k) = dc * f;
        }
        dh_next.noalias() = lstm.w_h.transpose() * da;
        if (has_prev) {
            h_before.col(t) = trace.hidden.col(t_prev);
        }
    }
    grads.w_x.noalias() += d_pre * inputs.transpose();
    grads.w_h.noalias() += d_pre * h_before.transpose();
    grads.b += d_pre.rowwise().sum();
    d_inputs.noalias() += lstm.w_x.transpose() * d_pre;
}

}  // namespace

TaggerDims dims_for(const Vocabulary& vocab, bool syntactic) {
    TaggerDims dims;
    dims.word_vocab = vocab.words.size();
    dims.pos_vocab = vocab.pos.size();
    dims.dep_vocab = vocab.dep.size();
    dims.syntactic = syntactic;
    return dims;
}

bool TaggerParams::operator==(const TaggerParams& other) const {
    if (!(dims == other.dims)) {
        return false;
    }
    bool equal = true;
    std::vector<std::span<const double>> mine;
    for_each_tensor(*this, [&](std::string_view, std::span<const double> t) { mine.push_back(t); });
    std::size_t index = 0;
    for_each_tensor(other, [&](std::string_view, std::span<const double> t) {
        const auto& a = mine[index++];
        equal = equal && a.size() == t.size() && std::equal(a.begin(), a.end(), t.begin());
    });
    return equal;
}

TaggerParams zero_params(const TaggerDims& dims) {
    TaggerParams p;
    p.dims = dims;
    p.word_emb = Eigen::MatrixXd::Zero(dims.word_vocab, dims.word_dim);
    p.pos_emb = Eigen::MatrixXd::Zero(dims.pos_vocab, dims.pos_dim);
    p.dep_emb = Eigen::MatrixXd::Zero(dims.dep_vocab, dims.dep_dim);
    p.fwd = zero_lstm(dims.hidden, dims.input_dim());
    p.bwd = zero_lstm(dims.hidden, dims.input_dim());
    p.proj_w = Eigen::VectorXd::Zero(2 * dims.hidden);
    p.proj_b = 0.0;
    return p;
}

TaggerParams init_params(const TaggerDims& dims, std::uint64_t seed) {
    if (dims.word_vocab < 1 || dims.pos_vocab < 1 || dims.dep_vocab < 1) {
        throw ConfigError("init_params: vocabulary sizes must be positive");
    }
    if (dims.word_dim < 1 || dims.pos_dim < 1 || dims.dep_dim < 1 || dims.hidden < 1) {
        throw ConfigError("init_params: dimensions must be positive");
    }
    TaggerParams p = zero_params(dims);
    Rng rng(seed);
    fill_glorot(p.word_emb, rng);
    fill_glorot(p.pos_emb, rng);
    fill_glorot(p.dep_emb, rng);
    for (LstmParams* lstm : {&p.fwd, &p.bwd}) {
        fill_glorot(lstm->w_x, rng);
        fill_glorot(lstm->w_h, rng);
        lstm->b.segment(dims.hidden, dims.hidden).setOnes();
    }
    Eigen::MatrixXd proj(1, 2 * dims.hidden);
    fill_glorot(proj, rng);
    p.proj_w = proj.row(0).transpose();
    return p;
}

EncodedSequence encode(const Vocabulary& vocab, const std::vector<AnnotatedToken>& tokens) {
    EncodedSequence seq;
    seq.words.reserve(tokens.size());
    seq.pos.reserve(tokens.size());
    seq.dep.reserve(tokens.size());
    for (const auto& tok : tokens) {
        seq.words.push_back(vocab.words.id(tok.surface));
        seq.pos.push_back(vocab.pos.id(tok.pos));
        seq.dep.push_back(vocab.dep.id(tok.dep));
    }
    return seq;
}

std::vector<LabeledSequence> encode_passages(const Vocabulary& vocab, const std::vector<Passage>& passages) {
    std::vector<LabeledSequence> out;
    out.reserve(passages.size());
    for (const auto& p : passages) {
        out.push_back(LabeledSequence{encode(vocab, p.tokens), p.labels});
    }
    return out;
}

ForwardTrace forward(const TaggerParams& params, const EncodedSequence& input) {
    const TaggerDims& d = params.dims;
    const auto n = static_cast<Eigen::Index>(input.size());
    if (input.pos.size() != input.size() || input.dep.size() != input.size()) {
        throw DataError("forward: word, POS and dependency id sequences differ in length");
    }
    ForwardTrace trace;
    trace.input = input;
    trace.inputs.resize(d.input_dim(), n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const auto pos = static_cast<std::size_t>(t);
        check_id(input.words[pos], d.word_vocab, "word", pos);
        trace.inputs.col(t).head(d.word_dim) = params.word_emb.row(input.words[pos]).transpose();
        if (d.syntactic) {
            check_id(input.pos[pos], d.pos_vocab, "POS", pos);
            check_id(input.dep[pos], d.dep_vocab, "dependency", pos);
            trace.inputs.col(t).segment(d.word_dim, d.pos_dim) = params.pos_emb.row(input.pos[pos]).transpose();
            trace.inputs.col(t).tail(d.dep_dim) = params.dep_emb.row(input.dep[pos]).transpose();
        }
    }

    Eigen::MatrixXd projected = params.fwd.w_x * trace.inputs;
    projected.colwise() += params.fwd.b;
    run_direction(params.fwd, projected, false, trace.fwd);
    projected.noalias() = params.bwd.w_x * trace.inputs;
    projected.colwise() += params.bwd.b;
    run_direction(params.bwd, projected, true, trace.bwd);

    const Eigen::Index h = d.hidden;
    Eigen::VectorXd logits = trace.fwd.hidden.transpose() * params.proj_w.head(h);
    logits.noalias() += trace.bwd.hidden.transpose() * params.proj_w.tail(h);
    trace.probs.resize(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        trace.probs(t) = sigmoid(logits(t) + params.proj_b);
    }
    return trace;
}

double nll_loss(const ForwardTrace& trace, const Labels& labels) {
    if (static_cast<std::size_t>(trace.probs.size()) != labels.size()) {
        throw DataError("nll_loss: label count does not match sequence length");
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double p = std::clamp(trace.probs(static_cast<Eigen::Index>(i)), kProbabilityFloor,
                                    1.0 - kProbabilityFloor);
        loss -= labels[i] != 0 ? std::log(p) : std::log1p(-p);
    }
    return loss;
}

TaggerGradients::TaggerGradients(const TaggerDims& dims) : grads_(zero_params(dims)) {}

void TaggerGradients::dedupe() const {
    for (auto* rows : {&word_rows_, &pos_rows_, &dep_rows_}) {
        std::sort(rows->begin(), rows->end());
        rows->erase(std::unique(rows->begin(), rows->end()), rows->end());
    }
}

double TaggerGradients::squared_norm() const {
    dedupe();
    double total = grads_.fwd.w_x.squaredNorm() + grads_.fwd.w_h.squaredNorm() + grads_.fwd.b.squaredNorm() +
                   grads_.bwd.w_x.squaredNorm() + grads_.bwd.w_h.squaredNorm() + grads_.bwd.b.squaredNorm() +
                   grads_.proj_w.squaredNorm() + grads_.proj_b * grads_.proj_b;
    for (int r : word_rows_) {
        total += grads_.word_emb.row(r).squaredNorm();
    }
    for (int r : pos_rows_) {
        total += grads_.pos_emb.row(r).squaredNorm();
    }
    for (int r : dep_rows_) {
        total += grads_.dep_emb.row(r).squaredNorm();
    }
    return total;
}

void TaggerGradients::scale(double factor) {
    dedupe();
    for (LstmParams* lstm : {&grads_.fwd, &grads_.bwd}) {
        lstm->w_x *= factor;
        lstm->w_h *= factor;
        lstm->b *= factor;
    }
    grads_.proj_w *= factor;
    grads_.proj_b *= factor;
    for (int r : word_rows_) {
        grads_.word_emb.row(r) *= factor;
    }
    for (int r : pos_rows_) {
        grads_.pos_emb.row(r) *= factor;
    }
    for (int r : dep_rows_) {
        grads_.dep_emb.row(r) *= factor;
    }
}

void TaggerGradients::apply(TaggerParams& params, double step) const {
    dedupe();
    const auto update = [step](LstmParams& p, const LstmParams& g) {
        p.w_x.noalias() -= step * g.w_x;
        p.w_h.noalias() -= step * g.w_h;
        p.b.noalias() -= step * g.b;
    };
    update(params.fwd, grads_.fwd);
    update(params.bwd, grads_.bwd);
    params.proj_w.noalias() -= step * grads_.proj_w;
    params.proj_b -= step * grads_.proj_b;
    for (int r : word_rows_) {
        params.word_emb.row(r).noalias() -= step * grads_.word_emb.row(r);
    }
    for (int r : pos_rows_) {
        params.pos_emb.row(r).noalias() -= step * grads_.pos_emb.row(r);
    }
    for (int r : dep_rows_) {
        params.dep_emb.row(r).noalias() -= step * grads_.dep_emb.row(r);
    }
}

void TaggerGradients::clear() {
    dedupe();
    for (LstmParams* lstm : {&grads_.fwd, &grads_.bwd}) {
        lstm->w_x.setZero();
        lstm->w_h.setZero();
        lstm->b.setZero();
    }
    grads_.proj_w.setZero();
    grads_.proj_b = 0.0;
    for (int r : word_rows_) {
        grads_.word_emb.row(r).setZero();
    }
    for (int r : pos_rows_) {
        grads_.pos_emb.row(r).setZero();
    }
    for (int r : dep_rows_) {
        grads_.dep_emb.row(r).setZero();
    }
    word_rows_.clear();
    pos_rows_.clear();
    dep_rows_.clear();
}

void backward(const TaggerParams& params, const ForwardTrace& trace, const Labels& labels,
              TaggerGradients& grads) {
    const TaggerDims& d = params.dims;
    const Eigen::Index n = trace.probs.size();
    if (static_cast<std::size_t>(n) != labels.size()) {
        throw DataError("backward: label count does not match sequence length");
    }
    TaggerParams& g = grads.tensors();
    const Eigen::Index h = d.hidden;

    // d(loss)/d(logit) for a sigmoid output under the log loss.
    Eigen::VectorXd d_logit(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        d_logit(t) = trace.probs(t) - (labels[static_cast<std::size_t>(t)] != 0 ? 1.0 : 0.0);
    }
    g.proj_w.head(h).noalias() += trace.fwd.hidden * d_logit;
    g.proj_w.tail(h).noalias() += trace.bwd.hidden * d_logit;
    g.proj_b += d_logit.sum();

    const Eigen::MatrixXd d_fwd = params.proj_w.head(h) * d_logit.transpose();
    const Eigen::MatrixXd d_bwd = params.proj_w.tail(h) * d_logit.transpose();
    Eigen::MatrixXd d_inputs = Eigen::MatrixXd::Zero(d.input_dim(), n);
    backprop_direction(params.fwd, trace.fwd, trace.inputs, d_fwd, false, g.fwd, d_inputs);
    backprop_direction(params.bwd, trace.bwd, trace.inputs, d_bwd, true, g.bwd, d_inputs);

    for (Eigen::Index t = 0; t < n; ++t) {
        const auto pos = static_cast<std::size_t>(t);
        const int w = trace.input.words[pos];
        g.word_emb.row(w) += d_inputs.col(t).head(d.word_dim).transpose();
        grads.touch_word(w);
        if (d.syntactic) {
            const int p = trace.input.pos[pos];
            const int dp = trace.input.dep[pos];
            g.pos_emb.row(p) += d_inputs.col(t).segment(d.word_dim, d.pos_dim).transpose();
            g.dep_emb.row(dp) += d_inputs.col(t).tail(d.dep_dim).transpose();
            grads.touch_pos(p);
            grads.touch_dep(dp);
        }
    }
}

TaggerGradients backward(const TaggerParams& params, const ForwardTrace& trace, const Labels& labels) {
    TaggerGradients grads(params.dims);
    backward(params, trace, labels, grads);
    return grads;
}

double sgd_step(TaggerParams& params, TaggerGradients& grads, double learning_rate, double clip_norm) {
    const double norm = std::sqrt(grads.squared_norm());
    const double factor = (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;
    grads.apply(params, learning_rate * factor);
    return factor;
}

}  // namespace subseg
