#include "rafr/gru.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace rafr {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = W x + b where W is rows x cols row-major inside params at offset.
void affine(const std::vector<double>& p, int w_off, int b_off, const double* x, int rows,
            int cols, double* y) {
    for (int r = 0; r < rows; ++r) {
        double acc = b_off >= 0 ? p[b_off + r] : 0.0;
        const double* w = p.data() + w_off + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += w[c] * x[c];
        y[r] = acc;
    }
}

}  // namespace

GruModel::GruModel(int input_size, int hidden_size, int n_classes)
    : input_(input_size), hidden_(hidden_size), classes_(n_classes),
      params_(param_count(input_size, hidden_size, n_classes), 0.0) {
    if (input_size < 1 || hidden_size < 1 || n_classes < 1)
        throw std::invalid_argument("GruModel: sizes must be >= 1");
}

int GruModel::param_count(int input_size, int hidden_size, int n_classes) {
    return 3 * (hidden_size * input_size + hidden_size * hidden_size + 2 * hidden_size) +
           (n_classes * hidden_size + n_classes);
}

void GruModel::init_uniform(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_));
    for (double& p : params_) p = rng.uniform(-bound, bound);
}

std::vector<std::vector<double>> GruModel::forward(
    const std::vector<std::array<double, 5>>& sequence) const {
    if (input_ != 5) throw std::invalid_argument("forward: input size mismatch");
    const int H = hidden_, C = classes_;
    std::vector<double> h(H, 0.0), r(H), z(H), n(H), hn_pre(H), tmp(H);
    std::vector<double> logits(C);
    std::vector<std::vector<double>> out;
    out.reserve(sequence.size());

    for (const auto& x : sequence) {
        affine(params_, off_w_ir(), off_biases() + 0 * H, x.data(), H, input_, r.data());
        affine(params_, off_w_hr(), off_biases() + 3 * H, h.data(), H, H, tmp.data());
        for (int i = 0; i < H; ++i) r[i] = sigmoid(r[i] + tmp[i]);

        affine(params_, off_w_iz(), off_biases() + 1 * H, x.data(), H, input_, z.data());
        affine(params_, off_w_hz(), off_biases() + 4 * H, h.data(), H, H, tmp.data());
        for (int i = 0; i < H; ++i) z[i] = sigmoid(z[i] + tmp[i]);

        affine(params_, off_w_hn(), off_biases() + 5 * H, h.data(), H, H, hn_pre.data());
        affine(params_, off_w_in(), off_biases() + 2 * H, x.data(), H, input_, n.data());
        for (int i = 0; i < H; ++i) n[i] = std::tanh(n[i] + r[i] * hn_pre[i]);

        for (int i = 0; i < H; ++i) h[i] = (1.0 - z[i]) * n[i] + z[i] * h[i];

        affine(params_, off_w_out(), off_b_out(), h.data(), C, H, logits.data());
        const double mx = *std::max_element(logits.begin(), logits.end());
        double lse = 0.0;
        for (double l : logits) lse += std::exp(l - mx);
        lse = mx + std::log(lse);
        std::vector<double> lp(C);
        for (int c = 0; c < C; ++c) lp[c] = logits[c] - lse;
        out.push_back(std::move(lp));
    }
    return out;
}

double GruModel::backward(const std::vector<std::array<double, 5>>& sequence,
                          const std::vector<int>& labels, std::vector<double>& grad,
                          double scale) const {
    const int T = static_cast<int>(sequence.size());
    if (static_cast<int>(labels.size()) != T)
        throw std::invalid_argument("backward: label length mismatch");
    if (grad.size() != params_.size()) throw std::invalid_argument("backward: grad size mismatch");
    const int H = hidden_, C = classes_, I = input_;

    // forward with cached activations
    std::vector<std::vector<double>> hs(T + 1, std::vector<double>(H, 0.0));
    std::vector<std::vector<double>> rs(T, std::vector<double>(H)), zs = rs, ns = rs,
                                     hnp = rs;  // hnp = W_hn h_prev + b_hn
    std::vector<std::vector<double>> probs(T, std::vector<double>(C));
    std::vector<double> tmp(H), logits(C);
    double loss = 0.0;

    for (int t = 0; t < T; ++t) {
        const double* x = sequence[t].data();
        const double* hp = hs[t].data();
        affine(params_, off_w_ir(), off_biases() + 0 * H, x, H, I, rs[t].data());
        affine(params_, off_w_hr(), off_biases() + 3 * H, hp, H, H, tmp.data());
        for (int i = 0; i < H; ++i) rs[t][i] = sigmoid(rs[t][i] + tmp[i]);

        affine(params_, off_w_iz(), off_biases() + 1 * H, x, H, I, zs[t].data());
        affine(params_, off_w_hz(), off_biases() + 4 * H, hp, H, H, tmp.data());
        for (int i = 0; i < H; ++i) zs[t][i] = sigmoid(zs[t][i] + tmp[i]);

        affine(params_, off_w_hn(), off_biases() + 5 * H, hp, H, H, hnp[t].data());
        affine(params_, off_w_in(), off_biases() + 2 * H, x, H, I, ns[t].data());
        for (int i = 0; i < H; ++i) ns[t][i] = std::tanh(ns[t][i] + rs[t][i] * hnp[t][i]);

        for (int i = 0; i < H; ++i)
            hs[t + 1][i] = (1.0 - zs[t][i]) * ns[t][i] + zs[t][i] * hs[t][i];

        affine(params_, off_w_out(), off_b_out(), hs[t + 1].data(), C, H, logits.data());
        const double mx = *std::max_element(logits.begin(), logits.end());
        double lse = 0.0;
        for (double l : logits) lse += std::exp(l - mx);
        lse = mx + std::log(lse);
        const int y = labels[t];
        if (y < 0 || y >= C) throw std::out_of_range("backward: label out of range");
        loss += -(logits[y] - lse);
        for (int c = 0; c < C; ++c) probs[t][c] = std::exp(logits[c] - lse);
    }
    loss /= T;

    // backward
    std::vector<double> dh(H, 0.0), dlogits(C), dr(H), dz(H), dn(H), dnp(H), dhnp(H), dhp(H);
    for (int t = T - 1; t >= 0; --t) {
        for (int c = 0; c < C; ++c)
            dlogits[c] = (probs[t][c] - (c == labels[t] ? 1.0 : 0.0)) / T;
        // head gradients and dh contribution
        for (int c = 0; c < C; ++c) {
            grad[off_b_out() + c] += scale * dlogits[c];
            double* gw = grad.data() + off_w_out() + static_cast<std::size_t>(c) * H;
            const double* w = params_.data() + off_w_out() + static_cast<std::size_t>(c) * H;
            for (int i = 0; i < H; ++i) {
                gw[i] += scale * dlogits[c] * hs[t + 1][i];
                dh[i] += dlogits[c] * w[i];
            }
        }
        for (int i = 0; i < H; ++i) {
            dn[i] = dh[i] * (1.0 - zs[t][i]);
            dz[i] = dh[i] * (hs[t][i] - ns[t][i]);
            dhp[i] = dh[i] * zs[t][i];
            dnp[i] = dn[i] * (1.0 - ns[t][i] * ns[t][i]);
            dr[i] = dnp[i] * hnp[t][i];
            dhnp[i] = dnp[i] * rs[t][i];
            dz[i] *= zs[t][i] * (1.0 - zs[t][i]);
            dr[i] *= rs[t][i] * (1.0 - rs[t][i]);
        }
        const double* x = sequence[t].data();
        const double* hp = hs[t].data();
        // r gate
        for (int i = 0; i < H; ++i) {
            grad[off_biases() + 0 * H + i] += scale * dr[i];
            grad[off_biases() + 3 * H + i] += scale * dr[i];
            double* gwi = grad.data() + off_w_ir() + static_cast<std::size_t>(i) * I;
            for (int k = 0; k < I; ++k) gwi[k] += scale * dr[i] * x[k];
            double* gwh = grad.data() + off_w_hr() + static_cast<std::size_t>(i) * H;
            for (int k = 0; k < H; ++k) gwh[k] += scale * dr[i] * hp[k];
        }
        // z gate
        for (int i = 0; i < H; ++i) {
            grad[off_biases() + 1 * H + i] += scale * dz[i];
            grad[off_biases() + 4 * H + i] += scale * dz[i];
            double* gwi = grad.data() + off_w_iz() + static_cast<std::size_t>(i) * I;
            for (int k = 0; k < I; ++k) gwi[k] += scale * dz[i] * x[k];
            double* gwh = grad.data() + off_w_hz() + static_cast<std::size_t>(i) * H;
            for (int k = 0; k < H; ++k) gwh[k] += scale * dz[i] * hp[k];
        }
        // candidate
        for (int i = 0; i < H; ++i) {
            grad[off_biases() + 2 * H + i] += scale * dnp[i];
            grad[off_biases() + 5 * H + i] += scale * dhnp[i];
            double* gwi = grad.data() + off_w_in() + static_cast<std::size_t>(i) * I;
            for (int k = 0; k < I; ++k) gwi[k] += scale * dnp[i] * x[k];
            double* gwh = grad.data() + off_w_hn() + static_cast<std::size_t>(i) * H;
            for (int k = 0; k < H; ++k) gwh[k] += scale * dhnp[i] * hp[k];
        }
        // propagate to h_{t-1}
        for (int k = 0; k < H; ++k) {
            double acc = dhp[k];
            for (int i = 0; i < H; ++i) {
                acc += params_[off_w_hr() + static_cast<std::size_t>(i) * H + k] * dr[i];
                acc += params_[off_w_hz() + static_cast<std::size_t>(i) * H + k] * dz[i];
                acc += params_[off_w_hn() + static_cast<std::size_t>(i) * H + k] * dhnp[i];
            }
            tmp[k] = acc;
        }
        dh = tmp;
    }
    return loss;
}

double nll_loss(const std::vector<std::vector<double>>& log_probs, const std::vector<int>& labels) {
    if (log_probs.size() != labels.size())
        throw std::invalid_argument("nll_loss: length mismatch");
    if (log_probs.empty()) throw std::invalid_argument("nll_loss: empty sequence");
    double acc = 0.0;
    for (std::size_t t = 0; t < labels.size(); ++t) {
        const int y = labels[t];
        if (y < 0 || y >= static_cast<int>(log_probs[t].size()))
            throw std::out_of_range("nll_loss: label out of range");
        acc -= log_probs[t][y];
    }
    return acc / static_cast<double>(labels.size());
}

void TrainConfig::validate() const {
    if (lr <= 0.0 || weight_decay < 0.0 || batch_size < 1 || max_epochs < 1 || patience < 1 ||
        n_seeds < 1)
        throw std::invalid_argument("TrainConfig: all fields must be positive");
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               const TrainConfig& cfg) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw std::invalid_argument("adam_step: size mismatch");
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    state.t += 1;
    const double bc1 = 1.0 - std::pow(beta1, state.t);
    const double bc2 = 1.0 - std::pow(beta2, state.t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        double g = grads[i];
        if (!std::isfinite(g)) throw std::runtime_error("adam_step: non-finite gradient");
        g += cfg.weight_decay * params[i];
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= cfg.lr * mhat / (std::sqrt(vhat) + eps);
    }
}

std::pair<GruModel, TrainHistory> train(const std::vector<SequenceExample>& train_set,
                                        const std::vector<SequenceExample>& val_set,
                                        const TrainConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (train_set.empty() || val_set.empty())
        throw std::invalid_argument("train: empty split");

    Rng rng(seed);
    GruModel model;
    model.init_uniform(rng);
    AdamState adam(model.params().size());
    GruModel best = model;
    TrainHistory hist;
    double best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(model.params().size());

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        // Fisher-Yates with the seed-derived stream
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(order[i - 1], order[j]);
        }
        double train_loss = 0.0;
        for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
            const std::size_t e = std::min(b + cfg.batch_size, order.size());
            std::fill(grad.begin(), grad.end(), 0.0);
            const double scale = 1.0 / static_cast<double>(e - b);
            for (std::size_t i = b; i < e; ++i) {
                const SequenceExample& ex = train_set[order[i]];
                train_loss += model.backward(ex.x, ex.y, grad, scale);
            }
            adam_step(model.params(), grad, adam, cfg);
        }
        train_loss /= static_cast<double>(train_set.size());

        double val_loss = 0.0;
        std::size_t correct = 0, total = 0;
        for (const SequenceExample& ex : val_set) {
            const auto lp = model.forward(ex.x);
            val_loss += nll_loss(lp, ex.y);
            for (std::size_t t = 0; t < lp.size(); ++t) {
                const int pred = static_cast<int>(
                    std::max_element(lp[t].begin(), lp[t].end()) - lp[t].begin());
                correct += (pred == ex.y[t]);
                ++total;
            }
        }
        val_loss /= static_cast<double>(val_set.size());

        hist.train_loss.push_back(train_loss);
        hist.val_loss.push_back(val_loss);
        hist.val_acc.push_back(total ? static_cast<double>(correct) / total : 0.0);

        if (val_loss < best_val) {
            best_val = val_loss;
            hist.best_epoch = epoch;
            best = model;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            hist.stopped_early = true;
            break;
        }
    }
    return {best, hist};
}

GestureClass recording_prediction(const std::vector<std::vector<double>>& log_probs) {
    if (log_probs.empty()) throw std::invalid_argument("recording_prediction: empty sequence");
    std::array<int, kNumClasses> votes{};
    std::array<double, kNumClasses> lp_sum{};
    for (const auto& lp : log_probs) {
        const int pred =
            static_cast<int>(std::max_element(lp.begin(), lp.end()) - lp.begin());
        if (pred != 0) {
            votes[pred] += 1;
            lp_sum[pred] += lp[pred];
        }
    }
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && votes[c] > 0 && lp_sum[c] > lp_sum[best]))
            best = c;
    }
    return votes[best] > 0 ? static_cast<GestureClass>(best) : GestureClass::Background;
}

EvalResult evaluate(const std::vector<GruModel>& models,
                    const std::vector<SequenceExample>& test_set) {
    if (models.empty()) throw std::invalid_argument("evaluate: no models");
    if (test_set.empty()) throw std::invalid_argument("evaluate: empty test set");
    EvalResult res;
    for (const GruModel& model : models) {
        std::array<std::array<int, 6>, 6> conf{};
        std::size_t correct = 0, gestures = 0;
        for (const SequenceExample& ex : test_set) {
            const GestureClass pred = recording_prediction(model.forward(ex.x));
            conf[static_cast<int>(ex.recording_label)][static_cast<int>(pred)] += 1;
            if (ex.recording_label != GestureClass::Background) {
                ++gestures;
                correct += (pred == ex.recording_label);
            }
        }
        res.per_model_accuracy.push_back(
            gestures ? static_cast<double>(correct) / gestures : 0.0);
        res.confusion.push_back(conf);
    }
    const double n = static_cast<double>(res.per_model_accuracy.size());
    double mean = 0.0;
    for (double a : res.per_model_accuracy) mean += a;
    mean /= n;
    double var = 0.0;
    for (double a : res.per_model_accuracy) var += (a - mean) * (a - mean);
    res.mean_accuracy = mean;
    res.std_accuracy = std::sqrt(var / n);
    return res;
}

void save_model(const std::string& path, const GruModel& model) {
    nlohmann::json j;
    j["config"] = {{"input_size", model.input_size()},
                   {"hidden_size", model.hidden_size()},
                   {"n_classes", model.n_classes()}};
    j["params"] = model.params();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << j.dump(2) << "\n";
}

GruModel load_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    is >> j;
    GruModel model(j.at("config").at("input_size").get<int>(),
                   j.at("config").at("hidden_size").get<int>(),
                   j.at("config").at("n_classes").get<int>());
    const auto p = j.at("params").get<std::vector<double>>();
    if (p.size() != model.params().size())
        throw std::runtime_error("load_model: parameter count mismatch");
    model.params() = p;
    return model;
}

void write_history_csv(const std::string& path, const TrainHistory& history) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "epoch,train_loss,val_loss,val_acc\n";
    os.precision(17);
    for (std::size_t e = 0; e < history.train_loss.size(); ++e)
        os << e << "," << history.train_loss[e] << "," << history.val_loss[e] << ","
           << history.val_acc[e] << "\n";
}

}  // namespace rafr
