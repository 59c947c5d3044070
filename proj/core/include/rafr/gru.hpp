#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rafr/radar.hpp"
#include "rafr/rng.hpp"

namespace rafr {

/// Sequence classifier: single GRU layer (dual-bias variant) plus a linear
/// head with per-step log-softmax output. Parameters live in one flat
/// vector with a fixed layout so the optimizer and serialization can treat
/// the model as a plain array:
///   W_ir W_iz W_in | W_hr W_hz W_hn | b_ir b_iz b_in b_hr b_hz b_hn |
///   W_out b_out
/// (matrices row-major, rows = output dimension).
class GruModel {
  public:
    GruModel(int input_size = 5, int hidden_size = 16, int n_classes = 6);

    int input_size() const { return input_; }
    int hidden_size() const { return hidden_; }
    int n_classes() const { return classes_; }

    /// Total trainable parameter count for this shape (dual-bias GRU).
    static int param_count(int input_size, int hidden_size, int n_classes);
    int param_count() const { return static_cast<int>(params_.size()); }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    void init_uniform(Rng& rng);

    /// Forward pass over one sequence [T][input]; returns per-step class
    /// log-probabilities [T][n_classes].
    std::vector<std::vector<double>> forward(const std::vector<std::array<double, 5>>& sequence) const;

    /// Forward + backward for one sequence with per-step labels;
    /// accumulates dLoss/dparams into grad (same layout as params) scaled
    /// by `scale`, and returns the sequence NLL loss.
    double backward(const std::vector<std::array<double, 5>>& sequence,
                    const std::vector<int>& labels, std::vector<double>& grad,
                    double scale) const;

    // offsets into the flat parameter vector
    int off_w_ir() const { return 0; }
    int off_w_iz() const { return hidden_ * input_; }
    int off_w_in() const { return 2 * hidden_ * input_; }
    int off_w_hr() const { return 3 * hidden_ * input_; }
    int off_w_hz() const { return 3 * hidden_ * input_ + hidden_ * hidden_; }
    int off_w_hn() const { return 3 * hidden_ * input_ + 2 * hidden_ * hidden_; }
    int off_biases() const { return 3 * hidden_ * input_ + 3 * hidden_ * hidden_; }
    int off_w_out() const { return off_biases() + 6 * hidden_; }
    int off_b_out() const { return off_w_out() + classes_ * hidden_; }

  private:
    int input_, hidden_, classes_;
    std::vector<double> params_;
};

double nll_loss(const std::vector<std::vector<double>>& log_probs, const std::vector<int>& labels);

struct TrainConfig {
    double lr = 1.58e-3;
    double weight_decay = 1.6e-5;
    int batch_size = 32;
    int max_epochs = 150;
    int patience = 10;
    int n_seeds = 10;

    void validate() const;
};

/// Adam state (first/second moments) matching a flat parameter vector.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    int t = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// One classic Adam update (beta1 0.9, beta2 0.999, eps 1e-8); weight
/// decay enters as an L2 term on the gradient before the moment update.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               const TrainConfig& cfg);

/// One training example: scaled features plus per-frame labels.
struct SequenceExample {
    std::vector<std::array<double, 5>> x;
    std::vector<int> y;
    GestureClass recording_label = GestureClass::Background;
};

struct TrainHistory {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> val_acc;  // frame-level accuracy
    int best_epoch = -1;
    bool stopped_early = false;
};

/// Mini-batch training with early stopping on validation loss; returns the
/// parameters of the best epoch. Deterministic given (data, cfg, seed).
std::pair<GruModel, TrainHistory> train(const std::vector<SequenceExample>& train_set,
                                        const std::vector<SequenceExample>& val_set,
                                        const TrainConfig& cfg, std::uint64_t seed);

/// Frame-majority vote among non-Background predictions; ties broken by
/// the class with the larger summed log-probability over its voting
/// frames. All-Background predictions yield Background.
GestureClass recording_prediction(const std::vector<std::vector<double>>& log_probs);

struct EvalResult {
    std::vector<double> per_model_accuracy;  // gesture recordings only
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    std::vector<std::array<std::array<int, 6>, 6>> confusion;  // [model][truth][pred]
};

EvalResult evaluate(const std::vector<GruModel>& models,
                    const std::vector<SequenceExample>& test_set);

void save_model(const std::string& path, const GruModel& model);
GruModel load_model(const std::string& path);

void write_history_csv(const std::string& path, const TrainHistory& history);

}  // namespace rafr
