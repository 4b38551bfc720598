#pragma once

#include <cstdint>
#include <vector>

#include "cohort/common/matrix.hpp"
#include "cohort/learners/spec.hpp"

namespace cohort {

struct TrainedModel;

/// Fully connected tanh network with a softmax output. weights[l] is
/// fan_in x fan_out; the last layer is the output layer.
struct MlpState {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  bool operator==(const MlpState& o) const;
};

struct MlpDiagnostics {
  /// Mean mini-batch loss of each epoch (with dropout active).
  std::vector<double> epoch_loss;
};

/// Glorot-uniform weights, zero biases.
MlpState init_mlp(int inputs, int outputs, int layers, int units, std::uint64_t seed);

/// Softmax outputs (n x K) without dropout.
Matrix mlp_forward(const MlpState& state, const Matrix& x);

/// Mean cross-entropy over the rows and its gradient, without dropout.
double mlp_loss_and_gradient(const MlpState& state, const Matrix& x, const std::vector<int>& y, MlpState* gradient);

/// Adam on mini-batches with inverted dropout after every hidden layer.
/// Throws NumericError if the loss becomes NaN or infinite.
TrainedModel train_mlp(const Matrix& x, const std::vector<int>& y, int n_classes, const ModelSpec& spec,
                       MlpDiagnostics* diagnostics = nullptr);

}  // namespace cohort
