#include "cohort/learners/mlp.hpp"

#include <cmath>
#include <numeric>

#include "cohort/common/error.hpp"
#include "cohort/common/rng.hpp"
#include "cohort/learners/model.hpp"
#include "learners/training.hpp"

namespace cohort {

bool MlpState::operator==(const MlpState& o) const {
  if (weights.size() != o.weights.size() || biases.size() != o.biases.size()) return false;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != o.weights[l].rows() || weights[l].cols() != o.weights[l].cols()) return false;
    if (weights[l] != o.weights[l]) return false;
  }
  for (std::size_t l = 0; l < biases.size(); ++l) {
    if (biases[l].size() != o.biases[l].size() || biases[l] != o.biases[l]) return false;
  }
  return true;
}

MlpState init_mlp(int inputs, int outputs, int layers, int units, std::uint64_t seed) {
  Rng rng(seed);
  MlpState s;
  int fan_in = inputs;
  for (int l = 0; l <= layers; ++l) {
    const int fan_out = l == layers ? outputs : units;
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_in, fan_out);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-limit, limit);
    }
    s.weights.push_back(std::move(w));
    s.biases.push_back(Vector::Zero(fan_out));
    fan_in = fan_out;
  }
  return s;
}

namespace {

void softmax_in_place(Matrix& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double top = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - top).exp();
    z.row(i) /= z.row(i).sum();
  }
}

struct Pass {
  /// activations[0] is the input; activations[l + 1] the (post-dropout)
  /// output of layer l; the last entry holds the softmax probabilities.
  std::vector<Matrix> activations;
  std::vector<Matrix> masks;
};

Pass forward(const MlpState& s, const Matrix& x, double dropout, Rng* rng) {
  Pass p;
  p.activations.push_back(x);
  const std::size_t hidden = s.weights.size() - 1;
  for (std::size_t l = 0; l < s.weights.size(); ++l) {
    Matrix z = p.activations.back() * s.weights[l];
    z.rowwise() += s.biases[l].transpose();
    if (l < hidden) {
      z = z.array().tanh().matrix();
      if (rng && dropout > 0.0) {
        Matrix mask(z.rows(), z.cols());
        const double keep = 1.0 - dropout;
        for (Eigen::Index r = 0; r < mask.rows(); ++r) {
          for (Eigen::Index c = 0; c < mask.cols(); ++c) mask(r, c) = rng->uniform() < keep ? 1.0 / keep : 0.0;
        }
        z = z.cwiseProduct(mask);
        p.masks.push_back(std::move(mask));
      } else {
        p.masks.emplace_back();
      }
    } else {
      softmax_in_place(z);
    }
    p.activations.push_back(std::move(z));
  }
  return p;
}

double cross_entropy(const Matrix& probs, std::span<const int> y) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    loss -= std::log(std::max(probs(i, y[static_cast<std::size_t>(i)]), 1e-300));
  }
  return loss / static_cast<double>(probs.rows());
}

// Gradient of the mean cross-entropy for a recorded forward pass.
void backward(const MlpState& s, const Pass& p, std::span<const int> y, MlpState& grad) {
  const std::size_t layers = s.weights.size();
  grad.weights.resize(layers);
  grad.biases.resize(layers);
  Matrix delta = p.activations.back();
  for (Eigen::Index i = 0; i < delta.rows(); ++i) delta(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  delta /= static_cast<double>(delta.rows());
  for (std::size_t l = layers; l-- > 0;) {
    grad.weights[l] = p.activations[l].transpose() * delta;
    grad.biases[l] = delta.colwise().sum().transpose();
    if (l == 0) break;
    Matrix back = delta * s.weights[l].transpose();
    const Matrix& mask = p.masks[l - 1];
    const Matrix& a = p.activations[l];
    if (mask.size() > 0) {
      // a = tanh(z) * mask, so da/dz = mask * (1 - tanh^2) = mask - a^2 / mask on kept units.
      Matrix t = a;
      for (Eigen::Index r = 0; r < t.rows(); ++r) {
        for (Eigen::Index c = 0; c < t.cols(); ++c) {
          const double m = mask(r, c);
          const double h = m > 0.0 ? a(r, c) / m : 0.0;
          t(r, c) = m * (1.0 - h * h);
        }
      }
      delta = back.cwiseProduct(t);
    } else {
      delta = back.cwiseProduct((1.0 - a.array().square()).matrix());
    }
  }
}

}  // namespace

Matrix mlp_forward(const MlpState& state, const Matrix& x) {
  return std::move(forward(state, x, 0.0, nullptr).activations.back());
}

double mlp_loss_and_gradient(const MlpState& state, const Matrix& x, const std::vector<int>& y, MlpState* gradient) {
  const Pass p = forward(state, x, 0.0, nullptr);
  if (gradient) backward(state, p, y, *gradient);
  return cross_entropy(p.activations.back(), y);
}

TrainedModel train_mlp(const Matrix& x, const std::vector<int>& y, int n_classes, const ModelSpec& spec,
                       MlpDiagnostics* diagnostics) {
  validate(spec);
  detail::check_training_input(x, y, n_classes);
  if (auto constant = detail::constant_if_degenerate(spec, x, y, n_classes)) return *constant;

  const auto& p = spec.params;
  MlpState state = init_mlp(static_cast<int>(x.cols()), n_classes, p.layers, p.units, derive_seed(spec.seed, 0));
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  MlpState m1, m2, grad;
  for (std::size_t l = 0; l < state.weights.size(); ++l) {
    m1.weights.push_back(Matrix::Zero(state.weights[l].rows(), state.weights[l].cols()));
    m1.biases.push_back(Vector::Zero(state.biases[l].size()));
  }
  m2 = m1;

  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(derive_seed(spec.seed, 1));
  Rng dropout_rng(derive_seed(spec.seed, 2));
  const auto batch = static_cast<std::size_t>(p.batch_size);
  long step = 0;
  MlpDiagnostics diag;

  Matrix xb;
  std::vector<int> yb;
  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      xb.resize(static_cast<Eigen::Index>(end - start), x.cols());
      yb.resize(end - start);
      for (std::size_t i = start; i < end; ++i) {
        xb.row(static_cast<Eigen::Index>(i - start)) = x.row(static_cast<Eigen::Index>(order[i]));
        yb[i - start] = y[order[i]];
      }
      const Pass pass = forward(state, xb, p.dropout, &dropout_rng);
      const double loss = cross_entropy(pass.activations.back(), yb);
      if (!std::isfinite(loss)) {
        throw NumericError("MLP training diverged (loss " + std::to_string(loss) + " at epoch " +
                           std::to_string(epoch) + "); try a lower learning_rate");
      }
      epoch_loss += loss;
      ++batches;
      backward(state, pass, yb, grad);

      ++step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      const double lr = p.learning_rate;
      auto adam = [&](auto& param, auto& g, auto& a, auto& b) {
        a = kBeta1 * a + (1.0 - kBeta1) * g;
        b = kBeta2 * b + (1.0 - kBeta2) * g.cwiseProduct(g);
        param.array() -= lr * (a.array() / c1) / ((b.array() / c2).sqrt() + kEps);
      };
      for (std::size_t l = 0; l < state.weights.size(); ++l) {
        adam(state.weights[l], grad.weights[l], m1.weights[l], m2.weights[l]);
        adam(state.biases[l], grad.biases[l], m1.biases[l], m2.biases[l]);
      }
    }
    diag.epoch_loss.push_back(batches ? epoch_loss / static_cast<double>(batches) : 0.0);
  }
  if (diagnostics) *diagnostics = std::move(diag);

  auto model = detail::model_shell(spec, x, n_classes);
  model.state = std::move(state);
  return model;
}

}  // namespace cohort
