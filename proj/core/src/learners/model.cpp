#include "cohort/learners/model.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "cohort/common/error.hpp"
#include "common/log.hpp"
#include "learners/training.hpp"

namespace cohort {

namespace detail {

Matrix svm_scores(const SvmState& state, const Matrix& x, int n_classes);

void check_training_input(const Matrix& x, const std::vector<int>& y, int n_classes) {
  if (x.rows() == 0) throw DataError("cannot train on zero rows");
  if (x.cols() == 0) throw DataError("cannot train on zero features");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw DataError("feature rows and labels differ in length");
  if (n_classes < 1) throw DataError("need at least one class");
  for (const int label : y) {
    if (label < 0 || label >= n_classes) throw DataError("label " + std::to_string(label) + " outside the class range");
  }
  if (!x.allFinite()) throw DataError("training features contain NaN or infinite values; impute first");
}

TrainedModel model_shell(const ModelSpec& spec, const Matrix& x, int n_classes) {
  TrainedModel m;
  m.spec = spec;
  m.n_features = static_cast<int>(x.cols());
  for (int c = 0; c < n_classes; ++c) m.classes.push_back(std::to_string(c));
  return m;
}

std::optional<TrainedModel> constant_if_degenerate(const ModelSpec& spec, const Matrix& x,
                                                   const std::vector<int>& y, int n_classes) {
  const std::set<int> distinct(y.begin(), y.end());
  if (distinct.size() >= 2) return std::nullopt;
  logger().warn("{} trained on a single class; using a constant model", to_string(spec.kind));
  auto m = model_shell(spec, x, n_classes);
  ConstantState state;
  state.scores.assign(static_cast<std::size_t>(n_classes), 0.0);
  state.scores[static_cast<std::size_t>(*distinct.begin())] = 1.0;
  m.state = std::move(state);
  return m;
}

}  // namespace detail

TrainedModel train_model(const ModelSpec& spec, const Matrix& x, const std::vector<int>& y, int n_classes) {
  switch (spec.kind) {
    case ModelKind::RandomForest: return train_random_forest(x, y, n_classes, spec);
    case ModelKind::GradientBoosting: return train_gradient_boosting(x, y, n_classes, spec);
    case ModelKind::SvmRbf: return train_svm_rbf(x, y, n_classes, spec);
    case ModelKind::Mlp: return train_mlp(x, y, n_classes, spec);
  }
  throw ConfigError("unknown model kind");
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void normalize_rows(Matrix& scores) {
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double total = scores.row(i).sum();
    if (total > 0.0) scores.row(i) /= total;
  }
}

}  // namespace

Matrix predict_scores(const TrainedModel& model, const Matrix& x) {
  if (x.cols() != model.n_features) {
    throw DataError("model expects " + std::to_string(model.n_features) + " features, got " + std::to_string(x.cols()));
  }
  const auto k = static_cast<Eigen::Index>(model.n_classes());
  Matrix scores = std::visit(
      Overloaded{
          [&](const ConstantState& s) {
            Matrix out(x.rows(), k);
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
              for (Eigen::Index c = 0; c < k; ++c) out(i, c) = s.scores[static_cast<std::size_t>(c)];
            }
            return out;
          },
          [&](const ForestState& s) {
            Matrix out = Matrix::Zero(x.rows(), k);
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
              for (const auto& tree : s.trees) out(i, static_cast<Eigen::Index>(tree.predict(x.row(i).data()))) += 1.0;
            }
            out /= static_cast<double>(s.trees.size());
            return out;
          },
          [&](const BoostingState& s) {
            Matrix m = boosting_margins(s, x);
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
              const double top = m.row(i).maxCoeff();
              m.row(i) = (m.row(i).array() - top).exp();
            }
            return m;
          },
          [&](const SvmState& s) { return detail::svm_scores(s, x, model.n_classes()); },
          [&](const MlpState& s) { return mlp_forward(s, x); },
      },
      model.state);
  normalize_rows(scores);
  return scores;
}

std::vector<int> argmax_rows(const Matrix& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
      if (scores(i, c) > scores(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict_labels(const TrainedModel& model, const Matrix& x) {
  return argmax_rows(predict_scores(model, x));
}

// ---------------------------------------------------------------------------
// Text dump

namespace {

constexpr std::string_view kMagic = "cohort-model";
constexpr int kVersion = 1;

class Writer {
 public:
  Writer& word(std::string_view w) {
    sep();
    out_ += w;
    return *this;
  }
  Writer& num(long long v) { return word(std::to_string(v)); }
  Writer& real(double v) {
    char buffer[64];
    const auto r = std::to_chars(buffer, buffer + sizeof(buffer), v, std::chars_format::hex);
    return word(std::string_view(buffer, static_cast<std::size_t>(r.ptr - buffer)));
  }
  Writer& newline() {
    out_ += '\n';
    fresh_ = true;
    return *this;
  }
  std::string take() { return std::move(out_); }

 private:
  void sep() {
    if (!fresh_) out_ += ' ';
    fresh_ = false;
  }
  std::string out_;
  bool fresh_ = true;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::string_view word() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) fail("unexpected end of model dump");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }
  void expect(std::string_view keyword) {
    const auto w = word();
    if (w != keyword) fail("expected '" + std::string(keyword) + "', found '" + std::string(w) + "'");
  }
  long long num() {
    const auto w = word();
    long long v = 0;
    const auto r = std::from_chars(w.data(), w.data() + w.size(), v);
    if (r.ec != std::errc() || r.ptr != w.data() + w.size()) fail("expected an integer, found '" + std::string(w) + "'");
    return v;
  }
  std::size_t count(long long limit = 100'000'000) {
    const long long v = num();
    if (v < 0 || v > limit) fail("count out of range");
    return static_cast<std::size_t>(v);
  }
  int index(long long lo, long long hi) {
    const long long v = num();
    if (v < lo || v > hi) fail("index " + std::to_string(v) + " out of range");
    return static_cast<int>(v);
  }
  double real() {
    auto w = word();
    bool negative = false;
    if (!w.empty() && w.front() == '-') {
      negative = true;
      w.remove_prefix(1);
    }
    double v = 0.0;
    const auto r = std::from_chars(w.data(), w.data() + w.size(), v, std::chars_format::hex);
    if (r.ec != std::errc() || r.ptr != w.data() + w.size()) fail("expected a hex float, found '" + std::string(w) + "'");
    return negative ? -v : v;
  }
  bool at_end() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_ >= text_.size();
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("model dump: " + what, line_); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

void write_tree(Writer& w, const DecisionTree& t) {
  w.word("tree").num(static_cast<long long>(t.nodes.size())).newline();
  for (const auto& n : t.nodes) w.num(n.feature).real(n.threshold).num(n.left).num(n.right).real(n.value).newline();
}

DecisionTree read_tree(Reader& r, int n_features) {
  r.expect("tree");
  DecisionTree t;
  const auto count = r.count();
  if (count == 0) r.fail("empty tree");
  const auto last = static_cast<long long>(count) - 1;
  for (std::size_t i = 0; i < count; ++i) {
    TreeNode n;
    n.feature = r.index(-1, n_features - 1);
    n.threshold = r.real();
    n.left = r.index(-1, last);
    n.right = r.index(-1, last);
    n.value = r.real();
    if (!n.is_leaf() && (n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i))) r.fail("tree children must follow their parent");
    t.nodes.push_back(n);
  }
  return t;
}

void write_matrix(Writer& w, const Matrix& m) {
  w.num(m.rows()).num(m.cols()).newline();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.real(m(i, j));
    w.newline();
  }
}

Matrix read_matrix(Reader& r) {
  const auto rows = r.count(), cols = r.count();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.real();
  }
  return m;
}

void write_params(Writer& w, const Hyperparameters& p) {
  w.word("params");
  w.word("trees").num(p.trees).word("max_features").num(p.max_features);
  w.word("estimators").num(p.estimators).word("max_depth").num(p.max_depth);
  w.word("learning_rate").real(p.learning_rate);
  w.word("gamma").real(p.gamma).word("c").real(p.c).word("tolerance").real(p.tolerance);
  w.word("max_iterations").num(p.max_iterations);
  w.word("layers").num(p.layers).word("units").num(p.units).word("dropout").real(p.dropout);
  w.word("epochs").num(p.epochs).word("batch_size").num(p.batch_size).newline();
}

Hyperparameters read_params(Reader& r) {
  Hyperparameters p;
  r.expect("params");
  r.expect("trees"); p.trees = static_cast<int>(r.num());
  r.expect("max_features"); p.max_features = static_cast<int>(r.num());
  r.expect("estimators"); p.estimators = static_cast<int>(r.num());
  r.expect("max_depth"); p.max_depth = static_cast<int>(r.num());
  r.expect("learning_rate"); p.learning_rate = r.real();
  r.expect("gamma"); p.gamma = r.real();
  r.expect("c"); p.c = r.real();
  r.expect("tolerance"); p.tolerance = r.real();
  r.expect("max_iterations"); p.max_iterations = r.num();
  r.expect("layers"); p.layers = static_cast<int>(r.num());
  r.expect("units"); p.units = static_cast<int>(r.num());
  r.expect("dropout"); p.dropout = r.real();
  r.expect("epochs"); p.epochs = static_cast<int>(r.num());
  r.expect("batch_size"); p.batch_size = static_cast<int>(r.num());
  return p;
}

}  // namespace

std::string save_model(const TrainedModel& model) {
  Writer w;
  w.word(kMagic).num(kVersion).newline();
  w.word("kind").word(to_string(model.spec.kind)).newline();
  w.word("seed").word(std::to_string(model.spec.seed)).newline();
  write_params(w, model.spec.params);
  w.word("features").num(model.n_features).newline();
  w.word("classes").num(model.n_classes());
  for (const auto& name : model.classes) {
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
      throw ValidationError("class name '" + name + "' cannot be saved (empty or contains whitespace)");
    }
    w.word(name);
  }
  w.newline();
  w.word("feature_names").num(static_cast<long long>(model.feature_names.size()));
  for (const auto& name : model.feature_names) {
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
      throw ValidationError("feature name '" + name + "' cannot be saved (empty or contains whitespace)");
    }
    w.word(name);
  }
  w.newline();

  std::visit(Overloaded{
                 [&](const ConstantState& s) {
                   w.word("state").word("constant").newline().word("scores").num(static_cast<long long>(s.scores.size()));
                   for (const double v : s.scores) w.real(v);
                   w.newline();
                 },
                 [&](const ForestState& s) {
                   w.word("state").word("forest").newline().word("trees").num(static_cast<long long>(s.trees.size())).newline();
                   for (const auto& t : s.trees) write_tree(w, t);
                 },
                 [&](const BoostingState& s) {
                   w.word("state").word("boosting").newline().word("initial").num(static_cast<long long>(s.initial.size()));
                   for (const double v : s.initial) w.real(v);
                   w.newline().word("stages").num(static_cast<long long>(s.stages.size())).newline();
                   for (std::size_t i = 0; i < s.stages.size(); ++i) {
                     w.word("stage").real(s.step[i]).newline();
                     for (const auto& t : s.stages[i]) write_tree(w, t);
                   }
                 },
                 [&](const SvmState& s) {
                   w.word("state").word("svm").newline().word("gamma").real(s.gamma).newline();
                   w.word("machines").num(static_cast<long long>(s.machines.size())).newline();
                   for (const auto& m : s.machines) {
                     w.word("machine").num(m.positive_class).real(m.rho).real(m.platt_a).real(m.platt_b).newline();
                     w.word("coef").num(static_cast<long long>(m.coef.size()));
                     for (const double v : m.coef) w.real(v);
                     w.newline().word("support");
                     write_matrix(w, m.support_vectors);
                   }
                 },
                 [&](const MlpState& s) {
                   w.word("state").word("mlp").newline().word("layers").num(static_cast<long long>(s.weights.size())).newline();
                   for (std::size_t l = 0; l < s.weights.size(); ++l) {
                     w.word("weights");
                     write_matrix(w, s.weights[l]);
                     w.word("bias").num(s.biases[l].size());
                     for (Eigen::Index j = 0; j < s.biases[l].size(); ++j) w.real(s.biases[l](j));
                     w.newline();
                   }
                 },
             },
             model.state);
  w.word("end").newline();
  return w.take();
}

TrainedModel load_model(std::string_view text) {
  Reader r(text);
  r.expect(kMagic);
  if (r.num() != kVersion) r.fail("unsupported model dump version");
  TrainedModel m;
  r.expect("kind");
  try {
    m.spec.kind = parse_model_kind(r.word());
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
  r.expect("seed");
  {
    const auto w = r.word();
    const auto res = std::from_chars(w.data(), w.data() + w.size(), m.spec.seed);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size()) r.fail("bad seed");
  }
  m.spec.params = read_params(r);
  r.expect("features");
  m.n_features = static_cast<int>(r.count());
  r.expect("classes");
  const auto k = r.count(1000);
  for (std::size_t c = 0; c < k; ++c) m.classes.emplace_back(r.word());
  const int n_classes = static_cast<int>(k);
  r.expect("feature_names");
  const auto named = r.count();
  if (named != 0 && named != static_cast<std::size_t>(m.n_features)) r.fail("feature name count does not match features");
  for (std::size_t c = 0; c < named; ++c) m.feature_names.emplace_back(r.word());

  r.expect("state");
  const auto kind = r.word();
  if (kind == "constant") {
    ConstantState s;
    r.expect("scores");
    if (r.count() != k) r.fail("score count does not match classes");
    for (std::size_t c = 0; c < k; ++c) s.scores.push_back(r.real());
    m.state = std::move(s);
  } else if (kind == "forest") {
    ForestState s;
    r.expect("trees");
    const auto count = r.count();
    for (std::size_t t = 0; t < count; ++t) {
      s.trees.push_back(read_tree(r, m.n_features));
      for (const auto& node : s.trees.back().nodes) {
        if (node.is_leaf() && (node.value < 0 || node.value >= n_classes)) r.fail("forest leaf class out of range");
      }
    }
    m.state = std::move(s);
  } else if (kind == "boosting") {
    BoostingState s;
    r.expect("initial");
    if (r.count() != k) r.fail("initial margin count does not match classes");
    for (std::size_t c = 0; c < k; ++c) s.initial.push_back(r.real());
    r.expect("stages");
    const auto stages = r.count();
    for (std::size_t i = 0; i < stages; ++i) {
      r.expect("stage");
      s.step.push_back(r.real());
      std::vector<DecisionTree> trees;
      for (std::size_t c = 0; c < k; ++c) trees.push_back(read_tree(r, m.n_features));
      s.stages.push_back(std::move(trees));
    }
    m.state = std::move(s);
  } else if (kind == "svm") {
    SvmState s;
    r.expect("gamma");
    s.gamma = r.real();
    r.expect("machines");
    const auto machines = r.count(1000);
    for (std::size_t i = 0; i < machines; ++i) {
      BinarySvm b;
      r.expect("machine");
      b.positive_class = r.index(0, n_classes - 1);
      b.rho = r.real();
      b.platt_a = r.real();
      b.platt_b = r.real();
      r.expect("coef");
      const auto nc = r.count();
      for (std::size_t j = 0; j < nc; ++j) b.coef.push_back(r.real());
      r.expect("support");
      b.support_vectors = read_matrix(r);
      if (static_cast<std::size_t>(b.support_vectors.rows()) != nc || b.support_vectors.cols() != m.n_features) {
        r.fail("support vector shape mismatch");
      }
      s.machines.push_back(std::move(b));
    }
    m.state = std::move(s);
  } else if (kind == "mlp") {
    MlpState s;
    r.expect("layers");
    const auto layers = r.count(1000);
    Eigen::Index fan_in = m.n_features;
    for (std::size_t l = 0; l < layers; ++l) {
      r.expect("weights");
      Matrix w = read_matrix(r);
      if (w.rows() != fan_in) r.fail("layer shape mismatch");
      r.expect("bias");
      if (static_cast<Eigen::Index>(r.count()) != w.cols()) r.fail("bias length mismatch");
      Vector b(w.cols());
      for (Eigen::Index j = 0; j < b.size(); ++j) b(j) = r.real();
      fan_in = w.cols();
      s.weights.push_back(std::move(w));
      s.biases.push_back(std::move(b));
    }
    if (layers == 0 || fan_in != n_classes) r.fail("output layer does not match classes");
    m.state = std::move(s);
  } else {
    r.fail("unknown state kind '" + std::string(kind) + "'");
  }
  r.expect("end");
  if (!r.at_end()) r.fail("trailing content after 'end'");
  return m;
}

}  // namespace cohort
