#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pachner/dataset.hpp"
#include "pachner/error.hpp"

namespace pachner {

struct MLPConfig {
  std::vector<std::size_t> hidden{256, 128, 64};
  std::size_t outputs = 2;
  double leaky_slope = 0.01;
  double dropout = 0.01;
  double l2 = 1e-4;
  double learning_rate = 0.001;
  std::size_t batch_size = 64;
  std::size_t epochs = 30;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const {
    for (std::size_t h : hidden)
      if (h == 0) throw Error("MLPConfig: layer sizes must be positive");
    if (outputs < 2) throw Error("MLPConfig: need at least two outputs");
    if (leaky_slope < 0 || leaky_slope >= 1) throw Error("MLPConfig: leaky_slope must be in [0,1)");
    if (dropout < 0 || dropout >= 1) throw Error("MLPConfig: dropout must be in [0,1)");
    if (l2 < 0) throw Error("MLPConfig: l2 must be non-negative");
    if (learning_rate <= 0) throw Error("MLPConfig: learning_rate must be positive");
    if (batch_size == 0) throw Error("MLPConfig: batch_size must be positive");
    if (beta1 <= 0 || beta1 >= 1 || beta2 <= 0 || beta2 >= 1) throw Error("MLPConfig: Adam betas must be in (0,1)");
    if (epsilon <= 0) throw Error("MLPConfig: epsilon must be positive");
  }

  friend bool operator==(const MLPConfig&, const MLPConfig&) = default;
};

inline void to_json(nlohmann::json& j, const MLPConfig& c) {
  j = {{"hidden", c.hidden},         {"outputs", c.outputs},       {"leaky_slope", c.leaky_slope},
       {"dropout", c.dropout},       {"l2", c.l2},                 {"learning_rate", c.learning_rate},
       {"batch_size", c.batch_size}, {"epochs", c.epochs},         {"beta1", c.beta1},
       {"beta2", c.beta2},           {"epsilon", c.epsilon},       {"seed", c.seed}};
}

// Missing keys keep their defaults; unknown keys are rejected.
inline void from_json(const nlohmann::json& j, MLPConfig& c) {
  if (!j.is_object()) throw Error("MLPConfig: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    if (k == "hidden") c.hidden = v.get<std::vector<std::size_t>>();
    else if (k == "outputs") c.outputs = v.get<std::size_t>();
    else if (k == "leaky_slope") c.leaky_slope = v.get<double>();
    else if (k == "dropout") c.dropout = v.get<double>();
    else if (k == "l2") c.l2 = v.get<double>();
    else if (k == "learning_rate") c.learning_rate = v.get<double>();
    else if (k == "batch_size") c.batch_size = v.get<std::size_t>();
    else if (k == "epochs") c.epochs = v.get<std::size_t>();
    else if (k == "beta1") c.beta1 = v.get<double>();
    else if (k == "beta2") c.beta2 = v.get<double>();
    else if (k == "epsilon") c.epsilon = v.get<double>();
    else if (k == "seed") c.seed = v.get<std::uint64_t>();
    else throw Error("MLPConfig: unknown key '" + k + "'");
  }
}

struct DenseLayer {
  std::size_t in = 0, out = 0;
  std::vector<double> w;  // out x in, row-major
  std::vector<double> b;

  double& at(std::size_t o, std::size_t i) { return w[o * in + i]; }
  double at(std::size_t o, std::size_t i) const { return w[o * in + i]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0, train_accuracy = 0;
  double val_loss = 0, val_accuracy = 0;  // NaN when no validation split

  friend bool operator==(const EpochStats& a, const EpochStats& b) {
    auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return a.epoch == b.epoch && same(a.train_loss, b.train_loss) && same(a.train_accuracy, b.train_accuracy) &&
           same(a.val_loss, b.val_loss) && same(a.val_accuracy, b.val_accuracy);
  }
};

/// A network input: either a dense vector, or the positions of the ones of a
/// binary vector.
struct Input {
  std::span<const double> dense;
  std::span<const std::uint32_t> active;

  static Input from_dense(std::span<const double> x) { return {x, {}}; }
  static Input from_active(std::span<const std::uint32_t> a) { return {{}, a}; }
};

class MLPModel {
 public:
  MLPConfig config;
  std::size_t input_dim = 0;
  std::vector<DenseLayer> layers;
  std::vector<EpochStats> history;

  /// He-uniform weights (limit sqrt(6 / fan_in)), zero biases.
  static MLPModel initialise(std::size_t input_dim, const MLPConfig& config) {
    config.validate();
    if (input_dim == 0) throw Error("MLPModel: input dimension must be positive");
    MLPModel m;
    m.config = config;
    m.input_dim = input_dim;
    Rng rng = Rng(config.seed).split("init");
    std::size_t prev = input_dim;
    std::vector<std::size_t> sizes = config.hidden;
    sizes.push_back(config.outputs);
    for (std::size_t s : sizes) {
      DenseLayer l{prev, s, std::vector<double>(prev * s), std::vector<double>(s, 0.0)};
      const double limit = std::sqrt(6.0 / static_cast<double>(prev));
      for (double& x : l.w) x = (2.0 * rng.uniform() - 1.0) * limit;
      m.layers.push_back(std::move(l));
      prev = s;
    }
    return m;
  }

  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.w.size() + l.b.size();
    return n;
  }

  friend bool operator==(const MLPModel&, const MLPModel&) = default;
};

inline double leaky_relu(double x, double slope) { return x > 0 ? x : slope * x; }

namespace detail {

struct Trace {
  std::vector<std::vector<double>> z;     // pre-activations per layer
  std::vector<std::vector<double>> a;     // post-activation (and dropout) per hidden layer
  std::vector<std::vector<double>> mask;  // dropout scale per hidden unit, empty when off
  std::vector<double> prob;
};

inline void check_input(const MLPModel& m, const Input& x) {
  if (m.layers.empty()) throw Error("forward: model has no layers");
  if (!x.dense.empty()) {
    if (x.dense.size() != m.input_dim)
      throw Error("forward: input has dimension " + std::to_string(x.dense.size()) + ", model expects " +
                  std::to_string(m.input_dim));
  } else {
    for (std::uint32_t i : x.active)
      if (i >= m.input_dim) throw Error("forward: active input index out of range");
  }
}

inline void softmax(std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double s = 0;
  for (double& x : v) s += (x = std::exp(x - mx));
  for (double& x : v) x /= s;
}

// Forward pass; `dropout_rng` non-null enables dropout.
inline void forward(const MLPModel& m, const Input& x, Rng* dropout_rng, Trace& t) {
  const std::size_t L = m.layers.size();
  t.z.resize(L);
  t.a.resize(L - 1);
  t.mask.resize(L - 1);
  for (std::size_t l = 0; l < L; ++l) {
    const DenseLayer& layer = m.layers[l];
    auto& z = t.z[l];
    z.assign(layer.b.begin(), layer.b.end());
    if (l == 0) {
      if (!x.dense.empty()) {
        for (std::size_t o = 0; o < layer.out; ++o) {
          const double* row = &layer.w[o * layer.in];
          double s = 0;
          for (std::size_t i = 0; i < layer.in; ++i) s += row[i] * x.dense[i];
          z[o] += s;
        }
      } else {
        for (std::size_t o = 0; o < layer.out; ++o) {
          const double* row = &layer.w[o * layer.in];
          for (std::uint32_t i : x.active) z[o] += row[i];
        }
      }
    } else {
      const auto& prev = t.a[l - 1];
      for (std::size_t o = 0; o < layer.out; ++o) {
        const double* row = &layer.w[o * layer.in];
        double s = 0;
        for (std::size_t i = 0; i < layer.in; ++i) s += row[i] * prev[i];
        z[o] += s;
      }
    }
    if (l + 1 < L) {
      auto& a = t.a[l];
      a.resize(layer.out);
      for (std::size_t o = 0; o < layer.out; ++o) a[o] = leaky_relu(z[o], m.config.leaky_slope);
      auto& mask = t.mask[l];
      mask.clear();
      if (dropout_rng && m.config.dropout > 0) {
        mask.resize(layer.out);
        const double keep = 1.0 - m.config.dropout;
        for (std::size_t o = 0; o < layer.out; ++o) {
          mask[o] = dropout_rng->uniform() < m.config.dropout ? 0.0 : 1.0 / keep;
          a[o] *= mask[o];
        }
      }
    }
  }
  t.prob = t.z.back();
  softmax(t.prob);
}

// Backpropagates d(objective)/d(logits) through the trace.  Accumulates
// parameter gradients into `grads` if non-null and returns d/d(input) if asked.
inline void backward(const MLPModel& m, const Input& x, const Trace& t, std::vector<double> delta,
                     std::vector<DenseLayer>* grads, std::vector<double>* input_grad) {
  for (std::size_t l = m.layers.size(); l-- > 0;) {
    const DenseLayer& layer = m.layers[l];
    if (grads) {
      DenseLayer& g = (*grads)[l];
      for (std::size_t o = 0; o < layer.out; ++o) {
        g.b[o] += delta[o];
        if (delta[o] == 0) continue;
        double* row = &g.w[o * layer.in];
        if (l > 0) {
          const auto& prev = t.a[l - 1];
          for (std::size_t i = 0; i < layer.in; ++i) row[i] += delta[o] * prev[i];
        } else if (!x.dense.empty()) {
          for (std::size_t i = 0; i < layer.in; ++i) row[i] += delta[o] * x.dense[i];
        } else {
          for (std::uint32_t i : x.active) row[i] += delta[o];
        }
      }
    }
    if (l == 0 && !input_grad) break;
    std::vector<double> prev_delta(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      if (delta[o] == 0) continue;
      const double* row = &layer.w[o * layer.in];
      for (std::size_t i = 0; i < layer.in; ++i) prev_delta[i] += row[i] * delta[o];
    }
    if (l == 0) {
      *input_grad = std::move(prev_delta);
      break;
    }
    const auto& zprev = t.z[l - 1];
    const auto& mask = t.mask[l - 1];
    for (std::size_t i = 0; i < layer.in; ++i) {
      double d = prev_delta[i] * (zprev[i] > 0 ? 1.0 : m.config.leaky_slope);
      if (!mask.empty()) d *= mask[i];
      prev_delta[i] = d;
    }
    delta = std::move(prev_delta);
  }
}

inline std::vector<DenseLayer> zero_like(const std::vector<DenseLayer>& layers) {
  std::vector<DenseLayer> g;
  for (const auto& l : layers)
    g.push_back({l.in, l.out, std::vector<double>(l.w.size(), 0.0), std::vector<double>(l.b.size(), 0.0)});
  return g;
}

}  // namespace detail

/// Class probabilities; dropout is only applied when `rng` is given.
inline std::vector<double> forward(const MLPModel& m, const Input& x, Rng* dropout_rng = nullptr) {
  detail::check_input(m, x);
  detail::Trace t;
  detail::forward(m, x, dropout_rng, t);
  return t.prob;
}

inline std::vector<double> forward(const MLPModel& m, std::span<const double> x) {
  return forward(m, Input::from_dense(x));
}

/// Mean cross-entropy over the batch plus l2 * sum of squared weights.
inline double loss(const MLPModel& m, const std::vector<Input>& xs, const std::vector<int>& labels) {
  if (xs.size() != labels.size() || xs.empty()) throw Error("loss: inputs and labels must be non-empty and aligned");
  double ce = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) ce -= std::log(forward(m, xs[i])[labels[i]]);
  double reg = 0;
  for (const auto& l : m.layers)
    for (double w : l.w) reg += w * w;
  return ce / static_cast<double>(xs.size()) + m.config.l2 * reg;
}

/// Gradient of loss() with respect to every weight and bias (dropout off).
inline std::vector<DenseLayer> loss_gradient(const MLPModel& m, const std::vector<Input>& xs,
                                             const std::vector<int>& labels) {
  if (xs.size() != labels.size() || xs.empty()) throw Error("loss_gradient: inputs and labels must be non-empty and aligned");
  auto grads = detail::zero_like(m.layers);
  detail::Trace t;
  const double scale = 1.0 / static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    detail::check_input(m, xs[i]);
    detail::forward(m, xs[i], nullptr, t);
    std::vector<double> delta = t.prob;
    delta[labels[i]] -= 1.0;
    for (double& d : delta) d *= scale;
    detail::backward(m, xs[i], t, std::move(delta), &grads, nullptr);
  }
  for (std::size_t l = 0; l < m.layers.size(); ++l)
    for (std::size_t k = 0; k < m.layers[l].w.size(); ++k) grads[l].w[k] += 2.0 * m.config.l2 * m.layers[l].w[k];
  return grads;
}

/// d prob[cls] / d input, dense, dropout off.
inline std::vector<double> input_gradient(const MLPModel& m, const Input& x, std::size_t cls) {
  detail::check_input(m, x);
  if (cls >= m.output_dim()) throw Error("input_gradient: class out of range");
  detail::Trace t;
  detail::forward(m, x, nullptr, t);
  // Softmax Jacobian row: dp_c/dz_k = p_c (delta_ck - p_k).
  std::vector<double> delta(t.prob.size());
  for (std::size_t k = 0; k < delta.size(); ++k) delta[k] = t.prob[cls] * ((k == cls ? 1.0 : 0.0) - t.prob[k]);
  std::vector<double> g;
  detail::backward(m, x, t, std::move(delta), nullptr, &g);
  return g;
}

struct Evaluation {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;  // class 1 is positive
  double accuracy = 0.0;
  double mcc = 0.0;
  double loss = 0.0;
};

inline Evaluation evaluation_from_confusion(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
  Evaluation e{tp, tn, fp, fn};
  const double total = static_cast<double>(tp + tn + fp + fn);
  e.accuracy = total > 0 ? static_cast<double>(tp + tn) / total : 0.0;
  const double d = static_cast<double>(tp + fp) * static_cast<double>(tp + fn) * static_cast<double>(tn + fp) *
                   static_cast<double>(tn + fn);
  e.mcc = d > 0 ? (static_cast<double>(tp) * tn - static_cast<double>(fp) * fn) / std::sqrt(d) : 0.0;
  return e;
}

inline Evaluation evaluate(const MLPModel& m, const BinaryDataset& ds, const std::vector<std::size_t>& idx) {
  if (idx.empty()) throw Error("evaluate: empty test split");
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  double ce = 0;
  for (std::size_t i : idx) {
    const auto active = one_hot_indices(ds.samples[i].isosig, ds.length);
    const auto p = forward(m, Input::from_active(active));
    const int pred = p[1] > p[0] ? 1 : 0;
    const int y = ds.samples[i].label;
    ce -= std::log(std::max(p[y], 1e-300));
    if (pred == 1) (y == 1 ? tp : fp)++;
    else (y == 0 ? tn : fn)++;
  }
  Evaluation e = evaluation_from_confusion(tp, tn, fp, fn);
  e.loss = ce / static_cast<double>(idx.size());
  return e;
}

/// Mini-batch Adam on cross-entropy + L2.  `val_idx` may be empty.
inline MLPModel train(const BinaryDataset& ds, const std::vector<std::size_t>& train_idx,
                      const std::vector<std::size_t>& val_idx, const MLPConfig& config) {
  if (train_idx.empty()) throw Error("train: empty training split");
  MLPModel m = MLPModel::initialise(ds.input_dim(), config);
  if (m.output_dim() != 2) throw Error("train: binary datasets need two outputs");
  Rng root(config.seed);
  Rng shuffle_rng = root.split("shuffle");
  Rng dropout_rng = root.split("dropout");

  std::vector<std::vector<std::uint32_t>> encoded(ds.samples.size());
  for (std::size_t i : train_idx) encoded[i] = one_hot_indices(ds.samples[i].isosig, ds.length);

  auto m1 = detail::zero_like(m.layers), m2 = detail::zero_like(m.layers);
  auto grads = detail::zero_like(m.layers);
  std::size_t step = 0;
  std::vector<std::size_t> order = train_idx;
  detail::Trace t;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order.begin(), order.end());
    double loss_sum = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      for (auto& g : grads) {
        std::fill(g.w.begin(), g.w.end(), 0.0);
        std::fill(g.b.begin(), g.b.end(), 0.0);
      }
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        const Input x = Input::from_active(encoded[i]);
        detail::forward(m, x, &dropout_rng, t);
        const int y = ds.samples[i].label;
        loss_sum -= std::log(std::max(t.prob[y], 1e-300));
        if ((t.prob[1] > t.prob[0] ? 1 : 0) == y) ++correct;
        std::vector<double> delta = t.prob;
        delta[y] -= 1.0;
        for (double& d : delta) d *= scale;
        detail::backward(m, x, t, std::move(delta), &grads, nullptr);
      }
      ++step;
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      auto adam = [&](std::vector<double>& p, std::vector<double>& g, std::vector<double>& mm, std::vector<double>& vv,
                      bool decay) {
        for (std::size_t k = 0; k < p.size(); ++k) {
          const double gk = g[k] + (decay ? 2.0 * config.l2 * p[k] : 0.0);
          mm[k] = config.beta1 * mm[k] + (1 - config.beta1) * gk;
          vv[k] = config.beta2 * vv[k] + (1 - config.beta2) * gk * gk;
          p[k] -= config.learning_rate * (mm[k] / c1) / (std::sqrt(vv[k] / c2) + config.epsilon);
        }
      };
      for (std::size_t l = 0; l < m.layers.size(); ++l) {
        adam(m.layers[l].w, grads[l].w, m1[l].w, m2[l].w, true);
        adam(m.layers[l].b, grads[l].b, m1[l].b, m2[l].b, false);
      }
    }
    EpochStats s;
    s.epoch = epoch;
    s.train_loss = loss_sum / static_cast<double>(order.size());
    s.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    if (!std::isfinite(s.train_loss)) throw Error("train: loss diverged in epoch " + std::to_string(epoch));
    s.val_loss = s.val_accuracy = std::nan("");
    if (!val_idx.empty()) {
      const Evaluation e = evaluate(m, ds, val_idx);
      s.val_loss = e.loss;
      s.val_accuracy = e.accuracy;
    }
    m.history.push_back(s);
  }
  return m;
}

struct FoldResult {
  std::size_t fold = 0;
  std::uint64_t seed = 0;
  Evaluation test;
  MLPModel model;
};

struct CrossValidation {
  std::vector<FoldResult> folds;
  double accuracy_mean = 0, accuracy_std = 0;
  double mcc_mean = 0, mcc_std = 0;
};

/// Trains one model per fold (that fold held out).  Each fold uses its own
/// seed derived from config.seed, so results do not depend on `jobs`.
inline CrossValidation cross_validate(const BinaryDataset& ds, const MLPConfig& config, unsigned jobs = 1) {
  const std::size_t k = ds.folds.size();
  if (k < 2) throw Error("cross_validate: need at least two folds");
  CrossValidation cv;
  cv.folds.resize(k);
  auto run = [&](std::size_t f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < k; ++g)
      if (g != f) train_idx.insert(train_idx.end(), ds.folds[g].begin(), ds.folds[g].end());
    std::sort(train_idx.begin(), train_idx.end());
    MLPConfig c = config;
    c.seed = Rng(config.seed).split(static_cast<std::uint64_t>(f)).seed();
    FoldResult& r = cv.folds[f];
    r.fold = f;
    r.seed = c.seed;
    try {
      r.model = train(ds, train_idx, ds.folds[f], c);
    } catch (const Error& e) {
      throw Error("fold " + std::to_string(f) + ": " + e.what());
    }
    r.test = evaluate(r.model, ds, ds.folds[f]);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(k)));
  if (jobs == 1) {
    for (std::size_t f = 0; f < k; ++f) run(f);
  } else {
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        try {
          for (std::size_t f = w; f < k; f += jobs) run(f);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : workers) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  auto stats = [&](auto get, double& mean, double& sd) {
    mean = 0;
    for (const auto& r : cv.folds) mean += get(r);
    mean /= static_cast<double>(k);
    sd = 0;
    for (const auto& r : cv.folds) sd += (get(r) - mean) * (get(r) - mean);
    sd = std::sqrt(sd / static_cast<double>(k));
  };
  stats([](const FoldResult& r) { return r.test.accuracy; }, cv.accuracy_mean, cv.accuracy_std);
  stats([](const FoldResult& r) { return r.test.mcc; }, cv.mcc_mean, cv.mcc_std);
  return cv;
}

struct SaliencyReport {
  std::size_t length = 0;
  double threshold = 1e-4;
  std::vector<std::array<double, kAlphabetSize>> matrix;  // length rows x 64, max-normalised
  std::array<std::size_t, kAlphabetSize> letter_histogram{};  // entries above threshold per alphabet index
  std::vector<std::size_t> position_histogram;                 // entries above threshold per position
};

/// Mean absolute gradient of the predicted-class probability with respect to
/// every one-hot input, over all test inputs of all models, max-normalised.
inline SaliencyReport gradient_saliency(const std::vector<const MLPModel*>& models,
                                        const std::vector<std::vector<std::string>>& test_sets, std::size_t length,
                                        double threshold = 1e-4) {
  if (models.empty()) throw Error("gradient_saliency: no models");
  if (models.size() != test_sets.size()) throw Error("gradient_saliency: one test set per model is required");
  const std::size_t dim = kAlphabetSize * length;
  std::vector<double> acc(dim, 0.0);
  std::size_t count = 0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const MLPModel& m = *models[k];
    if (m.input_dim != dim) throw Error("gradient_saliency: model input dimension does not match length");
    for (const auto& s : test_sets[k]) {
      const auto active = one_hot_indices(s, length);
      const Input x = Input::from_active(active);
      const auto p = forward(m, x);
      const std::size_t cls = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
      const auto g = input_gradient(m, x, cls);
      for (std::size_t i = 0; i < dim; ++i) acc[i] += std::abs(g[i]);
      ++count;
    }
  }
  if (count == 0) throw Error("gradient_saliency: no test inputs");
  const double mx = *std::max_element(acc.begin(), acc.end());
  SaliencyReport r;
  r.length = length;
  r.threshold = threshold;
  r.matrix.assign(length, {});
  r.position_histogram.assign(length, 0);
  for (std::size_t b = 0; b < length; ++b)
    for (std::size_t c = 0; c < kAlphabetSize; ++c) {
      const double v = mx > 0 ? acc[b * kAlphabetSize + c] / mx : 0.0;
      r.matrix[b][c] = v;
      if (v > threshold) {
        ++r.letter_histogram[c];
        ++r.position_histogram[b];
      }
    }
  return r;
}

inline nlohmann::json model_to_json(const MLPModel& m) {
  nlohmann::json j;
  j["format"] = "pachner-mlp";
  j["version"] = 1;
  j["config"] = m.config;
  j["input_dim"] = m.input_dim;
  j["layers"] = nlohmann::json::array();
  for (const auto& l : m.layers) j["layers"].push_back({{"in", l.in}, {"out", l.out}, {"w", l.w}, {"b", l.b}});
  j["history"] = nlohmann::json::array();
  for (const auto& s : m.history) {
    auto num = [](double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); };
    j["history"].push_back({{"epoch", s.epoch},
                            {"train_loss", num(s.train_loss)},
                            {"train_accuracy", num(s.train_accuracy)},
                            {"val_loss", num(s.val_loss)},
                            {"val_accuracy", num(s.val_accuracy)}});
  }
  return j;
}

inline MLPModel model_from_json(const nlohmann::json& j) {
  MLPModel m;
  try {
    if (j.at("format") != "pachner-mlp" || j.at("version") != 1) throw Error("model checkpoint: unsupported format");
    m.config = j.at("config").get<MLPConfig>();
    m.input_dim = j.at("input_dim").get<std::size_t>();
    std::size_t prev = m.input_dim;
    for (const auto& lj : j.at("layers")) {
      DenseLayer l{lj.at("in").get<std::size_t>(), lj.at("out").get<std::size_t>(), lj.at("w").get<std::vector<double>>(),
                   lj.at("b").get<std::vector<double>>()};
      if (l.in != prev || l.w.size() != l.in * l.out || l.b.size() != l.out)
        throw Error("model checkpoint: layer shapes do not chain");
      prev = l.out;
      m.layers.push_back(std::move(l));
    }
    auto num = [](const nlohmann::json& v) { return v.is_null() ? std::nan("") : v.get<double>(); };
    for (const auto& h : j.at("history"))
      m.history.push_back({h.at("epoch").get<std::size_t>(), num(h.at("train_loss")), num(h.at("train_accuracy")),
                           num(h.at("val_loss")), num(h.at("val_accuracy"))});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("model checkpoint: ") + e.what());
  }
  if (m.layers.empty()) throw Error("model checkpoint: no layers");
  return m;
}

inline void save_model(const MLPModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_model: cannot open " + path.string());
  out << model_to_json(m).dump() << '\n';
}

inline MLPModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_model: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("load_model: " + std::string(e.what()));
  }
  return model_from_json(j);
}

}  // namespace pachner
