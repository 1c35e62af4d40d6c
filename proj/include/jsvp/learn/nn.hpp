#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "jsvp/common/rng.hpp"
#include "jsvp/dataset/split.hpp"
#include "jsvp/eval/measures.hpp"
#include "jsvp/learn/classifier.hpp"
#include "jsvp/learn/params.hpp"

namespace jsvp::learn {

enum class Activation { Relu, Tanh, Sigmoid };

inline Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "sigmoid") return Activation::Sigmoid;
  throw Error(ErrorCode::Config, "unknown activation '" + s + "'");
}

struct DenseLayer {
  std::size_t in = 0, out = 0;
  std::vector<double> W;  // out x in, row-major
  std::vector<double> b;
};

// Fully connected net with one sigmoid output unit, trained on mean
// cross-entropy.
class Network {
 public:
  std::vector<DenseLayer> layers;
  Activation act = Activation::Relu;

  Network() = default;
  Network(std::size_t inputs, const std::vector<int>& hidden, Activation a, Rng& rng) : act(a) {
    std::size_t prev = inputs;
    std::vector<std::size_t> sizes(hidden.begin(), hidden.end());
    sizes.push_back(1);
    for (auto width : sizes) {
      DenseLayer l{prev, width, std::vector<double>(prev * width), std::vector<double>(width, 0.0)};
      const double limit = a == Activation::Relu ? std::sqrt(6.0 / static_cast<double>(prev))
                                                 : std::sqrt(6.0 / static_cast<double>(prev + width));
      for (auto& w : l.W) w = rng.uniform(-limit, limit);
      layers.push_back(std::move(l));
      prev = width;
    }
  }

  double activate(double z) const {
    switch (act) {
      case Activation::Relu: return z > 0 ? z : 0.0;
      case Activation::Tanh: return std::tanh(z);
      case Activation::Sigmoid: return sigmoid(z);
    }
    return z;
  }

  // Derivative expressed through the activation value h = f(z).
  double derivative(double z, double h) const {
    switch (act) {
      case Activation::Relu: return z > 0 ? 1.0 : 0.0;
      case Activation::Tanh: return 1 - h * h;
      case Activation::Sigmoid: return h * (1 - h);
    }
    return 1;
  }

  // Output logit; `zs`/`hs` receive per-layer pre- and post-activations.
  double logit(std::span<const double> x, std::vector<std::vector<double>>* zs = nullptr,
               std::vector<std::vector<double>>* hs = nullptr) const {
    std::vector<double> h(x.begin(), x.end());
    if (hs) hs->assign(1, h);
    if (zs) zs->clear();
    for (std::size_t li = 0; li < layers.size(); ++li) {
      const auto& l = layers[li];
      std::vector<double> z(l.out);
      for (std::size_t o = 0; o < l.out; ++o) {
        double s = l.b[o];
        const double* w = &l.W[o * l.in];
        for (std::size_t i = 0; i < l.in; ++i) s += w[i] * h[i];
        z[o] = s;
      }
      const bool last = li + 1 == layers.size();
      if (zs) zs->push_back(z);
      if (last) return z[0];
      for (auto& v : z) v = activate(v);
      h = std::move(z);
      if (hs) hs->push_back(h);
    }
    return 0;
  }

  double probability(std::span<const double> x) const { return sigmoid(logit(x)); }

  // Mean loss over rows `idx`; adds its gradient into `grad` (same shape,
  // zeroed by the caller) when given.
  double loss(const Matrix& X, const std::vector<int>& y, std::span<const std::size_t> idx,
              std::vector<DenseLayer>* grad = nullptr) const {
    double total = 0;
    const double scale = 1.0 / static_cast<double>(idx.size());
    std::vector<std::vector<double>> zs, hs;
    for (auto r : idx) {
      const double z = logit(X.row(r), grad ? &zs : nullptr, grad ? &hs : nullptr);
      total += softplus(z) - y[r] * z;
      if (!grad) continue;
      std::vector<double> delta = {(sigmoid(z) - y[r]) * scale};
      for (std::size_t li = layers.size(); li-- > 0;) {
        const auto& l = layers[li];
        auto& g = (*grad)[li];
        const auto& h = hs[li];
        for (std::size_t o = 0; o < l.out; ++o) {
          g.b[o] += delta[o];
          double* gw = &g.W[o * l.in];
          for (std::size_t i = 0; i < l.in; ++i) gw[i] += delta[o] * h[i];
        }
        if (li == 0) break;
        std::vector<double> prev(l.in, 0.0);
        for (std::size_t o = 0; o < l.out; ++o) {
          const double* w = &l.W[o * l.in];
          for (std::size_t i = 0; i < l.in; ++i) prev[i] += w[i] * delta[o];
        }
        for (std::size_t i = 0; i < l.in; ++i) prev[i] *= derivative(zs[li - 1][i], h[i]);
        delta = std::move(prev);
      }
    }
    return total * scale;
  }

  std::vector<DenseLayer> zero_gradient() const {
    auto g = layers;
    for (auto& l : g) {
      std::fill(l.W.begin(), l.W.end(), 0.0);
      std::fill(l.b.begin(), l.b.end(), 0.0);
    }
    return g;
  }

  // One pass of mini-batch SGD in a freshly shuffled order.
  void train_epoch(const Matrix& X, const std::vector<int>& y, std::size_t batch, double lr, Rng& rng) {
    std::vector<std::size_t> order(X.rows);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const auto len = std::min(batch, order.size() - start);
      auto g = zero_gradient();
      loss(X, y, std::span<const std::size_t>(order.data() + start, len), &g);
      for (std::size_t li = 0; li < layers.size(); ++li) {
        for (std::size_t k = 0; k < layers[li].W.size(); ++k) layers[li].W[k] -= lr * g[li].W[k];
        for (std::size_t k = 0; k < layers[li].b.size(); ++k) layers[li].b[k] -= lr * g[li].b[k];
      }
    }
  }

  std::vector<int> predict(const Matrix& X) const {
    std::vector<int> out;
    for (std::size_t r = 0; r < X.rows; ++r) out.push_back(logit(X.row(r)) >= 0 ? 1 : 0);
    return out;
  }

  Json save() const {
    Json ls = Json::array();
    for (const auto& l : layers) ls.push_back({{"in", l.in}, {"out", l.out}, {"W", l.W}, {"b", l.b}});
    return {{"activation", act == Activation::Relu ? "relu" : act == Activation::Tanh ? "tanh" : "sigmoid"},
            {"layers", ls}};
  }

  void load(const Json& j) {
    act = parse_activation(j.at("activation").get<std::string>());
    layers.clear();
    for (const auto& l : j.at("layers")) {
      layers.push_back({l.at("in").get<std::size_t>(), l.at("out").get<std::size_t>(),
                        l.at("W").get<std::vector<double>>(), l.at("b").get<std::vector<double>>()});
    }
  }

  bool operator==(const Network& o) const {
    if (act != o.act || layers.size() != o.layers.size()) return false;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (layers[i].W != o.layers[i].W || layers[i].b != o.layers[i].b) return false;
    }
    return true;
  }
};

class NetworkClassifier : public Classifier {
 public:
  std::vector<double> scores(const Matrix& X) const override {
    std::vector<double> out;
    for (std::size_t r = 0; r < X.rows; ++r) out.push_back(net_.probability(X.row(r)));
    return out;
  }
  Json save() const override { return {{"network", net_.save()}}; }
  void load(const Json& j) override { net_.load(j.at("network")); }
  const Network& network() const { return net_; }

 protected:
  Network net_;
};

// Fixed learning rate, fixed number of epochs.
class SimpleNet : public NetworkClassifier {
 public:
  explicit SimpleNet(const Params& p)
      : layers_(parse_layers(p.at("layers"))), act_(parse_activation(p.at("activation"))),
        lr_(real_param(p, "learning_rate")), epochs_(static_cast<int>(int_param(p, "epochs"))),
        batch_(static_cast<std::size_t>(int_param(p, "batch_size"))) {}

  void fit(const Matrix& X, const std::vector<int>& y, const FitContext& ctx) override {
    Rng rng(ctx.seed);
    net_ = Network(X.cols, layers_, act_, rng);
    for (int e = 0; e < epochs_; ++e) net_.train_epoch(X, y, batch_, lr_, rng);
  }

 private:
  std::vector<int> layers_;
  Activation act_;
  double lr_;
  int epochs_;
  std::size_t batch_;
};

struct EpochRecord {
  int epoch;
  double score;
  double learning_rate;
  bool miss;
};

// Validates on the dev set after every epoch. A drop below the best score so
// far is a miss: the best weights come back, the learning rate halves, and
// training ends once max_misses misses have happened.
class ValidatedNet : public NetworkClassifier {
 public:
  explicit ValidatedNet(const Params& p)
      : layers_(parse_layers(p.at("layers"))), act_(parse_activation(p.at("activation"))),
        lr_(real_param(p, "learning_rate")), epochs_(static_cast<int>(int_param(p, "epochs"))),
        batch_(static_cast<std::size_t>(int_param(p, "batch_size"))),
        max_misses_(static_cast<int>(int_param(p, "max_misses"))), measure_(eval::parse_measure(p.at("miss_measure"))) {}

  void fit(const Matrix& Xin, const std::vector<int>& yin, const FitContext& ctx) override {
    Rng rng(ctx.seed);
    // Without a dev set a stratified tenth of the training rows is held out.
    Matrix X_hold, dev_hold;
    std::vector<int> y_hold, dev_y_hold;
    const Matrix* X = &Xin;
    const std::vector<int>* y = &yin;
    const Matrix* dev_X = ctx.dev_X;
    const std::vector<int>* dev_y = ctx.dev_y;
    if (!ctx.dev_scorer && (dev_X == nullptr || dev_y == nullptr || dev_X->rows == 0)) {
      const auto order = dataset::stratified_order(yin, mix_seed(ctx.seed, 99));
      const std::size_t n_dev = std::max<std::size_t>(1, order.size() / 10);
      std::vector<std::size_t> dev_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_dev));
      std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_dev), order.end());
      std::sort(dev_idx.begin(), dev_idx.end());
      std::sort(train_idx.begin(), train_idx.end());
      dev_hold = Xin.select_rows(dev_idx);
      X_hold = Xin.select_rows(train_idx);
      for (auto i : dev_idx) dev_y_hold.push_back(yin[i]);
      for (auto i : train_idx) y_hold.push_back(yin[i]);
      X = &X_hold;
      y = &y_hold;
      dev_X = &dev_hold;
      dev_y = &dev_y_hold;
    }
    DevScorer scorer = ctx.dev_scorer;
    if (!scorer) {
      scorer = [&, dev_X, dev_y](int, const Network& net) {
        return eval::measure_value(eval::ir_measures(eval::confusion(*dev_y, net.predict(*dev_X))), measure_);
      };
    }

    net_ = Network(X->cols, layers_, act_, rng);
    Network best = net_;
    double best_score = -std::numeric_limits<double>::infinity();
    double lr = lr_;
    int misses = 0;
    history_.clear();
    for (int e = 0; e < epochs_; ++e) {
      net_.train_epoch(*X, *y, batch_, lr, rng);
      const double s = scorer(e, net_);
      const bool miss = !(s >= best_score);
      history_.push_back({e, s, lr, miss});
      if (!miss) {
        best = net_;
        best_score = s;
        continue;
      }
      net_ = best;
      lr /= 2;
      if (++misses >= max_misses_) break;
    }
    net_ = best;
    final_lr_ = lr;
  }

  const std::vector<EpochRecord>& history() const { return history_; }
  double final_learning_rate() const { return final_lr_; }

 private:
  std::vector<int> layers_;
  Activation act_;
  double lr_;
  int epochs_;
  std::size_t batch_;
  int max_misses_;
  eval::Measure measure_;
  std::vector<EpochRecord> history_;
  double final_lr_ = 0;
};

}  // namespace jsvp::learn
