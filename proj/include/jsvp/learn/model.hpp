#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jsvp/common/error.hpp"
#include "jsvp/dataset/dataset.hpp"
#include "jsvp/learn/classifier.hpp"
#include "jsvp/learn/linear.hpp"
#include "jsvp/learn/nn.hpp"
#include "jsvp/learn/params.hpp"
#include "jsvp/learn/scaler.hpp"
#include "jsvp/learn/simple.hpp"
#include "jsvp/learn/svm.hpp"
#include "jsvp/learn/tree.hpp"

namespace jsvp::learn {

inline constexpr int kModelFormatVersion = 1;

// `params` must already be resolved.
inline std::unique_ptr<Classifier> make_classifier(Algorithm a, const Params& params) {
  switch (a) {
    case Algorithm::RFC: return std::make_unique<RandomForest>(params);
    case Algorithm::DT: return std::make_unique<DecisionTree>(params);
    case Algorithm::KNN: return std::make_unique<Knn>(params);
    case Algorithm::SVM: return std::make_unique<Svm>(params);
    case Algorithm::LinReg: return std::make_unique<LinearRegression>(params);
    case Algorithm::LogReg: return std::make_unique<LogisticRegression>(params);
    case Algorithm::NB: return std::make_unique<NaiveBayes>(params);
    case Algorithm::ZeroR: return std::make_unique<ZeroR>();
    case Algorithm::SDNN: return std::make_unique<SimpleNet>(params);
    case Algorithm::CDNN: return std::make_unique<ValidatedNet>(params);
  }
  throw Error(ErrorCode::Config, "unknown algorithm");
}

struct TrainOptions {
  const Matrix* dev_X = nullptr;  // raw features, scaled like the training set
  const std::vector<int>* dev_y = nullptr;
  std::vector<std::string> features;  // manifest; empty means unnamed columns
  DevScorer dev_scorer;
};

inline void check_finite(const Matrix& X) {
  for (std::size_t r = 0; r < X.rows; ++r) {
    for (std::size_t c = 0; c < X.cols; ++c) {
      if (!std::isfinite(X(r, c))) {
        throw Error(ErrorCode::NonFiniteFeature, "row " + std::to_string(r) + ", column " + std::to_string(c));
      }
    }
  }
}

struct TrainedModel {
  Algorithm algorithm = Algorithm::ZeroR;
  Params params;
  std::uint64_t seed = 0;
  std::vector<std::string> features;
  std::optional<Scaler> scaler;
  std::shared_ptr<const Classifier> impl;

  Matrix prepare(const Matrix& X) const {
    const auto width = scaler ? scaler->mean.size() : features.size();
    if ((scaler || !features.empty()) && X.cols != width) {
      throw Error(ErrorCode::FeatureManifestMismatch,
                  "model expects " + std::to_string(width) + " features, got " + std::to_string(X.cols));
    }
    check_finite(X);
    return scaler ? scaler->transform(X) : X;
  }

  std::vector<double> scores(const Matrix& X) const { return impl->scores(prepare(X)); }
  std::vector<int> predict(const Matrix& X) const { return impl->predict(prepare(X)); }

  std::vector<int> predict(const dataset::Dataset& d) const {
    check_manifest(d.columns);
    return predict(d.X);
  }

  void check_manifest(const std::vector<std::string>& columns) const {
    if (!features.empty() && columns != features) {
      throw Error(ErrorCode::FeatureManifestMismatch, "dataset columns differ from the model's feature manifest");
    }
  }

  Json to_json() const {
    Json j;
    j["format"] = "jsvp-model";
    j["version"] = kModelFormatVersion;
    j["algorithm"] = algorithm_name(algorithm);
    j["params"] = params;
    j["seed"] = seed;
    j["features"] = features;
    if (scaler) j["scaler"] = {{"mean", scaler->mean}, {"scale", scaler->scale}};
    j["model"] = impl->save();
    return j;
  }

  static TrainedModel from_json(const Json& j) {
    try {
      if (j.at("format") != "jsvp-model") throw Error(ErrorCode::Model, "not a model file");
      if (j.at("version").get<int>() != kModelFormatVersion) {
        throw Error(ErrorCode::Model, "unsupported model version " + j.at("version").dump());
      }
      TrainedModel m;
      m.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
      m.params = j.at("params").get<Params>();
      m.seed = j.at("seed").get<std::uint64_t>();
      m.features = j.at("features").get<std::vector<std::string>>();
      if (j.contains("scaler")) {
        m.scaler = Scaler{j["scaler"].at("mean").get<std::vector<double>>(), j["scaler"].at("scale").get<std::vector<double>>()};
      }
      auto impl = make_classifier(m.algorithm, resolve_params(m.algorithm, m.params));
      impl->load(j.at("model"));
      m.impl = std::move(impl);
      return m;
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::Model, std::string("malformed model: ") + e.what());
    }
  }
};

inline TrainedModel train(Algorithm a, const Params& given, const Matrix& X, const std::vector<int>& y,
                          std::uint64_t seed, const TrainOptions& opt = {}) {
  if (X.rows != y.size()) throw Error(ErrorCode::LengthMismatch, "feature rows and labels differ in length");
  if (!opt.features.empty() && opt.features.size() != X.cols) {
    throw Error(ErrorCode::FeatureManifestMismatch, "feature manifest width differs from the matrix");
  }
  check_finite(X);
  std::size_t pos = 0;
  for (int v : y) pos += v == 1;
  if (X.rows == 0 || (a != Algorithm::ZeroR && (pos == 0 || pos == y.size()))) {
    throw Error(ErrorCode::EmptyClass, algorithm_name(a) + " needs both classes in the training set");
  }

  TrainedModel m;
  m.algorithm = a;
  m.params = resolve_params(a, given);
  m.seed = seed;
  m.features = opt.features;
  auto impl = make_classifier(a, m.params);

  FitContext ctx;
  ctx.seed = seed;
  ctx.dev_scorer = opt.dev_scorer;
  ctx.dev_y = opt.dev_y;
  Matrix dev_scaled;
  if (uses_scaling(a)) {
    m.scaler = Scaler::fit(X);
    if (opt.dev_X) {
      dev_scaled = m.scaler->transform(*opt.dev_X);
      ctx.dev_X = &dev_scaled;
    }
    impl->fit(m.scaler->transform(X), y, ctx);
  } else {
    ctx.dev_X = opt.dev_X;
    impl->fit(X, y, ctx);
  }
  m.impl = std::move(impl);
  return m;
}

inline TrainedModel train(Algorithm a, const Params& given, const dataset::Dataset& d, std::uint64_t seed,
                          const dataset::Dataset* dev = nullptr) {
  TrainOptions opt;
  opt.features = d.columns;
  if (dev) {
    if (dev->columns != d.columns) throw Error(ErrorCode::FeatureManifestMismatch, "dev columns differ from train");
    opt.dev_X = &dev->X;
    opt.dev_y = &dev->y;
  }
  return train(a, given, d.X, d.y, seed, opt);
}

}  // namespace jsvp::learn
