#include <gtest/gtest.h>

#include <cmath>

#include "jsvp/eval/grid_search.hpp"
#include "jsvp/learn/model.hpp"
#include "synthetic.hpp"

using namespace jsvp;
using namespace jsvp::learn;

namespace {

// Settings small enough for a quick 10-fold run.
Params quick(Algorithm a) {
  switch (a) {
    case Algorithm::RFC: return {{"n_trees", "25"}};
    case Algorithm::SDNN:
    case Algorithm::CDNN: return {{"layers", "8"}, {"epochs", "15"}};
    default: return {};
  }
}

double cv_accuracy(Algorithm a, const dataset::Dataset& d) {
  const auto cm = eval::cross_validate(a, quick(a), d, 10, {}, 11);
  return eval::ir_measures(cm).accuracy;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (auto& v : m.data) v = rng.normal();
  return m;
}

std::vector<int> random_labels(std::size_t n, Rng& rng) {
  std::vector<int> y(n);
  for (auto& v : y) v = static_cast<int>(rng.below(2));
  y[0] = 0;
  y[1] = 1;
  return y;
}

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

}  // namespace

// ---- parameters and grids ----

TEST(Params, DefaultsAndRejection) {
  const auto p = resolve_params(Algorithm::KNN, {});
  EXPECT_EQ(p.at("k"), "5");
  EXPECT_THROW(resolve_params(Algorithm::KNN, {{"neighbours", "3"}}), Error);
  EXPECT_THROW(resolve_params(Algorithm::KNN, {{"k", "0"}}), Error);
  EXPECT_THROW(resolve_params(Algorithm::SVM, {{"kernel", "poly"}}), Error);
  EXPECT_EQ(parse_layers("64-32"), (std::vector<int>{64, 32}));
  EXPECT_THROW(parse_layers("64-0"), Error);
}

TEST(Params, GridFile) {
  const auto cfg = Config::parse("[RFC]\nn_trees = 10, 20\nmax_depth = 1, 2\n[KNN]\nk = 1, 3, 5\n");
  validate_grid_file(cfg);
  const auto g = grid_for(cfg, Algorithm::RFC);
  const auto configs = g.expand();
  ASSERT_EQ(configs.size(), 4u);
  EXPECT_EQ(params_string(configs[0]), "max_depth=1;n_trees=10");
  EXPECT_EQ(params_string(configs[3]), "max_depth=2;n_trees=20");
  EXPECT_EQ(grid_for(cfg, Algorithm::NB).expand().size(), 1u);
  EXPECT_THROW(validate_grid_file(Config::parse("[Boost]\ndepth = 3\n")), Error);
  EXPECT_THROW(validate_grid_file(Config::parse("[KNN]\nradius = 3\n")), Error);
  EXPECT_THROW(validate_grid_file(Config::parse("[KNN]\nk = 1,\n")), Error);
}

// ---- spec examples ----

TEST(ZeroR, MajorityBaseline) {
  std::vector<int> y(12125, 0);
  std::fill(y.begin(), y.begin() + 1496, 1);
  Matrix X(y.size(), 1, 0.0);
  const auto m = train(Algorithm::ZeroR, {}, X, y, 1);
  const auto pred = m.predict(X);
  EXPECT_TRUE(std::all_of(pred.begin(), pred.end(), [](int v) { return v == 0; }));
  EXPECT_NEAR(eval::ir_measures(eval::confusion(y, pred)).accuracy, 10629.0 / 12125.0, 1e-9);
}

TEST(Knn, SelfNeighbourIsExact) {
  const auto d = fixtures::two_gaussians(100, 3, 4, 0.3);
  const auto m = train(Algorithm::KNN, {{"k", "1"}}, d, 1);
  EXPECT_EQ(m.predict(d), d.y);
}

TEST(Knn, SplitVoteGoesNegative) {
  Matrix X(4, 1);
  X.data = {0, 0.1, 10, 10.1};
  const auto m = train(Algorithm::KNN, {{"k", "2"}}, X, {1, 0, 0, 1}, 1);
  Matrix q(1, 1);
  q.data = {5.0};  // equidistant from all four; the two earliest rows win
  EXPECT_EQ(m.predict(q), std::vector<int>{0});
}

TEST(LogReg, ZeroWeightsPredictPositive) {
  LogisticRegression lr(resolve_params(Algorithm::LogReg, {}));
  lr.set_weights({{0.0, 0.0}, 0.0});
  Matrix X(1, 2);
  X.data = {3.0, -1.0};
  EXPECT_EQ(lr.scores(X)[0], 0.5);
  EXPECT_EQ(lr.predict(X), std::vector<int>{1});
}

TEST(RandomForest, MajorityVote) {
  RandomForest rf(resolve_params(Algorithm::RFC, {{"n_trees", "3"}}));
  auto leaf = [](double v) { return Json::array({Json::array({-1, 0.0, -1, -1, v})}); };
  Matrix X(1, 1, 0.0);
  rf.load({{"trees", {leaf(1), leaf(1), leaf(0)}}});
  EXPECT_EQ(rf.predict(X), std::vector<int>{1});
  rf.load({{"trees", {leaf(0), leaf(1), leaf(0)}}});
  EXPECT_EQ(rf.predict(X), std::vector<int>{0});
}

TEST(RandomForest, SingleFullTreeEqualsDecisionTree) {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto X = random_matrix(150, 5, rng);
    std::vector<int> y(150);
    for (std::size_t r = 0; r < 150; ++r) y[r] = X(r, 0) + 0.5 * X(r, 2) + 0.7 * rng.normal() > 0;
    const auto dt = train(Algorithm::DT, {}, X, y, 3);
    const auto rf = train(Algorithm::RFC, {{"n_trees", "1"}, {"max_features", "all"}, {"bootstrap", "false"}}, X, y, 3);
    const auto Q = random_matrix(300, 5, rng);
    EXPECT_EQ(dt.predict(Q), rf.predict(Q));
  }
}

TEST(NaiveBayes, ClosedFormPosterior) {
  // class 0: (0,0), (2,2), (1,1) -> mean (1,1), variance 2/3 per feature
  // class 1: (4,0), (6,2)        -> mean (5,1), variance 1 per feature
  Matrix X(5, 2);
  X.data = {0, 0, 2, 2, 1, 1, 4, 0, 6, 2};
  const std::vector<int> y = {0, 0, 0, 1, 1};
  const auto m = train(Algorithm::NB, {}, X, y, 1);
  auto normal = [](double x, double mu, double var) {
    return std::exp(-(x - mu) * (x - mu) / (2 * var)) / std::sqrt(2 * 3.14159265358979323846 * var);
  };
  for (auto [a, b] : std::vector<std::pair<double, double>>{{3, 1}, {4, 1}, {2.5, 0.5}, {1, 3}}) {
    const double p0 = 0.6 * normal(a, 1, 2.0 / 3) * normal(b, 1, 2.0 / 3);
    const double p1 = 0.4 * normal(a, 5, 1) * normal(b, 1, 1);
    Matrix q(1, 2);
    q.data = {a, b};
    EXPECT_NEAR(m.scores(q)[0], p1 / (p0 + p1), 1e-9) << a << "," << b;
  }
}

TEST(NaiveBayes, VarianceFloor) {
  Matrix X(4, 1);
  X.data = {1, 1, 2, 2};
  const auto m = train(Algorithm::NB, {}, X, {0, 0, 1, 1}, 1);
  Matrix q(2, 1);
  q.data = {1, 2};
  EXPECT_EQ(m.predict(q), (std::vector<int>{0, 1}));
}

TEST(ValidatedNet, MissRestoresBestAndHalvesOnce) {
  Rng rng(2);
  const auto X = random_matrix(40, 3, rng);
  const auto y = random_labels(40, rng);
  const std::vector<double> script = {0.5, 0.6, 0.55, 0.9, 0.9};
  Network snapshot;
  TrainOptions opt;
  opt.dev_scorer = [&](int epoch, const Network& net) {
    if (epoch == 1) snapshot = net;
    return script[static_cast<std::size_t>(epoch)];
  };
  const auto m = train(Algorithm::CDNN, {{"layers", "4"}, {"epochs", "5"}, {"max_misses", "1"}, {"learning_rate", "0.1"}},
                       X, y, 7, opt);
  const auto& net = dynamic_cast<const ValidatedNet&>(*m.impl);
  ASSERT_EQ(net.history().size(), 3u);
  EXPECT_TRUE(net.history()[2].miss);
  EXPECT_DOUBLE_EQ(net.final_learning_rate(), 0.05);
  EXPECT_TRUE(net.network() == snapshot);
}

TEST(ValidatedNet, KeepsTrainingUntilMaxMisses) {
  Rng rng(2);
  const auto X = random_matrix(40, 3, rng);
  const auto y = random_labels(40, rng);
  const std::vector<double> script = {0.5, 0.4, 0.6, 0.6, 0.3, 0.7, 0.8};
  TrainOptions opt;
  opt.dev_scorer = [&](int epoch, const Network&) { return script[static_cast<std::size_t>(epoch)]; };
  const auto m = train(Algorithm::CDNN, {{"layers", "4"}, {"epochs", "7"}, {"max_misses", "2"}, {"learning_rate", "0.1"}},
                       X, y, 7, opt);
  const auto& net = dynamic_cast<const ValidatedNet&>(*m.impl);
  EXPECT_EQ(net.history().size(), 5u);
  EXPECT_DOUBLE_EQ(net.final_learning_rate(), 0.025);
  EXPECT_DOUBLE_EQ(net.history()[4].learning_rate, 0.05);
}

// ---- gradients ----

TEST(Gradients, LogRegMatchesFiniteDifferences) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = random_matrix(9, 4, rng);
    const auto y = random_labels(9, rng);
    LinearWeights w{{rng.normal(), rng.normal(), rng.normal(), rng.normal()}, rng.normal()};
    const double l2 = 0.1 * rng.uniform();
    LinearWeights g;
    logreg_loss(X, y, w, l2, &g);
    const double h = 1e-6;
    for (std::size_t i = 0; i <= w.w.size(); ++i) {
      auto plus = w, minus = w;
      (i < w.w.size() ? plus.w[i] : plus.b) += h;
      (i < w.w.size() ? minus.w[i] : minus.b) -= h;
      const double fd = (logreg_loss(X, y, plus, l2) - logreg_loss(X, y, minus, l2)) / (2 * h);
      EXPECT_LT(relative_error(i < w.w.size() ? g.w[i] : g.b, fd), 1e-5);
    }
  }
}

TEST(Gradients, NetworkMatchesFiniteDifferences) {
  Rng rng(17);
  for (auto act : {Activation::Tanh, Activation::Sigmoid, Activation::Relu}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto X = random_matrix(6, 3, rng);
      const auto y = random_labels(6, rng);
      Network net(3, {5, 4}, act, rng);
      for (auto& l : net.layers) {
        for (auto& b : l.b) b = 0.1 * rng.normal();
      }
      std::vector<std::size_t> idx = {0, 1, 2, 3, 4, 5};
      auto g = net.zero_gradient();
      net.loss(X, y, idx, &g);
      const double h = 1e-6;
      for (std::size_t li = 0; li < net.layers.size(); ++li) {
        auto check = [&](std::vector<double>& param, const std::vector<double>& grad) {
          for (std::size_t k = 0; k < param.size(); ++k) {
            const double keep = param[k];
            param[k] = keep + h;
            const double up = net.loss(X, y, idx);
            param[k] = keep - h;
            const double down = net.loss(X, y, idx);
            param[k] = keep;
            EXPECT_LT(relative_error(grad[k], (up - down) / (2 * h)), 1e-5) << "layer " << li << " index " << k;
          }
        };
        check(net.layers[li].W, g[li].W);
        check(net.layers[li].b, g[li].b);
      }
    }
  }
}

// ---- benchmark ----

class TwoGaussians : public ::testing::TestWithParam<Algorithm> {};

TEST_P(TwoGaussians, TenFoldAccuracy) {
  static const auto d = fixtures::two_gaussians(1000, 2, 2024);
  EXPECT_GE(cv_accuracy(GetParam(), d), 0.95);
}

INSTANTIATE_TEST_SUITE_P(AllButZeroR, TwoGaussians,
                         ::testing::Values(Algorithm::RFC, Algorithm::DT, Algorithm::KNN, Algorithm::SVM,
                                           Algorithm::LinReg, Algorithm::LogReg, Algorithm::NB, Algorithm::SDNN,
                                           Algorithm::CDNN),
                         [](const auto& info) { return algorithm_name(info.param); });

// ---- determinism, envelopes, errors ----

TEST(Models, DeterministicAndRoundTrip) {
  const auto d = fixtures::two_gaussians(60, 3, 5, 0.7);
  const auto q = fixtures::two_gaussians(40, 3, 6, 0.7);
  for (auto a : all_algorithms()) {
    const auto m1 = train(a, quick(a), d, 9);
    const auto m2 = train(a, quick(a), d, 9);
    EXPECT_EQ(m1.scores(q.X), m2.scores(q.X)) << algorithm_name(a);
    const auto text = m1.to_json().dump();
    EXPECT_EQ(text, m2.to_json().dump()) << algorithm_name(a);
    const auto back = TrainedModel::from_json(Json::parse(text));
    EXPECT_EQ(back.scores(q.X), m1.scores(q.X)) << algorithm_name(a);
    EXPECT_EQ(back.predict(q), m1.predict(q)) << algorithm_name(a);
  }
}

TEST(Models, EnvelopeVersionChecked) {
  const auto d = fixtures::two_gaussians(20, 2, 5);
  auto j = train(Algorithm::DT, {}, d, 1).to_json();
  j["version"] = 99;
  try {
    TrainedModel::from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::Model);
  }
}

TEST(Models, Errors) {
  const auto d = fixtures::two_gaussians(20, 2, 5);
  const auto m = train(Algorithm::LogReg, {}, d, 1);
  auto renamed = d;
  renamed.columns = {"a", "b"};
  try {
    m.predict(renamed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FeatureManifestMismatch);
  }
  std::vector<int> one_class(d.size(), 1);
  try {
    train(Algorithm::SVM, {}, d.X, one_class, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyClass);
  }
  auto bad = d;
  bad.X(3, 1) = std::nan("");
  try {
    train(Algorithm::DT, {}, bad, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteFeature);
  }
}

TEST(Svm, TwoPointMaximumMargin) {
  // Points -1 (class 0) and +1 (class 1): w = 1, rho = 0 for a hard margin.
  Svm svm(resolve_params(Algorithm::SVM, {{"kernel", "linear"}, {"C", "1000"}}));
  Matrix X(2, 1);
  X.data = {-1, 1};
  svm.fit(X, {0, 1}, {});
  const double x0[] = {0.0}, x1[] = {0.5};
  EXPECT_NEAR(svm.decision(x0), 0.0, 1e-9);
  EXPECT_NEAR(svm.decision(x1), 0.5, 1e-9);
}

TEST(LinReg, RecoversExactPlane) {
  Rng rng(3);
  Matrix X(50, 2);
  std::vector<int> y(50);
  for (std::size_t r = 0; r < 50; ++r) {
    X(r, 0) = static_cast<double>(r % 2);
    X(r, 1) = rng.normal();
    y[r] = static_cast<int>(r % 2);
  }
  LinearRegression lr(resolve_params(Algorithm::LinReg, {}));
  lr.fit(X, y, {});
  const auto raw = lr.raw(X);
  for (std::size_t r = 0; r < 50; ++r) EXPECT_NEAR(raw[r], y[r], 1e-9);
}
