#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "jsvp/common/parallel.hpp"
#include "jsvp/dataset/dataset.hpp"
#include "jsvp/dataset/resample.hpp"
#include "jsvp/dataset/split.hpp"
#include "jsvp/eval/measures.hpp"
#include "jsvp/learn/model.hpp"

namespace jsvp::eval {

struct GridResult {
  learn::Params params;  // as given in the grid
  std::string config;    // params_string(params)
  Confusion cm;
  IrMeasures ir;
  std::optional<std::string> error;
};

// What a sweep trains on and how each configuration is scored.
struct SweepSpec {
  Measure objective = Measure::FMeasure;
  dataset::ResamplePlan resample;  // applied to training rows only
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int folds = 0;  // > 1: pooled k-fold confusion over the training data; else dev scoring
};

inline dataset::Dataset resampled(const dataset::Dataset& d, const dataset::ResamplePlan& plan, std::uint64_t seed) {
  if (plan.mode == dataset::ResampleMode::None) return d;
  return d.subset(dataset::resample(d.y, plan, seed));
}

// Confusion summed over k stratified folds; each fold's model sees the
// other folds, resampled.
inline Confusion cross_validate(learn::Algorithm a, const learn::Params& params, const dataset::Dataset& d, int k,
                                const dataset::ResamplePlan& plan, std::uint64_t seed) {
  const auto parts = dataset::folds(d.y, k, seed);
  Confusion total;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < parts.size(); ++g) {
      if (g != f) train_idx.insert(train_idx.end(), parts[g].begin(), parts[g].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    const auto fold_seed = mix_seed(seed, f);
    const auto train = resampled(d.subset(train_idx), plan, fold_seed);
    const auto test = d.subset(parts[f]);
    const auto model = learn::train(a, params, train, fold_seed);
    const auto c = confusion(test.y, model.predict(test));
    total.tp += c.tp;
    total.tn += c.tn;
    total.fp += c.fp;
    total.fn += c.fn;
  }
  return total;
}

inline Measure tie_breaker(Measure objective) {
  return objective == Measure::Precision ? Measure::FMeasure : Measure::Precision;
}

// Best first: objective, then the other of F/precision, then config text.
// Failed configurations sink to the end.
inline void rank(std::vector<GridResult>& results, Measure objective) {
  const auto second = tie_breaker(objective);
  std::stable_sort(results.begin(), results.end(), [&](const GridResult& x, const GridResult& y) {
    if (x.error.has_value() != y.error.has_value()) return !x.error.has_value();
    const double ox = measure_value(x.ir, objective), oy = measure_value(y.ir, objective);
    if (ox != oy) return ox > oy;
    const double sx = measure_value(x.ir, second), sy = measure_value(y.ir, second);
    if (sx != sy) return sx > sy;
    return x.config < y.config;
  });
}

// Trains every configuration of the grid. Dev scoring needs `dev`; with
// spec.folds > 1 `dev` is ignored. The result order does not depend on the
// thread count.
inline std::vector<GridResult> grid_search(const learn::HyperGrid& grid, const dataset::Dataset& train,
                                           const dataset::Dataset* dev, const SweepSpec& spec) {
  const auto configs = grid.expand();
  if (spec.folds <= 1 && dev == nullptr) throw Error(ErrorCode::Usage, "dev scoring needs a dev set");
  std::vector<GridResult> results(configs.size());
  const auto train_rs = spec.folds > 1 ? train : resampled(train, spec.resample, spec.seed);
  parallel_for(configs.size(), spec.threads, [&](std::size_t i) {
    auto& r = results[i];
    r.params = configs[i];
    r.config = learn::params_string(configs[i]);
    try {
      learn::resolve_params(grid.algorithm, configs[i]);
      if (spec.folds > 1) {
        r.cm = cross_validate(grid.algorithm, configs[i], train, spec.folds, spec.resample, spec.seed);
      } else {
        const auto model = learn::train(grid.algorithm, configs[i], train_rs, spec.seed, dev);
        r.cm = confusion(dev->y, model.predict(*dev));
      }
      r.ir = ir_measures(r.cm);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  rank(results, spec.objective);
  return results;
}

}  // namespace jsvp::eval
