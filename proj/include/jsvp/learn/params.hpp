#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "jsvp/common/config.hpp"
#include "jsvp/common/csv.hpp"
#include "jsvp/common/error.hpp"

namespace jsvp::learn {

enum class Algorithm { RFC, DT, KNN, SVM, LinReg, LogReg, NB, ZeroR, SDNN, CDNN };

inline const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> list = {Algorithm::RFC,    Algorithm::DT,     Algorithm::KNN,   Algorithm::SVM,
                                              Algorithm::LinReg, Algorithm::LogReg, Algorithm::NB,    Algorithm::ZeroR,
                                              Algorithm::SDNN,   Algorithm::CDNN};
  return list;
}

inline std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::RFC: return "RFC";
    case Algorithm::DT: return "DT";
    case Algorithm::KNN: return "KNN";
    case Algorithm::SVM: return "SVM";
    case Algorithm::LinReg: return "LinReg";
    case Algorithm::LogReg: return "LogReg";
    case Algorithm::NB: return "NB";
    case Algorithm::ZeroR: return "ZeroR";
    case Algorithm::SDNN: return "SDNN";
    case Algorithm::CDNN: return "CDNN";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view name) {
  for (auto a : all_algorithms()) {
    if (algorithm_name(a) == name) return a;
  }
  throw Error(ErrorCode::Config, "unknown algorithm '" + std::string(name) + "'");
}

// Whether the algorithm sees z-scored features.
inline bool uses_scaling(Algorithm a) {
  switch (a) {
    case Algorithm::KNN:
    case Algorithm::SVM:
    case Algorithm::LinReg:
    case Algorithm::LogReg:
    case Algorithm::SDNN:
    case Algorithm::CDNN: return true;
    default: return false;
  }
}

// Hyperparameters by name, values as text. std::map keeps the canonical
// (lexicographic) order used for config strings and tie-breaking.
using Params = std::map<std::string, std::string>;

enum class ParamKind { Int, Real, Choice, Layers, Features, Bool };

struct ParamSpec {
  std::string name;
  ParamKind kind;
  std::string default_value;
  double min = 0;                    // Int / Real lower bound (inclusive)
  std::vector<std::string> choices;  // Choice
};

inline const std::vector<ParamSpec>& param_specs(Algorithm a) {
  using K = ParamKind;
  static const std::map<Algorithm, std::vector<ParamSpec>> specs = {
      {Algorithm::DT, {{"max_depth", K::Int, "0", 0, {}}, {"min_samples_split", K::Int, "2", 2, {}}}},
      {Algorithm::RFC,
       {{"bootstrap", K::Bool, "true", 0, {}},
        {"max_depth", K::Int, "0", 0, {}},
        {"max_features", K::Features, "sqrt", 0, {}},
        {"min_samples_split", K::Int, "2", 2, {}},
        {"n_trees", K::Int, "100", 1, {}}}},
      {Algorithm::KNN, {{"k", K::Int, "5", 1, {}}}},
      {Algorithm::SVM,
       {{"C", K::Real, "1", 1e-12, {}},
        {"gamma", K::Real, "0", 0, {}},
        {"kernel", K::Choice, "rbf", 0, {"linear", "rbf"}},
        {"max_iter", K::Int, "200000", 1, {}},
        {"tol", K::Real, "0.001", 1e-15, {}}}},
      {Algorithm::LinReg, {{"ridge", K::Real, "0", 0, {}}}},
      {Algorithm::LogReg,
       {{"epochs", K::Int, "500", 1, {}}, {"l2", K::Real, "0", 0, {}}, {"learning_rate", K::Real, "0.5", 1e-12, {}}}},
      {Algorithm::NB, {{"var_floor", K::Real, "1e-9", 0, {}}}},
      {Algorithm::ZeroR, {}},
      {Algorithm::SDNN,
       {{"activation", K::Choice, "relu", 0, {"relu", "tanh", "sigmoid"}},
        {"batch_size", K::Int, "32", 1, {}},
        {"epochs", K::Int, "30", 1, {}},
        {"layers", K::Layers, "64-32", 0, {}},
        {"learning_rate", K::Real, "0.01", 1e-12, {}}}},
      {Algorithm::CDNN,
       {{"activation", K::Choice, "relu", 0, {"relu", "tanh", "sigmoid"}},
        {"batch_size", K::Int, "32", 1, {}},
        {"epochs", K::Int, "60", 1, {}},
        {"layers", K::Layers, "64-32", 0, {}},
        {"learning_rate", K::Real, "0.01", 1e-12, {}},
        {"max_misses", K::Int, "3", 1, {}},
        {"miss_measure", K::Choice, "f_measure", 0, {"f_measure", "precision", "accuracy"}}}},
  };
  return specs.at(a);
}

inline std::vector<int> parse_layers(const std::string& text) {
  std::vector<int> sizes;
  if (text.empty() || text == "none") return sizes;
  for (const auto& part : split_list(text, '-')) {
    const auto v = parse_integer(part, "layer size");
    if (v < 1) throw Error(ErrorCode::Config, "layer sizes must be positive: '" + text + "'");
    sizes.push_back(static_cast<int>(v));
  }
  return sizes;
}

inline bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorCode::Config, "expected a boolean, got '" + text + "'");
}

inline void check_value(Algorithm a, const ParamSpec& s, const std::string& v) {
  const auto where = algorithm_name(a) + "." + s.name;
  try {
    switch (s.kind) {
      case ParamKind::Int:
        if (static_cast<double>(parse_integer(v, where)) < s.min) {
          throw Error(ErrorCode::Config, where + " must be at least " + format_number(s.min));
        }
        break;
      case ParamKind::Real:
        if (!(parse_number(v, where) >= s.min)) {
          throw Error(ErrorCode::Config, where + " must be at least " + format_number(s.min));
        }
        break;
      case ParamKind::Choice:
        if (std::find(s.choices.begin(), s.choices.end(), v) == s.choices.end()) {
          throw Error(ErrorCode::Config, where + ": unknown value '" + v + "'");
        }
        break;
      case ParamKind::Layers: parse_layers(v); break;
      case ParamKind::Features:
        if (v != "sqrt" && v != "log2" && v != "all" && !(parse_number(v, where) > 0)) {
          throw Error(ErrorCode::Config, where + " must be sqrt, log2, all or a positive number");
        }
        break;
      case ParamKind::Bool: parse_bool(v); break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    throw Error(ErrorCode::Config, e.what());
  }
}

// Defaults overlaid with `given`; unknown names and bad values are rejected.
inline Params resolve_params(Algorithm a, const Params& given) {
  const auto& specs = param_specs(a);
  Params out;
  for (const auto& s : specs) out[s.name] = s.default_value;
  for (const auto& [k, v] : given) {
    auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.name == k; });
    if (it == specs.end()) throw Error(ErrorCode::Config, "unknown parameter '" + k + "' for " + algorithm_name(a));
    check_value(a, *it, v);
    out[k] = v;
  }
  return out;
}

inline std::string params_string(const Params& p) {
  std::string out;
  for (const auto& [k, v] : p) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

inline long long int_param(const Params& p, const std::string& name) { return parse_integer(p.at(name), name); }
inline double real_param(const Params& p, const std::string& name) { return parse_number(p.at(name), name); }

// Candidate values per parameter for one algorithm.
struct HyperGrid {
  Algorithm algorithm = Algorithm::ZeroR;
  std::map<std::string, std::vector<std::string>> values;

  // Cartesian product in odometer order over parameter names; the last
  // name varies fastest. A grid without parameters yields one empty config.
  std::vector<Params> expand() const {
    std::vector<Params> out(1);
    for (const auto& [name, list] : values) {
      std::vector<Params> next;
      next.reserve(out.size() * list.size());
      for (const auto& base : out) {
        for (const auto& v : list) {
          auto p = base;
          p[name] = v;
          next.push_back(std::move(p));
        }
      }
      out = std::move(next);
    }
    return out;
  }
};

// Grid file: one [ALGO] section per algorithm, `name = v1, v2, ...` per
// parameter. An algorithm without a section gets a single default config.
inline HyperGrid grid_for(const Config& cfg, Algorithm a) {
  HyperGrid g;
  g.algorithm = a;
  const auto prefix = algorithm_name(a) + ".";
  for (const auto& key : cfg.keys_with_prefix(prefix)) {
    const auto name = key.substr(prefix.size());
    auto list = split_list(*cfg.get(key));
    if (list.empty() || std::any_of(list.begin(), list.end(), [](const std::string& s) { return s.empty(); })) {
      throw Error(ErrorCode::Config, "empty candidate list for " + key);
    }
    for (const auto& v : list) resolve_params(a, {{name, v}});
    g.values[name] = std::move(list);
  }
  return g;
}

// Rejects sections that name no known algorithm, then validates every grid.
inline void validate_grid_file(const Config& cfg) {
  for (const auto& key : cfg.keys()) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw Error(ErrorCode::Config, "grid entry outside an [ALGO] section: " + key);
    grid_for(cfg, parse_algorithm(key.substr(0, dot)));
  }
}

}  // namespace jsvp::learn
