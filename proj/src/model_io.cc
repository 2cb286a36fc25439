//
// Copyright 2026 The dpkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpkit/model_io.h"

#include <fstream>
#include <sstream>
#include <vector>

#include "dpkit/errors.h"

namespace dpkit {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd ToEigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

ordered_json BudgetToJson(const PrivacyBudget& budget) {
  ordered_json out;
  out["epsilon"] = budget.epsilon();
  out["delta"] = budget.delta();
  out["variant"] = ToString(budget.variant());
  return out;
}

PrivacyBudget BudgetFromJson(const json& doc) {
  const double eps = doc.at("epsilon").get<double>();
  const double delta = doc.at("delta").get<double>();
  const std::string variant = doc.at("variant").get<std::string>();
  if (variant == ToString(DpVariant::kPure)) return PrivacyBudget::Pure(eps);
  if (variant == ToString(DpVariant::kApproximate)) {
    return PrivacyBudget::Approximate(eps, delta);
  }
  if (variant == ToString(DpVariant::kProbabilistic)) {
    return PrivacyBudget::Probabilistic(eps, delta);
  }
  throw DataError("unknown DP variant '" + variant + "'");
}

ordered_json ModelToJson(const TrainedModel& model) {
  const ModelSpec& spec = model.spec;
  ordered_json doc;
  doc["kind"] = ToString(model.kind);
  doc["num_features"] = model.num_features;
  doc["feature_names"] = model.feature_names;
  doc["add_bias"] = spec.add_bias;
  doc["coefficients"] = ToStd(model.coefficients);
  doc["scaled_coefficients"] = ToStd(model.scaled_coefficients);
  if (model.scaler) {
    doc["scaler"] = {{"column_divisors", model.scaler->column_divisors()},
                     {"global_divisor", model.scaler->global_divisor()},
                     {"bias_included", model.scaler->bias_included()}};
  } else {
    doc["scaler"] = nullptr;
  }
  if (model.rff) {
    doc["rff"] = {{"D", model.rff->dimension()},
                  {"beta", model.rff->beta()},
                  {"seed", model.rff->seed()},
                  {"input_dim", model.rff->input_dim()}};
  } else {
    doc["rff"] = nullptr;
  }
  if (model.kind == ModelKind::kSvmLinear ||
      model.kind == ModelKind::kSvmGaussian) {
    doc["huber_h"] = spec.huber_h;
  } else {
    doc["huber_h"] = nullptr;
  }
  doc["y_shift"] = model.y_shift;
  doc["y_scale"] = model.y_scale;
  ordered_json config;
  config["budget"] = BudgetToJson(spec.budget);
  config["gamma"] = spec.gamma;
  config["method"] = IsClassifier(model.kind) ? json(ToString(spec.perturbation))
                                              : json("kst");
  config["weight_upper_bound"] =
      spec.weight_upper_bound ? json(*spec.weight_upper_bound) : json(nullptr);
  doc["config"] = config;
  doc["converged"] = model.converged;
  return doc;
}

TrainedModel ModelFromJson(const json& doc) {
  try {
    TrainedModel model;
    model.kind = ModelKindFromString(doc.at("kind").get<std::string>());
    model.num_features = doc.at("num_features").get<Eigen::Index>();
    model.feature_names =
        doc.at("feature_names").get<std::vector<std::string>>();
    model.coefficients =
        ToEigen(doc.at("coefficients").get<std::vector<double>>());
    model.scaled_coefficients =
        ToEigen(doc.at("scaled_coefficients").get<std::vector<double>>());
    model.y_shift = doc.at("y_shift").get<double>();
    model.y_scale = doc.at("y_scale").get<double>();
    model.converged = doc.at("converged").get<bool>();

    ModelSpec& spec = model.spec;
    spec.kind = model.kind;
    spec.add_bias = doc.at("add_bias").get<bool>();
    const json& config = doc.at("config");
    spec.budget = BudgetFromJson(config.at("budget"));
    spec.gamma = config.at("gamma").get<double>();
    const std::string method = config.at("method").get<std::string>();
    spec.perturbation = method == "output" ? Perturbation::kOutput
                                           : Perturbation::kObjective;
    if (!config.at("weight_upper_bound").is_null()) {
      spec.weight_upper_bound = config.at("weight_upper_bound").get<double>();
    }
    if (!doc.at("huber_h").is_null()) {
      spec.huber_h = doc.at("huber_h").get<double>();
    }

    const json& scaler = doc.at("scaler");
    if (!scaler.is_null()) {
      model.scaler.emplace(
          scaler.at("column_divisors").get<std::vector<double>>(),
          scaler.at("global_divisor").get<double>(),
          scaler.at("bias_included").get<bool>());
    }
    const json& rff = doc.at("rff");
    if (!rff.is_null()) {
      model.rff.emplace(rff.at("D").get<Eigen::Index>(),
                        rff.at("input_dim").get<Eigen::Index>(),
                        rff.at("beta").get<double>(),
                        rff.at("seed").get<uint64_t>());
      spec.rff_dim = model.rff->dimension();
      spec.kernel_param = model.rff->beta();
    }

    const Eigen::Index expected =
        model.rff ? model.rff->dimension()
                  : model.num_features + (spec.add_bias ? 1 : 0);
    if (model.coefficients.size() != expected) {
      throw DataError("model coefficient count does not match its features");
    }
    if (model.kind == ModelKind::kSvmGaussian && !model.rff) {
      throw DataError("Gaussian-kernel model has no RFF state");
    }
    if (model.kind != ModelKind::kSvmGaussian && !model.scaler) {
      throw DataError("model has no feature scaler");
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void SaveModel(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file '" + path + "'");
  out << ModelToJson(model).dump(2) << "\n";
  if (!out) throw DataError("failed writing model file '" + path + "'");
}

TrainedModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("model file '" + path + "' is not valid JSON: " + e.what());
  }
  return ModelFromJson(doc);
}

}  // namespace dpkit
