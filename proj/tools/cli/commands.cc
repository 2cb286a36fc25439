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

#include "cli/commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli/csv.h"
#include "dpkit/accountant.h"
#include "dpkit/errors.h"
#include "dpkit/mechanisms.h"
#include "dpkit/model_io.h"
#include "dpkit/models.h"
#include "dpkit/stats.h"
#include "dpkit/tuning.h"
#include "json.hpp"

namespace dpkit::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Options {
  std::string command;
  std::string action;

  std::string input;
  std::string bounds_file;
  std::optional<double> eps;
  double delta = 0.0;
  std::string mechanism = "laplace";
  std::string type_dp = "adp";
  std::string neighbor = "bounded";
  std::optional<uint64_t> seed;
  std::string ledger;
  std::string tag;
  std::optional<double> cap_eps;
  std::optional<double> cap_delta;

  // stat
  std::string column;
  std::vector<std::string> columns;
  std::string group_column;
  double q = 0.5;
  std::string breaks;
  bool normalize = false;
  bool allow_negative = false;
  bool uniform_sampling = false;
  bool approx_n_max = false;

  // fit / tune / predict
  std::string label = "y";
  std::vector<std::string> features;
  double gamma = 1.0;
  std::vector<double> gamma_grid;
  std::string method = "objective";
  std::string kernel = "linear";
  int64_t rff_dim = 0;
  std::optional<double> kernel_param;
  double huber_h = 0.5;
  std::string weights_column;
  std::optional<double> weight_bound;
  bool add_bias = false;
  bool add_bias_given = false;
  std::string model_out;
  std::string model;
  bool raw = false;

  // mech
  std::vector<double> values;
  std::vector<double> sensitivity;
  std::vector<double> alloc;
  std::vector<double> utility;
  std::vector<double> measure;
};

// Per-column entries of a bounds file.
struct ColumnSpec {
  std::optional<Bounds> numeric;
  std::optional<std::vector<std::string>> categories;
};
using BoundsManifest = std::map<std::string, ColumnSpec>;

// Everything a command produces besides the common report fields.
struct Outcome {
  ordered_json result;
  ordered_json metadata = ordered_json::object();
  ordered_json delta_used = nullptr;
  PrivacyCost charged;
  ordered_json neighbor = nullptr;
  bool uses_seed = true;
  int exit_code = kExitOk;
};

std::string Join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ' ';
    out += parts[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inputs.

CsvTable ReadInput(const Options& opts, std::istream& in) {
  if (opts.input.empty()) throw InvalidArgumentError("--input is required");
  if (opts.input == "-") return ParseCsv(in);
  std::ifstream file(opts.input, std::ios::binary);
  if (!file) throw DataError("cannot open input file '" + opts.input + "'");
  return ParseCsv(file);
}

BoundsManifest ReadBoundsFile(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataError("cannot open bounds file '" + path + "'");
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::exception& e) {
    throw DataError("bounds file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw DataError("bounds file must be a JSON object");
  BoundsManifest manifest;
  for (const auto& [name, entry] : doc.items()) {
    ColumnSpec spec;
    try {
      if (entry.contains("categories")) {
        spec.categories = entry.at("categories").get<std::vector<std::string>>();
        if (spec.categories->empty()) {
          throw DataError("column '" + name + "' declares no categories");
        }
      } else {
        Bounds b{entry.at("lower").get<double>(), entry.at("upper").get<double>()};
        b.Validate();
        spec.numeric = b;
      }
    } catch (const json::exception& e) {
      throw DataError("bad bounds for column '" + name + "': " + e.what());
    } catch (const InvalidArgumentError& e) {
      throw DataError("bad bounds for column '" + name + "': " + e.what());
    }
    manifest.emplace(name, std::move(spec));
  }
  return manifest;
}

BoundsManifest RequireBounds(const Options& opts) {
  if (opts.bounds_file.empty()) {
    throw InvalidArgumentError("--bounds-file is required");
  }
  return ReadBoundsFile(opts.bounds_file);
}

const Bounds& NumericBounds(const BoundsManifest& manifest,
                            const std::string& column) {
  auto it = manifest.find(column);
  if (it == manifest.end() || !it->second.numeric) {
    throw DataError("no numeric bounds for column '" + column + "'");
  }
  return *it->second.numeric;
}

const std::vector<std::string>& Categories(const BoundsManifest& manifest,
                                           const std::string& column) {
  auto it = manifest.find(column);
  if (it == manifest.end() || !it->second.categories) {
    throw DataError("no categories declared for column '" + column + "'");
  }
  return *it->second.categories;
}

double RequireEps(const Options& opts) {
  if (!opts.eps) throw InvalidArgumentError("--eps is required");
  return *opts.eps;
}

const std::string& RequireColumn(const Options& opts) {
  if (opts.column.empty()) throw InvalidArgumentError("--column is required");
  return opts.column;
}

uint64_t ResolveSeed(const Options& opts) {
  return opts.seed ? *opts.seed : SeedFromEntropy();
}

NeighborChoice ParseNeighbor(const std::string& name) {
  if (name == "bounded") return NeighborChoice::kBounded;
  if (name == "unbounded") return NeighborChoice::kUnbounded;
  return NeighborChoice::kBoth;
}

// Gaussian budgets are approximate (adp) or probabilistic (pdp).
PrivacyBudget DeltaBudget(const Options& opts) {
  const double eps = RequireEps(opts);
  return opts.type_dp == "pdp" ? PrivacyBudget::Probabilistic(eps, opts.delta)
                               : PrivacyBudget::Approximate(eps, opts.delta);
}

PrivacyBudget PureBudget(const Options& opts) {
  if (opts.delta != 0.0) {
    throw InvalidArgumentError("this release is pure DP; drop --delta");
  }
  return PrivacyBudget::Pure(RequireEps(opts));
}

StatRequest MakeStatRequest(const Options& opts) {
  StatRequest req;
  req.neighbor = ParseNeighbor(opts.neighbor);
  if (opts.mechanism == "gaussian") {
    req.mechanism = MechanismKind::kGaussian;
    req.budget = DeltaBudget(opts);
  } else {
    req.mechanism = MechanismKind::kLaplace;
    req.budget = PureBudget(opts);
  }
  req.Validate();
  return req;
}

ordered_json BoundsJson(const Bounds& b) {
  return ordered_json{{"lower", b.lower}, {"upper", b.upper}};
}

// ---------------------------------------------------------------------------
// Ledger.

class LedgerSession {
 public:
  explicit LedgerSession(const Options& opts) {
    if (opts.ledger.empty()) {
      if (opts.cap_eps || opts.cap_delta) {
        throw InvalidArgumentError("--cap-eps/--cap-delta need --ledger");
      }
      return;
    }
    path_ = opts.ledger;
    std::optional<PrivacyCost> cap;
    if (opts.cap_eps || opts.cap_delta) {
      cap = PrivacyCost{
          opts.cap_eps.value_or(std::numeric_limits<double>::infinity()),
          opts.cap_delta.value_or(std::numeric_limits<double>::infinity())};
    }
    ledger_ = BudgetLedger::Load(*path_, cap);
    if (!opts.tag.empty()) tag_ = opts.tag;
  }

  // Throws BudgetExhaustedError before anything is released.
  void Reserve(const PrivacyCost& cost) const {
    if (path_) ledger_.CheckAffordable(cost);
  }

  void Record(const std::string& operation, const PrivacyCost& cost) {
    if (!path_) return;
    const LedgerEntry& entry =
        ledger_.Record(operation, cost.epsilon, cost.delta, tag_);
    AppendLedgerEntry(*path_, entry);
  }

 private:
  std::optional<std::filesystem::path> path_;
  BudgetLedger ledger_;
  std::optional<std::string> tag_;
};

// ---------------------------------------------------------------------------
// stat

ordered_json ScalarResult(const std::vector<ScalarRelease>& releases,
                          Outcome& outcome) {
  if (releases.size() == 1) {
    outcome.delta_used = releases[0].sensitivity;
    return ordered_json{{"value", releases[0].value}};
  }
  ordered_json result = ordered_json::array();
  ordered_json deltas = ordered_json::array();
  for (const ScalarRelease& r : releases) {
    result.push_back({{"neighbor", ToString(r.neighbor)}, {"value", r.value}});
    deltas.push_back(r.sensitivity);
  }
  outcome.delta_used = deltas;
  return result;
}

std::vector<std::vector<double>> SplitByGroup(const CsvTable& table,
                                              const std::string& value_column,
                                              const std::string& group_column,
                                              std::vector<std::string>* names) {
  const std::vector<double> values = table.NumericColumn(value_column);
  const std::vector<std::string> groups = table.StringColumn(group_column);
  std::vector<std::vector<double>> out;
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < values.size(); ++i) {
    auto [it, inserted] = index.emplace(groups[i], out.size());
    if (inserted) {
      out.emplace_back();
      names->push_back(groups[i]);
    }
    out[it->second].push_back(values[i]);
  }
  return out;
}

std::vector<std::string> RequireColumns(const Options& opts, size_t count) {
  if (count > 0 && opts.columns.size() != count) {
    std::ostringstream msg;
    msg << "--columns needs exactly " << count << " names";
    throw InvalidArgumentError(msg.str());
  }
  if (opts.columns.empty()) throw InvalidArgumentError("--columns is required");
  return opts.columns;
}

HistogramSpec MakeHistogramSpec(const Options& opts,
                                const std::optional<BoundsManifest>& manifest) {
  if (opts.breaks.empty()) throw InvalidArgumentError("--breaks is required");
  HistogramSpec spec;
  if (opts.breaks.find(',') != std::string::npos) {
    std::vector<double> edges;
    std::stringstream ss(opts.breaks);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        edges.push_back(ParseDouble(item));
      } catch (const DataError&) {
        throw InvalidArgumentError("bad --breaks entry '" + item + "'");
      }
    }
    spec = HistogramSpec::FromEdges(std::move(edges));
  } else {
    size_t bins = 0;
    try {
      size_t used = 0;
      bins = std::stoul(opts.breaks, &used);
      if (used != opts.breaks.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InvalidArgumentError("--breaks must be a bin count or edge list");
    }
    if (!manifest) {
      throw InvalidArgumentError("a bin count needs --bounds-file");
    }
    spec = HistogramSpec::FromBinCount(bins,
                                       NumericBounds(*manifest, opts.column));
  }
  spec.normalize = opts.normalize;
  spec.allow_negative = opts.allow_negative;
  return spec;
}

Outcome RunStat(const Options& opts, std::istream& in, LedgerSession& ledger,
                RandomSource& rng) {
  const std::string& stat = opts.action;
  Outcome outcome;
  ordered_json& meta = outcome.metadata;
  meta["statistic"] = stat;

  const bool is_quantile = stat == "quantile" || stat == "median";
  StatRequest req;
  if (is_quantile) {
    req.neighbor = ParseNeighbor(opts.neighbor);
    req.budget = PureBudget(opts);
  } else {
    req = MakeStatRequest(opts);
    meta["mechanism"] = ToString(req.mechanism);
  }
  meta["variant"] = ToString(req.budget.variant());
  meta["epsilon"] = req.budget.epsilon();
  meta["delta"] = req.budget.delta();

  const std::vector<NeighborModel> neighbors = req.NeighborModels();
  outcome.neighbor = opts.neighbor;
  const PrivacyCost per_release{req.budget.epsilon(), req.budget.delta()};
  const PrivacyCost total{per_release.epsilon * neighbors.size(),
                          per_release.delta * neighbors.size()};

  // Load everything and validate before any budget is spent.
  const CsvTable table = ReadInput(opts, in);
  const bool needs_bounds = stat != "table" && stat != "histogram";
  std::optional<BoundsManifest> manifest;
  if (needs_bounds || !opts.bounds_file.empty()) manifest = RequireBounds(opts);
  if (stat == "table" && !manifest) manifest = RequireBounds(opts);

  std::function<ordered_json()> release;
  if (stat == "mean" || stat == "var" || stat == "sd") {
    const std::string& column = RequireColumn(opts);
    const Bounds bounds = NumericBounds(*manifest, column);
    auto x = std::make_shared<std::vector<double>>(table.NumericColumn(column));
    meta["column"] = column;
    meta["n"] = x->size();
    meta["bounds"] = BoundsJson(bounds);
    release = [&, x, bounds] {
      auto fn = stat == "mean" ? MeanDp : stat == "var" ? VarDp : SdDp;
      return ScalarResult(fn(*x, bounds, req, rng), outcome);
    };
  } else if (stat == "cov") {
    const std::vector<std::string> cols = RequireColumns(opts, 2);
    const Bounds b1 = NumericBounds(*manifest, cols[0]);
    const Bounds b2 = NumericBounds(*manifest, cols[1]);
    auto x1 = std::make_shared<std::vector<double>>(table.NumericColumn(cols[0]));
    auto x2 = std::make_shared<std::vector<double>>(table.NumericColumn(cols[1]));
    meta["columns"] = cols;
    meta["n"] = x1->size();
    meta["bounds"] = {BoundsJson(b1), BoundsJson(b2)};
    release = [&, x1, x2, b1, b2] {
      return ScalarResult(CovDp(*x1, *x2, b1, b2, req, rng), outcome);
    };
  } else if (stat == "pooled-var") {
    const std::string& column = RequireColumn(opts);
    if (opts.group_column.empty()) {
      throw InvalidArgumentError("--group-column is required");
    }
    const Bounds bounds = NumericBounds(*manifest, column);
    std::vector<std::string> names;
    auto groups = std::make_shared<GroupCollection>(
        SplitByGroup(table, column, opts.group_column, &names), bounds,
        opts.approx_n_max);
    meta["column"] = column;
    meta["group_column"] = opts.group_column;
    meta["groups"] = names;
    meta["group_sizes"] = groups->sizes();
    meta["approx_n_max"] = opts.approx_n_max;
    meta["bounds"] = BoundsJson(bounds);
    release = [&, groups] {
      return ScalarResult(PooledVarDp(*groups, req, rng), outcome);
    };
  } else if (stat == "pooled-cov") {
    const std::vector<std::string> cols = RequireColumns(opts, 2);
    if (opts.group_column.empty()) {
      throw InvalidArgumentError("--group-column is required");
    }
    const Bounds b1 = NumericBounds(*manifest, cols[0]);
    const Bounds b2 = NumericBounds(*manifest, cols[1]);
    std::vector<std::string> names;
    std::vector<std::string> ignored;
    const auto g1 = SplitByGroup(table, cols[0], opts.group_column, &names);
    const auto g2 = SplitByGroup(table, cols[1], opts.group_column, &ignored);
    auto groups = std::make_shared<std::vector<PairedGroup>>();
    std::vector<size_t> sizes;
    for (size_t k = 0; k < g1.size(); ++k) {
      groups->push_back(PairedGroup{g1[k], g2[k]});
      sizes.push_back(g1[k].size());
    }
    meta["columns"] = cols;
    meta["group_column"] = opts.group_column;
    meta["groups"] = names;
    meta["group_sizes"] = sizes;
    meta["approx_n_max"] = opts.approx_n_max;
    meta["bounds"] = {BoundsJson(b1), BoundsJson(b2)};
    release = [&, groups, b1, b2] {
      return ScalarResult(
          PooledCovDp(*groups, b1, b2, opts.approx_n_max, req, rng), outcome);
    };
  } else if (is_quantile) {
    const std::string& column = RequireColumn(opts);
    const Bounds bounds = NumericBounds(*manifest, column);
    const double q = stat == "median" ? 0.5 : opts.q;
    if (!(q >= 0.0 && q <= 1.0)) {
      throw InvalidArgumentError("--q must lie in [0, 1]");
    }
    auto x = std::make_shared<std::vector<double>>(table.NumericColumn(column));
    meta["column"] = column;
    meta["n"] = x->size();
    meta["q"] = q;
    meta["uniform_sampling"] = opts.uniform_sampling;
    meta["bounds"] = BoundsJson(bounds);
    release = [&, x, bounds, q] {
      std::vector<ScalarRelease> releases;
      for (NeighborModel nb : neighbors) {
        ScalarRelease r;
        r.statistic = stat;
        r.neighbor = nb;
        r.sensitivity = kQuantileUtilitySensitivity;
        r.value =
            QuantileDp(*x, q, req.budget, bounds, opts.uniform_sampling, rng);
        releases.push_back(r);
      }
      return ScalarResult(releases, outcome);
    };
  } else if (stat == "histogram") {
    const std::string& column = RequireColumn(opts);
    const HistogramSpec spec = MakeHistogramSpec(opts, manifest);
    auto x = std::make_shared<std::vector<double>>(table.NumericColumn(column));
    meta["column"] = column;
    meta["n"] = x->size();
    meta["normalize"] = spec.normalize;
    meta["allow_negative"] = spec.allow_negative;
    release = [&, x, spec] {
      const std::vector<HistogramRelease> rs = HistogramDp(*x, spec, req, rng);
      const char* key = spec.normalize ? "densities" : "counts";
      if (rs.size() == 1) {
        outcome.delta_used = rs[0].sensitivity;
        return ordered_json{{"edges", rs[0].edges}, {key, rs[0].values}};
      }
      ordered_json result = ordered_json::array();
      ordered_json deltas = ordered_json::array();
      for (const HistogramRelease& r : rs) {
        result.push_back({{"neighbor", ToString(r.neighbor)},
                          {"edges", r.edges},
                          {key, r.values}});
        deltas.push_back(r.sensitivity);
      }
      outcome.delta_used = deltas;
      return result;
    };
  } else if (stat == "table") {
    const std::vector<std::string> cols = RequireColumns(opts, 0);
    auto factors = std::make_shared<std::vector<Factor>>();
    for (const std::string& c : cols) {
      factors->push_back(
          Factor{c, Categories(*manifest, c), table.StringColumn(c)});
    }
    CrossTabulate(*factors);  // Validates levels up front.
    meta["columns"] = cols;
    meta["n"] = table.rows.size();
    meta["allow_negative"] = opts.allow_negative;
    release = [&, factors] {
      const std::vector<TableRelease> rs =
          TableDp(*factors, req, opts.allow_negative, rng);
      auto one = [](const TableRelease& r) {
        return ordered_json{{"factors", r.factor_names},
                            {"levels", r.levels},
                            {"counts", r.counts}};
      };
      if (rs.size() == 1) {
        outcome.delta_used = rs[0].sensitivity;
        return one(rs[0]);
      }
      ordered_json result = ordered_json::array();
      ordered_json deltas = ordered_json::array();
      for (const TableRelease& r : rs) {
        ordered_json item = one(r);
        item["neighbor"] = ToString(r.neighbor);
        result.push_back(item);
        deltas.push_back(r.sensitivity);
      }
      outcome.delta_used = deltas;
      return result;
    };
  }

  ledger.Reserve(total);
  outcome.result = release();
  for (size_t k = 0; k < neighbors.size(); ++k) {
    ledger.Record("stat " + stat, per_release);
  }
  outcome.charged = total;
  return outcome;
}

// ---------------------------------------------------------------------------
// fit / tune / predict

ModelKind ResolveKind(const Options& opts) {
  if (opts.action == "logit") return ModelKind::kLogistic;
  if (opts.action == "linreg") return ModelKind::kLinear;
  return opts.kernel == "gaussian" ? ModelKind::kSvmGaussian
                                   : ModelKind::kSvmLinear;
}

ModelSpec MakeModelSpec(const Options& opts) {
  ModelSpec spec;
  spec.kind = ResolveKind(opts);
  if (spec.kind == ModelKind::kLinear && opts.delta > 0.0) {
    spec.budget = DeltaBudget(opts);
  } else {
    spec.budget = PureBudget(opts);
  }
  spec.gamma = opts.gamma;
  spec.perturbation = opts.method == "output" ? Perturbation::kOutput
                                              : Perturbation::kObjective;
  spec.huber_h = opts.huber_h;
  spec.rff_dim = opts.rff_dim;
  spec.kernel_param = opts.kernel_param;
  spec.weight_upper_bound = opts.weight_bound;
  spec.add_bias = opts.add_bias;
  if (spec.kind == ModelKind::kSvmGaussian && opts.rff_dim <= 0) {
    throw InvalidArgumentError("--kernel gaussian needs --D");
  }
  if (!opts.weights_column.empty() && !opts.weight_bound) {
    throw InvalidArgumentError("--weights-column needs --weight-bound");
  }
  spec.Validate();
  return spec;
}

std::vector<std::string> FeatureColumns(const Options& opts,
                                        const CsvTable& table) {
  if (!opts.features.empty()) return opts.features;
  std::vector<std::string> out;
  for (const std::string& name : table.header) {
    if (name != opts.label && name != opts.weights_column) out.push_back(name);
  }
  if (out.empty()) throw DataError("input has no feature columns");
  return out;
}

Eigen::MatrixXd FeatureMatrix(const CsvTable& table,
                              const std::vector<std::string>& features) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(table.rows.size()),
                    static_cast<Eigen::Index>(features.size()));
  for (size_t j = 0; j < features.size(); ++j) {
    const std::vector<double> col = table.NumericColumn(features[j]);
    for (size_t i = 0; i < col.size(); ++i) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }
  }
  return X;
}

Eigen::VectorXd ToEigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

struct LoadedTraining {
  TrainingData data;
  std::vector<std::string> features;
};

LoadedTraining LoadTraining(const Options& opts, const ModelSpec& spec,
                            std::istream& in, std::ostream& err) {
  LoadedTraining out;
  const CsvTable table = ReadInput(opts, in);
  out.features = FeatureColumns(opts, table);
  out.data.X = FeatureMatrix(table, out.features);
  out.data.y = ToEigen(table.NumericColumn(opts.label));
  if (!opts.weights_column.empty()) {
    out.data.weights = ToEigen(table.NumericColumn(opts.weights_column));
  }
  if (spec.kind == ModelKind::kSvmGaussian) {
    if (!opts.bounds_file.empty()) {
      err << "warning: bounds are not needed for the Gaussian kernel and "
             "were ignored\n";
    }
    return out;
  }
  const BoundsManifest manifest = RequireBounds(opts);
  for (const std::string& f : out.features) {
    out.data.bounds.push_back(NumericBounds(manifest, f));
  }
  if (spec.kind == ModelKind::kLinear) {
    auto it = manifest.find(opts.label);
    if (it == manifest.end()) it = manifest.find("y");
    if (it == manifest.end() || !it->second.numeric) {
      throw DataError("no bounds for the response '" + opts.label + "'");
    }
    out.data.y_bounds = *it->second.numeric;
  }
  return out;
}

ordered_json ModelMetadata(const ModelSpec& spec, size_t n) {
  ordered_json meta;
  meta["model"] = ToString(spec.kind);
  meta["n"] = n;
  meta["variant"] = ToString(spec.budget.variant());
  meta["epsilon"] = spec.budget.epsilon();
  meta["delta"] = spec.budget.delta();
  if (IsClassifier(spec.kind)) {
    meta["method"] = ToString(spec.perturbation);
  }
  return meta;
}

void EmitWarnings(const TrainedModel& model, std::ostream& err) {
  for (const std::string& w : model.warnings) {
    if (model.kind == ModelKind::kSvmGaussian &&
        w.find("bounds") != std::string::npos) {
      continue;  // Already reported while loading.
    }
    err << "warning: " << w << "\n";
  }
}

Outcome RunFit(const Options& opts, std::istream& in, std::ostream& err,
               LedgerSession& ledger, RandomSource& rng) {
  const ModelSpec spec = MakeModelSpec(opts);
  LoadedTraining training = LoadTraining(opts, spec, in, err);
  const PrivacyCost cost{spec.budget.epsilon(), spec.budget.delta()};
  ledger.Reserve(cost);
  TrainedModel model = FitModel(spec, training.data, rng);
  model.feature_names = training.features;
  ledger.Record("fit " + opts.action, cost);
  EmitWarnings(model, err);
  if (!opts.model_out.empty()) SaveModel(model, opts.model_out);

  Outcome outcome;
  outcome.result = ModelToJson(model);
  outcome.metadata = ModelMetadata(spec, training.data.X.rows());
  outcome.metadata["gamma"] = spec.gamma;
  outcome.charged = cost;
  outcome.neighbor = "bounded";
  return outcome;
}

Outcome RunTune(const Options& opts, std::istream& in, std::ostream& err,
                LedgerSession& ledger, RandomSource& rng) {
  if (opts.gamma_grid.empty()) {
    throw InvalidArgumentError("--gamma-grid is required");
  }
  const ModelSpec base = MakeModelSpec(opts);
  std::vector<ModelSpec> candidates;
  for (double g : opts.gamma_grid) {
    ModelSpec c = base;
    c.gamma = g;
    c.Validate();
    candidates.push_back(c);
  }
  LoadedTraining training = LoadTraining(opts, base, in, err);
  const size_t n = static_cast<size_t>(training.data.X.rows());
  if (n < candidates.size() + 1) {
    std::ostringstream msg;
    msg << n << " rows cannot be split into " << candidates.size() + 1
        << " folds";
    throw DataError(msg.str());
  }
  const PrivacyCost cost{base.budget.epsilon(), base.budget.delta()};
  ledger.Reserve(cost);
  TuningResult tuned = TuneModels(candidates, training.data, rng);
  tuned.model.feature_names = training.features;
  ledger.Record("tune " + opts.action, cost);
  EmitWarnings(tuned.model, err);
  if (!opts.model_out.empty()) SaveModel(tuned.model, opts.model_out);

  Outcome outcome;
  outcome.result = ordered_json{{"gamma_grid", opts.gamma_grid},
                                {"selected_index", tuned.selected},
                                {"chosen_gamma", candidates[tuned.selected].gamma},
                                {"model", ModelToJson(tuned.model)}};
  outcome.metadata = ModelMetadata(base, n);
  outcome.metadata["folds"] = candidates.size() + 1;
  outcome.delta_used = tuned.sensitivity;
  outcome.charged = cost;
  outcome.neighbor = "bounded";
  return outcome;
}

Outcome RunPredict(const Options& opts, std::istream& in) {
  if (opts.model.empty()) throw InvalidArgumentError("--model is required");
  const TrainedModel model = LoadModel(opts.model);
  if (opts.add_bias_given && opts.add_bias != model.spec.add_bias) {
    throw InvalidArgumentError(
        "--add-bias does not match how the model was trained");
  }
  const CsvTable table = ReadInput(opts, in);
  std::vector<std::string> features = model.feature_names;
  if (features.empty()) features = FeatureColumns(opts, table);
  const Eigen::VectorXd pred =
      Predict(model, FeatureMatrix(table, features), opts.raw);

  Outcome outcome;
  outcome.result = ordered_json{
      {"predictions", std::vector<double>(pred.data(), pred.data() + pred.size())}};
  outcome.metadata = ordered_json{{"model", ToString(model.kind)},
                                  {"n", pred.size()},
                                  {"raw", opts.raw}};
  outcome.uses_seed = false;
  return outcome;
}

// ---------------------------------------------------------------------------
// mech

std::vector<double> BroadcastSensitivity(const Options& opts, size_t n) {
  if (opts.sensitivity.size() == 1) {
    return std::vector<double>(n, opts.sensitivity[0]);
  }
  if (opts.sensitivity.size() != n) {
    throw InvalidArgumentError(
        "--sensitivity needs one value or one per --values entry");
  }
  return opts.sensitivity;
}

Outcome RunMech(const Options& opts, LedgerSession& ledger,
                RandomSource& rng) {
  Outcome outcome;
  if (opts.sensitivity.empty()) {
    throw InvalidArgumentError("--sensitivity is required");
  }
  std::optional<BudgetAllocation> alloc;
  if (!opts.alloc.empty()) alloc.emplace(opts.alloc);

  PrivacyBudget budget = PrivacyBudget::Pure(1.0);
  std::function<ordered_json()> release;
  if (opts.action == "laplace" || opts.action == "gaussian") {
    if (opts.values.empty()) throw InvalidArgumentError("--values is required");
    const bool laplace = opts.action == "laplace";
    budget = laplace ? PureBudget(opts) : DeltaBudget(opts);
    SensitivitySpec sens{laplace ? Norm::kL1 : Norm::kL2,
                         BroadcastSensitivity(opts, opts.values.size()),
                         NeighborModel::kBounded};
    sens.Validate(opts.values.size());
    if (alloc && alloc->size() != opts.values.size()) {
      throw InvalidArgumentError("--alloc needs one entry per value");
    }
    // Calibrate up front so invalid parameters fail before spending.
    const std::vector<double> scales = laplace
                                           ? LaplaceScales(budget, sens, alloc)
                                           : GaussianSigmas(budget, sens, alloc);
    outcome.metadata[laplace ? "scales" : "sigmas"] = scales;
    outcome.delta_used = sens.per_coordinate;
    release = [&, sens, budget, laplace] {
      const std::vector<double> noisy =
          laplace ? LaplaceMechanism(opts.values, budget, sens, alloc, rng)
                  : GaussianMechanism(opts.values, budget, sens, alloc, rng);
      return ordered_json{{"values", noisy}};
    };
  } else {
    if (opts.utility.empty()) {
      throw InvalidArgumentError("--utility is required");
    }
    if (opts.sensitivity.size() != 1) {
      throw InvalidArgumentError("--sensitivity takes one value here");
    }
    if (!opts.measure.empty() && opts.measure.size() != opts.utility.size()) {
      throw InvalidArgumentError("--measure needs one entry per utility");
    }
    budget = PureBudget(opts);
    const double sens = opts.sensitivity[0];
    outcome.metadata["probabilities"] = ExponentialMechanismProbabilities(
        opts.utility, budget.epsilon(), sens, opts.measure);
    outcome.delta_used = sens;
    release = [&, budget, sens] {
      return ordered_json{{"index", ExponentialMechanism(
                                        opts.utility, budget, sens,
                                        opts.measure, rng)}};
    };
  }
  outcome.metadata["mechanism"] = opts.action;
  outcome.metadata["variant"] = ToString(budget.variant());
  outcome.metadata["epsilon"] = budget.epsilon();
  outcome.metadata["delta"] = budget.delta();
  const PrivacyCost cost{budget.epsilon(), budget.delta()};
  ledger.Reserve(cost);
  outcome.result = release();
  ledger.Record("mech " + opts.action, cost);
  outcome.charged = cost;
  return outcome;
}

// ---------------------------------------------------------------------------
// budget

ordered_json CostJson(const PrivacyCost& c) {
  auto value = [](double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
  };
  return ordered_json{{"epsilon", value(c.epsilon)}, {"delta", value(c.delta)}};
}

Outcome RunBudget(const Options& opts) {
  if (opts.ledger.empty()) throw InvalidArgumentError("--ledger is required");
  std::optional<PrivacyCost> cap;
  if (opts.cap_eps || opts.cap_delta) {
    cap = PrivacyCost{
        opts.cap_eps.value_or(std::numeric_limits<double>::infinity()),
        opts.cap_delta.value_or(std::numeric_limits<double>::infinity())};
  }
  const BudgetLedger ledger = BudgetLedger::Load(opts.ledger, cap);
  Outcome outcome;
  outcome.uses_seed = false;
  ordered_json result;
  result["entries"] = ledger.entries().size();
  result["sequential"] = CostJson(ledger.SequentialTotal());
  try {
    result["parallel"] = CostJson(ParallelTotal(ledger.entries()));
  } catch (const InvalidArgumentError&) {
    result["parallel"] = nullptr;  // Tags missing or repeated.
  }
  if (cap) {
    result["cap"] = CostJson(*cap);
    result["remaining"] = CostJson(ledger.Remaining());
  }
  if (opts.action == "check") {
    if (!cap) {
      throw InvalidArgumentError("budget check needs --cap-eps or --cap-delta");
    }
    const PrivacyCost request{opts.eps.value_or(0.0), opts.delta};
    const bool ok = ledger.CanAfford(request);
    result["request"] = CostJson(request);
    result["affordable"] = ok;
    if (!ok) outcome.exit_code = kExitBudget;
  }
  outcome.result = result;
  return outcome;
}

// ---------------------------------------------------------------------------
// Parsing.

void AddPrivacyFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--eps", o.eps, "Privacy parameter epsilon")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delta", o.delta, "Privacy parameter delta")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--type-dp", o.type_dp, "adp or pdp for delta > 0")
      ->check(CLI::IsMember({"adp", "pdp"}));
  cmd->add_option("--seed", o.seed, "Random seed (default: OS entropy)");
}

void AddLedgerFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--ledger", o.ledger, "Budget ledger file (JSON lines)");
  cmd->add_option("--tag", o.tag, "Partition tag recorded in the ledger");
  cmd->add_option("--cap-eps", o.cap_eps, "Total epsilon the ledger allows")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cap-delta", o.cap_delta, "Total delta the ledger allows")
      ->check(CLI::NonNegativeNumber);
}

void AddModelFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("kind", o.action, "logit, svm or linreg")
      ->required()
      ->check(CLI::IsMember({"logit", "svm", "linreg"}));
  cmd->add_option("--input", o.input, "CSV file, or - for stdin");
  cmd->add_option("--bounds-file", o.bounds_file, "JSON bounds manifest");
  cmd->add_option("--label", o.label, "Response column (default y)");
  cmd->add_option("--features", o.features, "Feature columns")
      ->delimiter(',');
  cmd->add_option("--method", o.method, "output or objective perturbation")
      ->check(CLI::IsMember({"output", "objective"}));
  cmd->add_option("--kernel", o.kernel, "linear or gaussian (svm)")
      ->check(CLI::IsMember({"linear", "gaussian"}));
  cmd->add_option("--D", o.rff_dim, "Random feature dimension")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--kernel-param", o.kernel_param, "Gaussian kernel beta");
  cmd->add_option("--huber-h", o.huber_h, "Huber smoothing width");
  cmd->add_option("--weights-column", o.weights_column,
                  "Observation weight column (svm)");
  cmd->add_option("--weight-bound", o.weight_bound, "Upper bound on weights");
  cmd->add_flag("--add-bias", o.add_bias, "Fit an intercept");
  cmd->add_option("--model-out", o.model_out, "Write the model JSON here");
  AddPrivacyFlags(cmd, o);
  AddLedgerFlags(cmd, o);
}

ordered_json BuildReport(const std::vector<std::string>& args,
                         const Outcome& outcome,
                         std::optional<uint64_t> seed) {
  std::vector<std::string> words;
  for (const std::string& a : args) {
    if (!a.empty() && a[0] == '-') break;
    words.push_back(a);
  }
  ordered_json report;
  report["command"] = Join(words);
  report["result"] = outcome.result;
  report["metadata"] = outcome.metadata;
  report["delta_used"] = outcome.delta_used;
  report["charged"] = CostJson(outcome.charged);
  report["neighbor"] = outcome.neighbor;
  report["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  report["version"] = kVersion;
  return report;
}

}  // namespace

int RunDpkit(const std::vector<std::string>& args, std::istream& in,
             std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Differentially private statistics and models", "dpkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CLI::App* stat = app.add_subcommand("stat", "Private descriptive statistics");
  stat->add_option("statistic", o.action, "Statistic to release")
      ->required()
      ->check(CLI::IsMember({"mean", "var", "sd", "cov", "pooled-var",
                             "pooled-cov", "quantile", "median", "histogram",
                             "table"}));
  stat->add_option("--input", o.input, "CSV file, or - for stdin");
  stat->add_option("--bounds-file", o.bounds_file, "JSON bounds manifest");
  stat->add_option("--column", o.column, "Column to summarize");
  stat->add_option("--columns", o.columns, "Columns (cov, pooled-cov, table)")
      ->delimiter(',');
  stat->add_option("--group-column", o.group_column,
                   "Grouping column (pooled statistics)");
  stat->add_option("--mechanism", o.mechanism, "laplace or gaussian")
      ->check(CLI::IsMember({"laplace", "gaussian"}));
  stat->add_option("--neighbor", o.neighbor, "bounded, unbounded or both")
      ->check(CLI::IsMember({"bounded", "unbounded", "both"}));
  stat->add_option("--q", o.q, "Quantile in [0, 1]");
  stat->add_option("--breaks", o.breaks, "Bin count or comma-separated edges");
  stat->add_flag("--normalize", o.normalize, "Release densities");
  stat->add_flag("--allow-negative", o.allow_negative,
                 "Keep negative noisy counts");
  stat->add_flag("--uniform-sampling", o.uniform_sampling,
                 "Sample the quantile uniformly within its interval");
  stat->add_flag("--approx-n-max", o.approx_n_max,
                 "Use N in place of the largest group size");
  AddPrivacyFlags(stat, o);
  AddLedgerFlags(stat, o);

  CLI::App* fit = app.add_subcommand("fit", "Train a private model");
  AddModelFlags(fit, o);
  fit->add_option("--gamma", o.gamma, "Regularization constant")
      ->check(CLI::PositiveNumber);

  CLI::App* tune = app.add_subcommand("tune", "Privately select gamma");
  AddModelFlags(tune, o);
  tune->add_option("--gamma-grid", o.gamma_grid, "Candidate gammas")
      ->delimiter(',')
      ->required();

  CLI::App* predict = app.add_subcommand("predict", "Predict with a model");
  predict->add_option("--model", o.model, "Model JSON file")->required();
  predict->add_option("--input", o.input, "CSV file, or - for stdin")
      ->required();
  predict->add_flag("--raw", o.raw, "Probabilities or margins, not labels");
  CLI::Option* bias_flag =
      predict->add_flag("--add-bias", o.add_bias, "Model has an intercept");
  predict->add_option("--ledger", o.ledger,
                      "Accepted for symmetry; predictions never spend budget");

  CLI::App* mech = app.add_subcommand("mech", "Run a mechanism directly");
  mech->add_option("mechanism", o.action, "laplace, gaussian or exponential")
      ->required()
      ->check(CLI::IsMember({"laplace", "gaussian", "exponential"}));
  mech->add_option("--values", o.values, "Values to privatize")
      ->delimiter(',');
  mech->add_option("--sensitivity", o.sensitivity, "Per-coordinate sensitivity")
      ->delimiter(',');
  mech->add_option("--alloc", o.alloc, "Budget proportions per coordinate")
      ->delimiter(',');
  mech->add_option("--utility", o.utility, "Utilities (exponential)")
      ->delimiter(',');
  mech->add_option("--measure", o.measure, "Base measure (exponential)")
      ->delimiter(',');
  AddPrivacyFlags(mech, o);
  AddLedgerFlags(mech, o);

  CLI::App* budget = app.add_subcommand("budget", "Inspect a budget ledger");
  budget->add_option("action", o.action, "report or check")
      ->required()
      ->check(CLI::IsMember({"report", "check"}));
  budget->add_option("--eps", o.eps, "Epsilon of a planned release (check)")
      ->check(CLI::NonNegativeNumber);
  budget->add_option("--delta", o.delta, "Delta of a planned release (check)")
      ->check(CLI::Range(0.0, 1.0));
  AddLedgerFlags(budget, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.add_bias_given = bias_flag->count() > 0;

  try {
    Outcome outcome;
    std::optional<uint64_t> seed;
    if (budget->parsed()) {
      outcome = RunBudget(o);
    } else if (predict->parsed()) {
      outcome = RunPredict(o, in);
    } else {
      seed = ResolveSeed(o);
      RandomSource rng(*seed);
      LedgerSession ledger(o);
      if (stat->parsed()) {
        outcome = RunStat(o, in, ledger, rng);
      } else if (fit->parsed()) {
        outcome = RunFit(o, in, err, ledger, rng);
      } else if (tune->parsed()) {
        outcome = RunTune(o, in, err, ledger, rng);
      } else {
        outcome = RunMech(o, ledger, rng);
      }
    }
    out << BuildReport(args, outcome, seed).dump(2) << "\n";
    return outcome.exit_code;
  } catch (const BudgetExhaustedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const InvalidArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace dpkit::cli
