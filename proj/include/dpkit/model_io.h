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

#ifndef DPKIT_MODEL_IO_H_
#define DPKIT_MODEL_IO_H_

#include <string>

#include "json.hpp"

#include "dpkit/models.h"

namespace dpkit {

// JSON form of a trained model. Coefficients are written with round-trip
// precision; the RFF frequencies are not stored, only (D, beta, seed).
nlohmann::ordered_json ModelToJson(const TrainedModel& model);

// Throws DataError on a malformed document.
TrainedModel ModelFromJson(const nlohmann::json& doc);

void SaveModel(const TrainedModel& model, const std::string& path);
// Throws DataError if the file is missing or malformed.
TrainedModel LoadModel(const std::string& path);

// Budget field helpers shared with the command-line reports.
nlohmann::ordered_json BudgetToJson(const PrivacyBudget& budget);
PrivacyBudget BudgetFromJson(const nlohmann::json& doc);

}  // namespace dpkit

#endif  // DPKIT_MODEL_IO_H_
