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

#include "dpkit/accountant.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "dpkit/errors.h"
#include "json.hpp"

namespace dpkit {
namespace {

using ordered_json = nlohmann::ordered_json;

// Slack for comparing composed totals against a cap, so that e.g. three
// entries of 1/3 fit a cap of 1.
constexpr double kCapTolerance = 1e-12;

void ValidateEntry(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("ledger entries need a finite epsilon > 0");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidArgumentError("ledger entries need a finite delta >= 0");
  }
}

bool WithinCap(double value, double cap) {
  return value <= cap + kCapTolerance * std::max(1.0, std::abs(cap));
}

}  // namespace

PrivacyCost SequentialTotal(std::span<const LedgerEntry> entries) {
  PrivacyCost total;
  for (const LedgerEntry& e : entries) {
    total.epsilon += e.epsilon;
    total.delta += e.delta;
  }
  return total;
}

PrivacyCost ParallelTotal(std::span<const LedgerEntry> entries) {
  std::set<std::string> seen;
  PrivacyCost total;
  for (const LedgerEntry& e : entries) {
    if (!e.partition_tag) {
      throw InvalidArgumentError("parallel composition: entry '" + e.operation +
                                 "' has no partition tag");
    }
    if (!seen.insert(*e.partition_tag).second) {
      throw InvalidArgumentError("parallel composition: duplicate partition "
                                 "tag '" + *e.partition_tag + "'");
    }
    total.epsilon = std::max(total.epsilon, e.epsilon);
    total.delta = std::max(total.delta, e.delta);
  }
  return total;
}

const LedgerEntry& BudgetLedger::Record(std::string operation, double epsilon,
                                        double delta,
                                        std::optional<std::string> tag) {
  ValidateEntry(epsilon, delta);
  CheckAffordable({epsilon, delta});
  LedgerEntry entry;
  entry.operation = std::move(operation);
  entry.epsilon = epsilon;
  entry.delta = delta;
  entry.partition_tag = std::move(tag);
  entry.sequence = entries_.empty() ? 0 : entries_.back().sequence + 1;
  entries_.push_back(std::move(entry));
  return entries_.back();
}

bool BudgetLedger::CanAfford(const PrivacyCost& cost) const {
  if (!cap_) return true;
  const PrivacyCost total = SequentialTotal();
  return WithinCap(total.epsilon + cost.epsilon, cap_->epsilon) &&
         WithinCap(total.delta + cost.delta, cap_->delta);
}

void BudgetLedger::CheckAffordable(const PrivacyCost& cost) const {
  if (CanAfford(cost)) return;
  const PrivacyCost remaining = Remaining();
  std::ostringstream msg;
  msg << "privacy budget exhausted: requested (eps=" << cost.epsilon
      << ", delta=" << cost.delta << "), remaining (eps=" << remaining.epsilon
      << ", delta=" << remaining.delta << ")";
  throw BudgetExhaustedError(msg.str(), remaining.epsilon, remaining.delta);
}

PrivacyCost BudgetLedger::SequentialTotal() const {
  return dpkit::SequentialTotal(entries_);
}

PrivacyCost BudgetLedger::Remaining() const {
  if (!cap_) {
    return {std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }
  const PrivacyCost total = SequentialTotal();
  return {std::max(0.0, cap_->epsilon - total.epsilon),
          std::max(0.0, cap_->delta - total.delta)};
}

void BudgetLedger::Append(LedgerEntry entry) {
  try {
    ValidateEntry(entry.epsilon, entry.delta);
  } catch (const InvalidArgumentError& e) {
    throw DataError(std::string("bad ledger entry: ") + e.what());
  }
  if (!entries_.empty() && entry.sequence <= entries_.back().sequence) {
    throw DataError("ledger sequence numbers must increase");
  }
  entries_.push_back(std::move(entry));
}

std::string LedgerEntryToJson(const LedgerEntry& entry) {
  ordered_json j;
  j["op"] = entry.operation;
  j["eps"] = entry.epsilon;
  j["delta"] = entry.delta;
  j["tag"] = entry.partition_tag ? ordered_json(*entry.partition_tag)
                                 : ordered_json(nullptr);
  j["seq"] = entry.sequence;
  return j.dump();
}

LedgerEntry LedgerEntryFromJson(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed ledger line: ") + e.what());
  }
  try {
    LedgerEntry entry;
    entry.operation = j.at("op").get<std::string>();
    entry.epsilon = j.at("eps").get<double>();
    entry.delta = j.at("delta").get<double>();
    if (!j.at("tag").is_null()) entry.partition_tag = j["tag"].get<std::string>();
    entry.sequence = j.at("seq").get<uint64_t>();
    return entry;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("ledger line is missing a field: ") + e.what());
  }
}

std::string BudgetLedger::ToJsonLines() const {
  std::string out;
  for (const LedgerEntry& e : entries_) {
    out += LedgerEntryToJson(e);
    out += '\n';
  }
  return out;
}

BudgetLedger BudgetLedger::FromJsonLines(const std::string& text,
                                         std::optional<PrivacyCost> cap) {
  BudgetLedger ledger(cap);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ledger.Append(LedgerEntryFromJson(line));
  }
  return ledger;
}

BudgetLedger BudgetLedger::Load(const std::filesystem::path& path,
                                std::optional<PrivacyCost> cap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return BudgetLedger(cap);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return FromJsonLines(buffer.str(), cap);
}

void AppendLedgerEntry(const std::filesystem::path& path,
                       const LedgerEntry& entry) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw DataError("cannot open ledger file " + path.string());
  out << LedgerEntryToJson(entry) << '\n';
  if (!out) throw DataError("failed writing ledger file " + path.string());
}

}  // namespace dpkit
