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

#ifndef DPKIT_ACCOUNTANT_H_
#define DPKIT_ACCOUNTANT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dpkit {

struct PrivacyCost {
  double epsilon = 0.0;
  double delta = 0.0;
};

struct LedgerEntry {
  std::string operation;
  double epsilon = 0.0;
  double delta = 0.0;
  // Set when the entry touched one of several disjoint data partitions.
  std::optional<std::string> partition_tag;
  uint64_t sequence = 0;
};

// Sum of epsilons and of deltas (basic sequential composition).
PrivacyCost SequentialTotal(std::span<const LedgerEntry> entries);

// Max of epsilons and of deltas (parallel composition over disjoint data).
// Every entry must carry a partition tag and the tags must be distinct;
// disjointness itself is asserted by the caller.
PrivacyCost ParallelTotal(std::span<const LedgerEntry> entries);

// Append-only record of privacy expenditures.
//
// Predictions and serialization of released values never create entries:
// they are post-processing of already-private outputs.
class BudgetLedger {
 public:
  BudgetLedger() = default;
  explicit BudgetLedger(std::optional<PrivacyCost> cap) : cap_(cap) {}

  // Appends an entry with the next sequence number. Throws
  // BudgetExhaustedError (and leaves the ledger unchanged) if a cap is set and
  // the sequential total would exceed it.
  const LedgerEntry& Record(std::string operation, double epsilon, double delta,
                            std::optional<std::string> partition_tag = {});

  // Whether recording `cost` (possibly several entries' worth) fits the cap.
  bool CanAfford(const PrivacyCost& cost) const;
  // Throws BudgetExhaustedError unless CanAfford(cost).
  void CheckAffordable(const PrivacyCost& cost) const;

  PrivacyCost SequentialTotal() const;
  // Remaining budget under the cap; infinite components when uncapped.
  PrivacyCost Remaining() const;

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  const std::optional<PrivacyCost>& cap() const { return cap_; }

  // Line-delimited JSON, one object per entry with keys op, eps, delta, tag,
  // seq in that order.
  std::string ToJsonLines() const;
  static BudgetLedger FromJsonLines(const std::string& text,
                                    std::optional<PrivacyCost> cap = {});

  // Loads `path` (a missing file is an empty ledger).
  static BudgetLedger Load(const std::filesystem::path& path,
                           std::optional<PrivacyCost> cap = {});

 private:
  void Append(LedgerEntry entry);

  std::optional<PrivacyCost> cap_;
  std::vector<LedgerEntry> entries_;
};

std::string LedgerEntryToJson(const LedgerEntry& entry);
LedgerEntry LedgerEntryFromJson(const std::string& line);

// Appends one JSON line to the ledger file, creating it if needed.
void AppendLedgerEntry(const std::filesystem::path& path,
                       const LedgerEntry& entry);

}  // namespace dpkit

#endif  // DPKIT_ACCOUNTANT_H_
