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

#ifndef DPKIT_ERRORS_H_
#define DPKIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpkit {

// Base class for every error raised by the library.
class DpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter (budget, sensitivity, hyperparameter, option) is invalid.
class InvalidArgumentError : public DpError {
 public:
  using DpError::DpError;
};

// The data violates a contract: out-of-bounds values for models, bad labels,
// mismatched lengths, malformed files.
class DataError : public DpError {
 public:
  using DpError::DpError;
};

// A ledger with a cap refused an entry.
class BudgetExhaustedError : public DpError {
 public:
  BudgetExhaustedError(const std::string& what, double remaining_epsilon,
                       double remaining_delta)
      : DpError(what),
        remaining_epsilon_(remaining_epsilon),
        remaining_delta_(remaining_delta) {}

  double remaining_epsilon() const { return remaining_epsilon_; }
  double remaining_delta() const { return remaining_delta_; }

 private:
  double remaining_epsilon_;
  double remaining_delta_;
};

}  // namespace dpkit

#endif  // DPKIT_ERRORS_H_
