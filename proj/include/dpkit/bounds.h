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

#ifndef DPKIT_BOUNDS_H_
#define DPKIT_BOUNDS_H_

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpkit/errors.h"

namespace dpkit {

// Public, caller-declared range of one variable. Sensitivities, clipping and
// feature scaling are all derived from these, never from the data.
struct Bounds {
  double lower = 0.0;
  double upper = 0.0;

  void Validate() const {
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
      std::ostringstream msg;
      msg << "bounds require finite lower < upper, got [" << lower << ", "
          << upper << "]";
      throw InvalidArgumentError(msg.str());
    }
  }

  double Width() const { return upper - lower; }
  double MaxAbs() const { return std::max(std::abs(lower), std::abs(upper)); }
  bool Contains(double v, double tol = 0.0) const {
    return v >= lower - tol && v <= upper + tol;
  }
};

}  // namespace dpkit

#endif  // DPKIT_BOUNDS_H_
