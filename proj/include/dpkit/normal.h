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

#ifndef DPKIT_NORMAL_H_
#define DPKIT_NORMAL_H_

namespace dpkit {

// Standard normal CDF.
double NormalCdf(double x);

// Inverse of the standard normal CDF for p in (0, 1).
//
// Wichura's AS 241 (PPND16) rational approximations; relative accuracy about
// 1e-16 over the full open interval. Returns -inf / +inf at p = 0 / 1 and
// throws InvalidArgumentError outside [0, 1].
double InverseNormalCdf(double p);

}  // namespace dpkit

#endif  // DPKIT_NORMAL_H_
