// Copyright 2026 The oddata Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ODDATA_PROJECTION_H_
#define ODDATA_PROJECTION_H_

#include <span>

#include "oddata/instance.h"
#include "oddata/lp_kernel.h"

namespace oddata {

// Per machine, tasks sorted by predicted start; ties by (job, step). The
// result may be cyclic together with the job chains. `predicted` is
// job-major with one value per task; throws std::invalid_argument on a size
// mismatch or a non-finite value.
Ordering ordering_from_prediction(const JssInstance& inst,
                                  std::span<const double> predicted);

// Earliest-start schedule under the predicted ordering. When that ordering is
// cyclic, same-machine pairs are fixed greedily in ascending predicted order
// and any pair that would close a cycle is reversed. Always feasible and
// integral.
Schedule project_feasible(const JssInstance& inst,
                          std::span<const double> predicted);

// |project_feasible(predicted) - predicted|_1.
double projection_distance(const JssInstance& inst,
                           std::span<const double> predicted);

}  // namespace oddata

#endif  // ODDATA_PROJECTION_H_
