/*
 * Copyright 2026 The TwinForge Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <span>
#include <string>

namespace twinforge::tabular {

// Exact Wasserstein-1 distance between the empirical distributions of a and
// b: the integral of |F_a - F_b| over the merged support. Samples may differ
// in size. Throws EmptySample if either is empty.
double emd_1d(std::span<const double> a, std::span<const double> b);

// Half the L1 distance between the category frequency distributions.
double tv_distance(std::span<const std::string> a,
                   std::span<const std::string> b);

}  // namespace twinforge::tabular
