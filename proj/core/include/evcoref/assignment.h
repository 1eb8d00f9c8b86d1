// Copyright 2026 The evcoref Authors.
//
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

#ifndef EVCOREF_ASSIGNMENT_H_
#define EVCOREF_ASSIGNMENT_H_

#include <vector>

namespace evcoref {

// Rectangular assignment by the Hungarian method with potentials,
// O(n^2 m). `cost` is rows x cols (rows may exceed cols; the matrix is
// padded internally). Returns, for each row, its column or -1 when the row
// stays unmatched. Minimizes the total cost of matched pairs.
std::vector<int> MinCostAssignment(const std::vector<std::vector<double>>& cost);

// Same, maximizing total weight. Pairs of weight 0 are still reported; the
// caller decides whether they count.
std::vector<int> MaxWeightAssignment(const std::vector<std::vector<double>>& weight);

}  // namespace evcoref

#endif  // EVCOREF_ASSIGNMENT_H_
