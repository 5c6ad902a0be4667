// Copyright 2026 The Conclusive Authors
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

#pragma once

#include <cmath>
#include <vector>

#include "conclusive/ensemble.hpp"

namespace conclusive {

/// The four BB84 preparations split by encoded bit, each with prior 1/4:
/// class 1 (bit 0) = {|0>, |+>}, class 2 (bit 1) = {|1>, |->}.
/// Member order is |0>, |+>, |1>, |->.
inline ClassifiedEnsemble bb84_ensemble() {
  const double h = 1.0 / std::sqrt(2.0);
  auto state = [](double a, double b) {
    ComplexVector v(2);
    v << a, b;
    return PureState(v);
  };
  std::vector<Member> members{
      {state(1.0, 0.0), 0.25, 1},
      {state(h, h), 0.25, 1},
      {state(0.0, 1.0), 0.25, 2},
      {state(h, -h), 0.25, 2},
  };
  return ClassifiedEnsemble(2, 2, std::move(members));
}

}  // namespace conclusive
