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

#include "conclusive/bb84.hpp"
#include "conclusive/bounds.hpp"
#include "conclusive/ensemble.hpp"
#include "conclusive/error.hpp"
#include "conclusive/feasibility.hpp"
#include "conclusive/montecarlo.hpp"
#include "conclusive/numerics.hpp"
#include "conclusive/optimizer.hpp"
#include "conclusive/random.hpp"
#include "conclusive/strategy.hpp"
