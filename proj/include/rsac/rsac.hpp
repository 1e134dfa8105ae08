// Copyright 2026 The rsac Authors.
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

#ifndef RSAC_RSAC_HPP
#define RSAC_RSAC_HPP

#include "rsac/adam.hpp"
#include "rsac/bench.hpp"
#include "rsac/bundle.hpp"
#include "rsac/csv.hpp"
#include "rsac/dataset.hpp"
#include "rsac/distribution.hpp"
#include "rsac/environment.hpp"
#include "rsac/greedy.hpp"
#include "rsac/grid_config.hpp"
#include "rsac/net.hpp"
#include "rsac/observation.hpp"
#include "rsac/policy.hpp"
#include "rsac/replay.hpp"
#include "rsac/risk.hpp"
#include "rsac/run_config.hpp"
#include "rsac/sac.hpp"
#include "rsac/seeding.hpp"
#include "rsac/tabular.hpp"
#include "rsac/trainer.hpp"
#include "rsac/verification.hpp"

#endif  // RSAC_RSAC_HPP
