// Copyright 2026 The ltlgame Authors
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

// Umbrella header for the whole library.

#pragma once

#include "ltlgame/analysis.hpp"
#include "ltlgame/common.hpp"
#include "ltlgame/config.hpp"
#include "ltlgame/dpa.hpp"
#include "ltlgame/game.hpp"
#include "ltlgame/gridworld.hpp"
#include "ltlgame/hoa.hpp"
#include "ltlgame/inspect.hpp"
#include "ltlgame/labels.hpp"
#include "ltlgame/lasso_check.hpp"
#include "ltlgame/learner.hpp"
#include "ltlgame/ltl.hpp"
#include "ltlgame/priority.hpp"
#include "ltlgame/prm.hpp"
#include "ltlgame/product.hpp"
#include "ltlgame/strategy.hpp"
