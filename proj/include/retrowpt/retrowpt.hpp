// retrowpt — retrodirective wireless power transfer simulator for ambient backscatter receivers
// Copyright (C) 2026 the retrowpt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// -------------------------------------------------------------------------

#pragma once

#include "retrowpt/analysis.hpp"
#include "retrowpt/channel.hpp"
#include "retrowpt/complex_vec.hpp"
#include "retrowpt/correlator.hpp"
#include "retrowpt/estimate.hpp"
#include "retrowpt/experiments.hpp"
#include "retrowpt/power_transfer.hpp"
#include "retrowpt/rng.hpp"
#include "retrowpt/training.hpp"
#include "retrowpt/version.hpp"
