// Copyright 2026 The cavitycz Authors
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

#pragma once

#include "cavitycz/cluster.hpp"
#include "cavitycz/config.hpp"
#include "cavitycz/csv.hpp"
#include "cavitycz/errors.hpp"
#include "cavitycz/gate.hpp"
#include "cavitycz/iosolver.hpp"
#include "cavitycz/physics.hpp"
#include "cavitycz/sweep.hpp"
#include "cavitycz/verify.hpp"
