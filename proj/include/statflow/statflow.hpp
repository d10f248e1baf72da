// Copyright 2026 The statflow Authors
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

#include "statflow/bench.hpp"
#include "statflow/dfasm.hpp"
#include "statflow/engine.hpp"
#include "statflow/graph.hpp"
#include "statflow/hdl.hpp"
#include "statflow/manifest.hpp"
#include "statflow/operator_kind.hpp"
#include "statflow/semantics.hpp"
#include "statflow/validate.hpp"
