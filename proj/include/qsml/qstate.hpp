// Copyright 2026 The qsml Authors
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

// Dense statevector / density-matrix simulation core.

#include "qsml/qstate/gates.hpp"
#include "qsml/qstate/observable.hpp"
#include "qsml/qstate/partial_trace.hpp"
#include "qsml/qstate/qft.hpp"
#include "qsml/qstate/state.hpp"
