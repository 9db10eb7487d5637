// Copyright 2026 The pmrsim Authors
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

#include "pmrsim/alpha.hpp"
#include "pmrsim/circuit.hpp"
#include "pmrsim/compile.hpp"
#include "pmrsim/dense.hpp"
#include "pmrsim/divdiff.hpp"
#include "pmrsim/errors.hpp"
#include "pmrsim/lcu.hpp"
#include "pmrsim/mask.hpp"
#include "pmrsim/models.hpp"
#include "pmrsim/pauli.hpp"
#include "pmrsim/pmr.hpp"
