// Copyright 2026 The copulabounds Authors
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

#include "copulabounds/copula.hpp"
#include "copulabounds/dap.hpp"
#include "copulabounds/envelope.hpp"
#include "copulabounds/error.hpp"
#include "copulabounds/expression.hpp"
#include "copulabounds/grid.hpp"
#include "copulabounds/hungarian.hpp"
#include "copulabounds/io.hpp"
#include "copulabounds/measures.hpp"
#include "copulabounds/oracles.hpp"
