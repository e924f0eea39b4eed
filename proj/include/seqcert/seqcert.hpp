// Copyright 2026 The seqcert Authors
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

// Numerical core without the JSON and CLI layers.

#pragma once

#include "seqcert/bell.hpp"
#include "seqcert/errors.hpp"
#include "seqcert/linalg.hpp"
#include "seqcert/montecarlo.hpp"
#include "seqcert/optimize.hpp"
#include "seqcert/qstate.hpp"
#include "seqcert/rng.hpp"
#include "seqcert/sequence.hpp"
