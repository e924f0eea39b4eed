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

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace seqcert {

/// An argument lies outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A measurement outcome whose branch has (numerically) zero probability.
struct DegenerateBranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inputs that cannot come from any quantum strategy (e.g. a Bell value
/// above the maximal quantum value).
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The branch angle of a sequence fell below the representable range.
struct UnderflowExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A request whose cost grows exponentially exceeded the configured budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Short rendering of a double for error messages.
inline std::string to_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace seqcert
