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

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmrsim {

/// Failure categories. Each maps to a distinct CLI exit code.
enum class ErrorKind {
    Parse = 2,
    Budget = 3,
    Contract = 4,
    Dimension = 5,
    NonHermitian = 6,
    Convergence = 7,
    Io = 8,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return "parse_error";
        case ErrorKind::Budget: return "budget_exceeded";
        case ErrorKind::Contract: return "contract_violation";
        case ErrorKind::Dimension: return "dimension_limit";
        case ErrorKind::NonHermitian: return "non_hermitian";
        case ErrorKind::Convergence: return "no_convergence";
        case ErrorKind::Io: return "io_error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

   private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string &what) {
    if (!cond) {
        fail(kind, what);
    }
}

}  // namespace pmrsim
