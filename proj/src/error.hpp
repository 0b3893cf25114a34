// SPDX-License-Identifier: Apache-2.0
//
// forestlink - forest radio channel modelling and sounding toolkit
// Copyright 2026 The forestlink Authors
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
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace forestlink {

// Stable error categories. The numeric values are part of the C API.
enum class ErrorCode : int {
    domain = 1,         // argument outside the mathematical domain of a model
    arity = 2,          // wrong number of samples / symbols / sectors
    parse = 3,          // malformed input file
    infeasible = 4,     // requested synthesis target cannot be realised
    sync_failure = 5,   // no unambiguous preamble correlation peak
    no_signal = 6,      // nothing above the noise floor
    undefined = 7,      // statistic undefined for the given input
    io = 8,             // filesystem failure
    config = 9,         // bad configuration key or value
    not_converged = 10, // operation requires a converged fit
    degenerate = 11,    // data cannot identify the model
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::string file = {}, long line = 0)
        : std::runtime_error(what), code_(code), file_(std::move(file)), line_(line) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& file() const noexcept { return file_; }
    long line() const noexcept { return line_; }

private:
    ErrorCode code_;
    std::string file_;
    long line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace forestlink
