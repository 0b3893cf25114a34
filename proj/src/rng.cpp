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

#include "rng.hpp"
#include "error.hpp"

#include <cmath>
#include <numbers>

namespace forestlink {

const char* error_code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::domain: return "domain_error";
    case ErrorCode::arity: return "arity_error";
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::sync_failure: return "sync_failure";
    case ErrorCode::no_signal: return "no_signal";
    case ErrorCode::undefined: return "undefined";
    case ErrorCode::io: return "io_error";
    case ErrorCode::config: return "config_error";
    case ErrorCode::not_converged: return "not_converged";
    case ErrorCode::degenerate: return "degenerate";
    }
    return "unknown";
}

std::uint64_t Rng::below(std::uint64_t n)
{
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal()
{
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
}

double Rng::exponential(double rate)
{
    return -std::log(uniform_pos()) / rate;
}

}  // namespace forestlink
