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

#include "forestlink/forestlink.h"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace flcli {

// Status codes used by the CLI on top of the library's own.
inline constexpr int status_usage = 30;

class CliError : public std::runtime_error {
public:
    CliError(int status, const std::string& what, std::string file = {}, long line = 0)
        : std::runtime_error(what), status_(status), file_(std::move(file)), line_(line) {}

    int status() const noexcept { return status_; }
    const std::string& file() const noexcept { return file_; }
    long line() const noexcept { return line_; }

private:
    int status_;
    std::string file_;
    long line_;
};

// Throws the library's last error when `s` is not FL_OK.
inline void check(fl_status s)
{
    if (s != FL_OK)
        throw CliError(s, fl_last_error_message(), fl_last_error_file(), fl_last_error_line());
}

// Same, but names `file` when the library did not record one.
inline void check(fl_status s, const std::string& file)
{
    if (s == FL_OK)
        return;
    std::string f = fl_last_error_file();
    throw CliError(s, fl_last_error_message(), f.empty() ? file : f, fl_last_error_line());
}

const char* status_name(int status);

// 2 for bad input or configuration, 3 when the computation itself fails.
int exit_code_for(int status);

template <class T, void (*F)(T*)>
struct HandleDeleter {
    void operator()(T* p) const noexcept { F(p); }
};
template <class T, void (*F)(T*)>
using Handle = std::unique_ptr<T, HandleDeleter<T, F>>;

using Samples = Handle<fl_samples, fl_samples_free>;
using ModelSpec = Handle<fl_model_spec, fl_model_spec_free>;
using Fit = Handle<fl_fit, fl_fit_free>;
using Profile = Handle<fl_profile, fl_profile_free>;
using Stream = Handle<fl_stream, fl_stream_free>;
using Sounder = Handle<fl_sounder, fl_sounder_free>;
using Sounding = Handle<fl_sounding, fl_sounding_free>;
using Extraction = Handle<fl_extraction, fl_extraction_free>;

// Wraps a creating call: make<Stream>([&](fl_stream** o) { return fl_...(..., o); }).
template <class H, class F>
H make(F&& f, const std::string& file = {})
{
    typename H::pointer raw = nullptr;
    check(f(&raw), file);
    return H(raw);
}

constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-item seed for batch runs.
constexpr std::uint64_t item_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix64(mix64(seed) + index);
}

}  // namespace flcli
