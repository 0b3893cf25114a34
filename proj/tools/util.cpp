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

#include "common.hpp"
#include "verbs.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace flcli {

const char* status_name(int status)
{
    if (status == status_usage)
        return "usage";
    return fl_status_name(static_cast<fl_status>(status));
}

int exit_code_for(int status)
{
    switch (status) {
    case FL_OK: return 0;
    case FL_ERR_DOMAIN:
    case FL_ERR_ARITY:
    case FL_ERR_PARSE:
    case FL_ERR_IO:
    case FL_ERR_CONFIG:
    case FL_ERR_INVALID_ARGUMENT:
    case status_usage: return 2;
    default: return 3;
    }
}

int model_index(const std::string& name)
{
    int m = -1;
    check(fl_model_from_name(name.c_str(), &m));
    return m;
}

const char* env_name(int env)
{
    switch (env) {
    case FL_ENV_LARCH: return "larch";
    case FL_ENV_BIRCH: return "birch";
    default: return "other";
    }
}

const char* link_name(int link) { return link == FL_LINK_A2G ? "a2g" : "g2g"; }

std::string scenario_key(int env, int link, bool has_elev, double elev_deg)
{
    std::string k = std::string(env_name(env)) + "-" + link_name(link);
    if (link == FL_LINK_A2G && has_elev)
        k += fmt::format("-{}", std::lround(elev_deg));
    return k;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::size_t first_index = n;
    std::mutex m;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(m);
                // every item runs; the lowest failing index wins, independent of scheduling
                if (i < first_index) {
                    first_index = i;
                    first = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (first)
        std::rethrow_exception(first);
}

}  // namespace flcli
