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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace forestlink::fft {

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW's planner is not thread safe; execution of an existing plan on new
// arrays (fftw_execute_dft) is.
std::mutex planner_mutex;

fftw_plan plan_for(std::size_t n, int sign)
{
    static std::map<std::pair<std::size_t, int>, Plan> cache;
    std::lock_guard lock(planner_mutex);
    auto& slot = cache[{n, sign}];
    if (!slot) {
        std::vector<cplx> a(n), b(n);
        slot.reset(fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(b.data()), sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED));
    }
    return slot.get();
}

std::vector<cplx> run(std::span<const cplx> x, int sign)
{
    std::vector<cplx> in(x.begin(), x.end());
    std::vector<cplx> out(x.size());
    if (x.empty())
        return out;
    fftw_execute_dft(plan_for(x.size(), sign), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

std::vector<cplx> forward(std::span<const cplx> x)
{
    return run(x, FFTW_FORWARD);
}

std::vector<cplx> inverse(std::span<const cplx> x)
{
    auto out = run(x, FFTW_BACKWARD);
    const double s = 1.0 / static_cast<double>(x.size());
    for (auto& v : out)
        v *= s;
    return out;
}

}  // namespace forestlink::fft
