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

#include <complex>
#include <span>
#include <vector>

namespace forestlink::fft {

using cplx = std::complex<double>;

// Forward transform, unscaled: X[k] = sum x[n] e^{-j2pi kn/N}.
std::vector<cplx> forward(std::span<const cplx> x);

// Inverse transform scaled by 1/N.
std::vector<cplx> inverse(std::span<const cplx> x);

}  // namespace forestlink::fft
