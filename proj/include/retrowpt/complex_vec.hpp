// retrowpt — retrodirective wireless power transfer simulator for ambient backscatter receivers
// Copyright (C) 2026 the retrowpt authors
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
// -------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace retrowpt {

using cxd = std::complex<double>;
using cvec = std::vector<cxd>;

inline double norm_sq(const cvec &v) noexcept
{
    double s = 0.0;
    for (const auto &x : v)
        s += std::norm(x);
    return s;
}

inline double norm(const cvec &v) noexcept { return std::sqrt(norm_sq(v)); }

/// Unconjugated inner product aᵀb (the transpose product used throughout the
/// narrowband model; no Hermitian conjugation).
inline cxd dot_unconjugated(const cvec &a, const cvec &b) noexcept
{
    cxd s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

} // namespace retrowpt
