// Copyright 2026 The selfcorr Authors
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

#ifndef SELFCORR_LAB_FIT_H
#define SELFCORR_LAB_FIT_H

#include <limits>
#include <string>
#include <vector>

namespace selfcorr::lab {

/// Ordinary least squares y = intercept + slope x.
struct LinearFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    /// Standard errors; NaN with fewer than three points.
    double slope_se = std::numeric_limits<double>::quiet_NaN();
    double intercept_se = std::numeric_limits<double>::quiet_NaN();
    double rss = std::numeric_limits<double>::quiet_NaN();
    std::size_t points = 0;
    bool ok = false;
};

LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y);

/// log T against L (exponential scaling) and against log L (polynomial scaling).
struct ScalingFit {
    LinearFit exponential;
    LinearFit polynomial;
    /// "exponential", "polynomial", or "undetermined" (fewer than three points, or residuals
    /// within a factor of two of each other).
    std::string preferred;
};

/// Points with t <= 0 (no estimate) are dropped.
ScalingFit fit_scaling(const std::vector<double> &L, const std::vector<double> &t);

}  // namespace selfcorr::lab

#endif
