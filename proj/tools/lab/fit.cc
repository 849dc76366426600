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

#include "lab/fit.h"

#include <gsl/gsl_fit.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace selfcorr::lab {

LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size()) {
        throw std::logic_error("fit_line: length mismatch");
    }
    LinearFit f;
    f.points = x.size();
    if (x.size() < 2) {
        return f;
    }
    double c0, c1, cov00, cov01, cov11, sumsq;
    gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
    f.intercept = c0;
    f.slope = c1;
    f.rss = sumsq;
    if (x.size() >= 3) {
        f.intercept_se = std::sqrt(cov00);
        f.slope_se = std::sqrt(cov11);
    } else {
        f.intercept_se = f.slope_se = std::numeric_limits<double>::quiet_NaN();
    }
    f.ok = std::isfinite(c1);
    return f;
}

ScalingFit fit_scaling(const std::vector<double> &L, const std::vector<double> &t) {
    std::vector<double> xl, xlog, y;
    for (std::size_t i = 0; i < L.size(); ++i) {
        if (t[i] > 0) {
            xl.push_back(L[i]);
            xlog.push_back(std::log(L[i]));
            y.push_back(std::log(t[i]));
        }
    }
    ScalingFit s{fit_line(xl, y), fit_line(xlog, y), "undetermined"};
    if (y.size() >= 3 && s.exponential.ok && s.polynomial.ok) {
        double a = s.exponential.rss, b = s.polynomial.rss;
        if (a * 2 < b) {
            s.preferred = "exponential";
        } else if (b * 2 < a) {
            s.preferred = "polynomial";
        }
    }
    return s;
}

}  // namespace selfcorr::lab
