/*
   Copyright 2026 The bessplan authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "bessplan/normal.hpp"

using bessplan::std_normal_cdf;
using bessplan::std_normal_pdf;

namespace {
// Reference values computed with mpmath at 30 significant digits.
struct PhiRef {
    double z;
    double phi;
};
constexpr PhiRef kPhiTable[] = {
    {0.0, 0.5},
    {0.5, 0.691462461274013103637704610608},
    {1.0, 0.841344746068542948585232545632},
    {2.0, 0.977249868051820792799717362833},
    {3.0347, 0.998796124723061203250641083324},
    {-1.5, 0.0668072012688580660044940409799},
    {5.0, 0.999999713348428120806088326248},
    {-5.0, 2.86651571879193911673752332875e-7},
};
}  // namespace

TEST_CASE("standard normal CDF matches high-precision references to 1e-12") {
    for (const PhiRef& ref : kPhiTable) {
        CHECK(std::abs(std_normal_cdf(ref.z) - ref.phi) <= 1e-12);
    }
}

TEST_CASE("far negative tail is numerically negligible") {
    CHECK(std_normal_cdf(-8.0) < 1e-14);
    CHECK(std_normal_cdf(-8.0) == doctest::Approx(6.22096057427178412e-16).epsilon(1e-6));
}

TEST_CASE("CDF symmetry and monotonicity") {
    for (int i = -400; i <= 400; ++i) {
        const double z = i * 0.025;
        CHECK(std::abs(std_normal_cdf(z) + std_normal_cdf(-z) - 1.0) <= 1e-12);
    }
    double prev = std_normal_cdf(-10.0);
    for (int i = -399; i <= 400; ++i) {
        const double cur = std_normal_cdf(i * 0.025);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("density integrates the CDF locally") {
    // Central finite difference of Phi against the density.
    for (double z : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
        const double h = 1e-6;
        const double fd = (std_normal_cdf(z + h) - std_normal_cdf(z - h)) / (2.0 * h);
        CHECK(fd == doctest::Approx(std_normal_pdf(z)).epsilon(1e-8));
    }
}
