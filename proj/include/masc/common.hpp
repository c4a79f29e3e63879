// SPDX-License-Identifier: Apache-2.0
//
// masc - Mars integrated sensing and communication simulation library
// Copyright (C) 2026 The masc authors
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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace masc
{
    using cplx = std::complex<double>;
    using Vec3 = Eigen::Vector3d;
    using cvec = Eigen::VectorXcd;
    using cmat = Eigen::MatrixXcd;
    using rvec = Eigen::VectorXd;
    using rmat = Eigen::MatrixXd;

    inline constexpr double pi = 3.14159265358979323846;
    inline constexpr double speed_of_light = 299792458.0;  // m/s
    inline constexpr double boltzmann = 1.380649e-23;      // J/K
    inline constexpr double reference_temp_k = 290.0;

    inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
    inline double lin2db(double x) { return 10.0 * std::log10(x); }

    // Error types. All derive from std::runtime_error so callers can catch broadly.
    struct Error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };
    struct VisibilityError : Error
    {
        using Error::Error;
    };
    struct EstimationError : Error
    {
        using Error::Error;
    };
    struct InfeasibleError : Error
    {
        using Error::Error;
    };
    struct ValidationError : Error
    {
        using Error::Error;
    };
    struct ConfigError : Error
    {
        int line = 0;
        ConfigError(const std::string &msg, int line_no)
            : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg), line(line_no) {}
    };

    // Seed mixing (splitmix64 finaliser). Used for per-point and per-trial streams.
    inline uint64_t mix_seed(uint64_t a, uint64_t b)
    {
        uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
}
