// Copyright 2026 The Lumicone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

namespace lumicone::cone {

struct NnlsResult {
    Eigen::VectorXd x;       // optimal nonnegative coefficients
    double distance = 0;     // ||y - A x||_2
    double kkt_residual = 0; // norm of the violated stationarity/sign terms
    int iterations = 0;
    bool converged = false;
};

/// Lawson-Hanson active-set solver for min_{x>=0} ||y - A x||_2.
/// Runs until the KKT residual falls below tol_rel * ||A^T y||_2 (default
/// 1e-8) or the iteration cap (10 * cols + 20) is hit, in which case the best
/// iterate is returned with converged=false.
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double tol_rel = 1e-8);

}  // namespace lumicone::cone
