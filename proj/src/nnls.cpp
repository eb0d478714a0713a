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

#include "lumicone/nnls.hpp"

#include <limits>
#include <vector>

namespace lumicone::cone {

namespace {

double kkt_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& x) {
    // gradient of 0.5*||y-Ax||^2 is -A^T (y - Ax); optimality needs zero
    // gradient on the passive set and nonnegative gradient on the active set.
    const Eigen::VectorXd g = -(A.transpose() * (y - A * x));
    double acc = 0;
    for (int i = 0; i < x.size(); ++i) {
        if (x[i] > 0) {
            acc += g[i] * g[i];
        } else {
            const double viol = std::min(g[i], 0.0);
            acc += viol * viol;
        }
    }
    return std::sqrt(acc);
}

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                              const std::vector<int>& passive) {
    Eigen::MatrixXd Ap(A.rows(), passive.size());
    for (size_t k = 0; k < passive.size(); ++k) Ap.col(k) = A.col(passive[k]);
    return Ap.colPivHouseholderQr().solve(y);
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double tol_rel) {
    const int n = static_cast<int>(A.cols());
    NnlsResult result;
    result.x = Eigen::VectorXd::Zero(n);

    const double tol = tol_rel * (A.transpose() * y).norm();
    std::vector<bool> passive(n, false);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const int max_outer = 10 * n + 20;

    int iter = 0;
    while (iter < max_outer) {
        ++iter;
        const Eigen::VectorXd w = A.transpose() * (y - A * x);  // negative gradient
        int best = -1;
        double best_w = tol;
        for (int i = 0; i < n; ++i) {
            if (!passive[i] && w[i] > best_w) {
                best_w = w[i];
                best = i;
            }
        }
        if (best < 0) break;  // KKT satisfied to tolerance
        passive[best] = true;

        // inner loop: restore feasibility of the passive-set least squares
        while (true) {
            std::vector<int> pset;
            for (int i = 0; i < n; ++i)
                if (passive[i]) pset.push_back(i);
            const Eigen::VectorXd z = solve_passive(A, y, pset);
            bool feasible = true;
            for (int k = 0; k < z.size(); ++k)
                if (z[k] <= 0) feasible = false;
            if (feasible) {
                x.setZero();
                for (size_t k = 0; k < pset.size(); ++k) x[pset[k]] = z[k];
                break;
            }
            // step toward z until the first passive coefficient reaches zero
            double alpha = std::numeric_limits<double>::infinity();
            int pivot = -1;
            for (size_t k = 0; k < pset.size(); ++k) {
                if (z[k] <= 0) {
                    const double xi = x[pset[k]];
                    const double denom = xi - z[k];
                    const double step = denom > 0 ? xi / denom : 0.0;
                    if (step < alpha) {
                        alpha = step;
                        pivot = static_cast<int>(k);
                    }
                }
            }
            if (pivot < 0) break;  // cannot happen: some z[k] <= 0 exists
            for (size_t k = 0; k < pset.size(); ++k) {
                x[pset[k]] += alpha * (z[k] - x[pset[k]]);
            }
            // deactivate every coefficient driven to (numerical) zero, and
            // always the pivot so the inner loop makes progress
            const double scale = std::max(1e-300, x.cwiseAbs().maxCoeff());
            for (size_t k = 0; k < pset.size(); ++k) {
                const bool hit_zero = x[pset[k]] <= 1e-13 * scale;
                if (static_cast<int>(k) == pivot || (z[k] <= 0 && hit_zero)) {
                    x[pset[k]] = 0;
                    passive[pset[k]] = false;
                }
            }
            ++iter;
            if (iter >= max_outer) break;
        }
    }

    result.x = x;
    result.distance = (y - A * x).norm();
    result.kkt_residual = kkt_residual(A, y, x);
    result.iterations = iter;
    result.converged = result.kkt_residual <= std::max(tol, 1e-12);
    return result;
}

}  // namespace lumicone::cone
