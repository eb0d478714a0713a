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

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace lumicone::reduce {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// (gamma / (1 + gamma))^2: the LMI budget certifying Hausdorff distance
/// gamma between the input cone and the cone of L + S.
double gamma_bar_from_gamma(double gamma);

/// Elementwise shrinkage sgn(x) * max(|x| - theta, 0).
MatrixXd soft_threshold(const MatrixXd& M, double theta);

/// Singular value thresholding: U * soft(Sigma) * V^T.
MatrixXd svt(const MatrixXd& M, double theta);

/// Frobenius-nearest PSD matrix: symmetrize, eigendecompose, zero the
/// negative eigenvalues.
MatrixXd psd_project(const MatrixXd& M);

struct DecompositionProblem {
    MatrixXd A_bar;
    double gamma = 0.3;
    /// LMI budget; defaults to gamma_bar_from_gamma(gamma).
    std::optional<double> gamma_bar_override;
    /// Sparsity trade-off; <= 0 selects sqrt(max(m, n)).
    double lambda = -1;
    double rho = 5.0;
    double tau = 0.2;  // linearized step size, must stay below 0.25
    int max_iters = 5000;
    double tol_primal_rel = 1e-6;  // times ||A_bar||_F
    double tol_change = 1e-8;      // relative objective change over the window
    int change_window = 10;
    /// Rescale columns of A_bar to unit norm for conditioning; the scaling is
    /// undone on the returned L and S (cone membership is scale invariant).
    bool prescale_columns = true;

    double gamma_bar() const;
    double effective_lambda() const;
    void validate() const;
};

struct IterSnapshot {
    int k = 0;
    double objective = 0;
    double primal_residual = 0;
};

struct DecompositionResult {
    MatrixXd L;   // original column scaling
    MatrixXd S;   // original column scaling
    MatrixXd mu;  // n x n, elementwise nonnegative (scaled problem)
    MatrixXd Z;   // (m+n) x (m+n) PSD iterate (scaled problem)
    MatrixXd Y;   // multiplier (scaled problem)
    int iterations = 0;
    double primal_residual = 0;    // Frobenius norm of the final Step-3 bracket
    double residual_spectral = 0;  // spectral norm of the same matrix
    double objective = 0;  // ||L||_* + lambda ||S||_1 of the scaled problem
    bool converged = false;
    VectorXd column_scale;
};

using IterObserver = std::function<void(const IterSnapshot&)>;

/// Linearized ADMM on the lifted LMI formulation: PSD-project the slack
/// block, prox updates (SVT / soft-threshold / nonnegative clamp) on the
/// linearized augmented Lagrangian, then a multiplier step.
DecompositionResult ladmm_solve(const DecompositionProblem& problem,
                                const IterObserver& observer = {});

/// Spectral relaxation of the lifted constraint value: largest generalized
/// eigenvalue of (E^T E, A^T A) restricted to the range of A (dropping the
/// elementwise-nonnegative multiplier enlarges the feasible set, so this
/// upper-bounds the lifted maximum). E = A_hat - A_bar.
double relaxed_gamma_prime_sq(const MatrixXd& A_bar, const MatrixXd& E,
                              std::string* notes = nullptr);

struct Certificate {
    double gamma_prime_sq_upper = 0;
    double gamma_prime = 0;
    double delta_upper = std::numeric_limits<double>::infinity();
    double sampled_lower = 0;
    bool feasible = false;
    std::string notes;
};

/// Certifies delta(cone(A_bar), cone(A_hat)) <= gamma via the relaxed
/// spectral bound; the reverse cone direction uses the gamma'/(1-gamma')
/// correction. gamma_prime >= 1 voids the certificate.
Certificate certify(const MatrixXd& A_bar, const MatrixXd& A_hat, double gamma,
                    int n_samples = 10000, std::uint64_t seed = 1);

/// Certificate extracted from a converged solve on nonnegative data. The
/// returned PSD slack block and the elementwise-nonnegative multiplier give
/// E^T E <= (1+r)(gamma_bar A^T A - mu + r I); on x >= 0 the mu term only
/// tightens, and ||x|| <= sqrt(m)/min_j||A e_j||_1 * ||A x|| bounds the
/// residual inflation, so gamma'^2 <= (1+r)(gamma_bar + r m / min_l1^2).
/// Falls back to certify() when it is tighter; requires A_scaled >= 0.
Certificate certify_solution(const MatrixXd& A_scaled, const MatrixXd& A_hat_scaled,
                             double primal_residual, double gamma_bar_used, double gamma,
                             int n_samples = 10000, std::uint64_t seed = 1);

/// ((m+n) r + s) / (m n) with r = singular values of L above rank_tol *
/// sigma_1 and s = entries of S above zero_tol * max|S|.
double complexity_ratio(const MatrixXd& L, const MatrixXd& S, int m, int n, double rank_tol,
                        double zero_tol);

/// The linear operator in the LMI constraint and its adjoint (exposed for
/// the operator-norm probe and its tests).
MatrixXd g_apply(const MatrixXd& L, const MatrixXd& S, const MatrixXd& mu);
void g_adjoint(const MatrixXd& W, int m, int n, MatrixXd& L_out, MatrixXd& S_out,
               MatrixXd& mu_out);

/// Power-iteration estimate of the norm of the constraint operator; the
/// analytic value is exactly 2.
double operator_g_norm_probe(int m, int n, int trials, std::uint64_t seed = 1);

}  // namespace lumicone::reduce
