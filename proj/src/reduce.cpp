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

#include "lumicone/reduce.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#if LUMICONE_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace lumicone::reduce {

double gamma_bar_from_gamma(double gamma) {
    if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
    const double g = gamma / (1.0 + gamma);
    return g * g;
}

MatrixXd soft_threshold(const MatrixXd& M, double theta) {
    if (theta < 0) throw std::invalid_argument("soft_threshold: negative threshold");
    return M.unaryExpr([theta](double x) {
        const double mag = std::abs(x) - theta;
        return mag > 0 ? (x > 0 ? mag : -mag) : 0.0;
    });
}

namespace {

// SVT returning the post-threshold nuclear norm for free.
MatrixXd svt_with_nuclear(const MatrixXd& M, double theta, double* nuclear) {
    Eigen::BDCSVD<MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    VectorXd sigma = svd.singularValues();
    double nuc = 0;
    for (int i = 0; i < sigma.size(); ++i) {
        sigma[i] = std::max(sigma[i] - theta, 0.0);
        nuc += sigma[i];
    }
    if (nuclear) *nuclear = nuc;
    return svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();
}

// Zeroes the negative eigenspace of a symmetric matrix: Z = W - V L- V^T.
// LAPACK's negative-range dsyevr avoids the full-spectrum back-transform.
MatrixXd psd_project_symmetric(const MatrixXd& W) {
    const int n = static_cast<int>(W.rows());
#if LUMICONE_HAVE_LAPACKE
    if (n >= 96) {
        MatrixXd A = W;  // column-major, overwritten by the reduction
        VectorXd eigvals(n);
        MatrixXd eigvecs(n, n);
        std::vector<lapack_int> isuppz(2 * static_cast<size_t>(n));
        lapack_int found = 0;
        const lapack_int info = LAPACKE_dsyevr(
            LAPACK_COL_MAJOR, 'V', 'V', 'L', n, A.data(), n, -1e308, 0.0, 0, 0, 0.0, &found,
            eigvals.data(), eigvecs.data(), n, isuppz.data());
        if (info == 0) {
            if (found == 0) return W;
            const MatrixXd V = eigvecs.leftCols(found);
            return W - V * eigvals.head(found).asDiagonal() * V.transpose();
        }
        // fall through to the Eigen path on failure
    }
#endif
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(W);
    if (eig.info() != Eigen::Success) throw std::runtime_error("psd_project: eigensolver failed");
    const VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

MatrixXd svt(const MatrixXd& M, double theta) {
    if (theta < 0) throw std::invalid_argument("svt: negative threshold");
    return svt_with_nuclear(M, theta, nullptr);
}

MatrixXd psd_project(const MatrixXd& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("psd_project: matrix not square");
    if ((M - M.transpose()).cwiseAbs().maxCoeff() >
        1e-9 * std::max(1.0, M.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("psd_project: matrix not symmetric");
    }
    const MatrixXd W = 0.5 * (M + M.transpose());
    return psd_project_symmetric(W);
}

double DecompositionProblem::gamma_bar() const {
    return gamma_bar_override.value_or(gamma_bar_from_gamma(gamma));
}

double DecompositionProblem::effective_lambda() const {
    if (lambda > 0) return lambda;
    return std::sqrt(static_cast<double>(std::max(A_bar.rows(), A_bar.cols())));
}

void DecompositionProblem::validate() const {
    if (A_bar.size() == 0) throw std::invalid_argument("empty input matrix");
    if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
    if (gamma_bar() > gamma_bar_from_gamma(gamma) + 1e-12) {
        throw std::invalid_argument("gamma_bar override exceeds (gamma/(1+gamma))^2");
    }
    if (!(tau > 0 && tau < 0.25)) throw std::invalid_argument("tau must lie in (0, 0.25)");
    if (rho <= 0) throw std::invalid_argument("rho must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
}

namespace {

// Assembles [[I, E], [E^T, gbar*AtA - mu]] with E = L + S - A.
MatrixXd lmi_block(const MatrixXd& A, const MatrixXd& AtA, double gbar, const MatrixXd& L,
                   const MatrixXd& S, const MatrixXd& mu) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    MatrixXd M(m + n, m + n);
    M.topLeftCorner(m, m) = MatrixXd::Identity(m, m);
    const MatrixXd E = L + S - A;
    M.topRightCorner(m, n) = E;
    M.bottomLeftCorner(n, m) = E.transpose();
    M.bottomRightCorner(n, n) = gbar * AtA - mu;
    return M;
}

}  // namespace

DecompositionResult ladmm_solve(const DecompositionProblem& problem,
                                const IterObserver& observer) {
    problem.validate();
    const int m = static_cast<int>(problem.A_bar.rows());
    const int n = static_cast<int>(problem.A_bar.cols());

    VectorXd scale = VectorXd::Ones(n);
    MatrixXd A = problem.A_bar;
    if (problem.prescale_columns) {
        for (int j = 0; j < n; ++j) {
            const double c = A.col(j).norm();
            if (c > 0) {
                scale[j] = c;
                A.col(j) /= c;
            }
        }
    }
    const MatrixXd AtA = A.transpose() * A;
    const double gbar = problem.gamma_bar();
    const double lambda = problem.effective_lambda();
    const double rho = problem.rho;
    const double tau = problem.tau;
    const double tol_primal = problem.tol_primal_rel * A.norm();

    MatrixXd L = MatrixXd::Zero(m, n);
    MatrixXd S = MatrixXd::Zero(m, n);
    MatrixXd mu = MatrixXd::Zero(n, n);
    MatrixXd Y = MatrixXd::Zero(m + n, m + n);
    MatrixXd Z;

    DecompositionResult result;
    std::vector<double> recent;
    double objective = 0;
    MatrixXd last_residual = MatrixXd::Zero(m + n, m + n);

    int k = 0;
    for (; k < problem.max_iters; ++k) {
        // Step 1: PSD projection of the slack block.
        MatrixXd W = lmi_block(A, AtA, gbar, L, S, mu) - Y / rho;
        W = 0.5 * (W + W.transpose());
        Z = psd_project_symmetric(W);

        // Step 2: linearized prox updates.
        const MatrixXd bracket =
            Z.topRightCorner(m, n) - L - S + A + Y.topRightCorner(m, n) / rho;
        const MatrixXd F = L + 2.0 * tau * bracket;
        const MatrixXd G = S + 2.0 * tau * bracket;
        const MatrixXd K =
            mu - tau * (Z.bottomRightCorner(n, n) - gbar * AtA + mu +
                        Y.bottomRightCorner(n, n) / rho);
        double nuclear = 0;
        L = svt_with_nuclear(F, tau / rho, &nuclear);
        S = soft_threshold(G, tau * lambda / rho);
        mu = K.cwiseMax(0.0);

        // Step 3: multiplier update.
        const MatrixXd M_new = lmi_block(A, AtA, gbar, L, S, mu);
        last_residual = Z - M_new;
        const MatrixXd& residual_mat = last_residual;
        Y += rho * residual_mat;

        const double primal = residual_mat.norm();
        objective = nuclear + lambda * S.cwiseAbs().sum();
        if (observer) observer(IterSnapshot{k + 1, objective, primal});

        recent.push_back(objective);
        if (static_cast<int>(recent.size()) > problem.change_window + 1) {
            recent.erase(recent.begin());
        }
        bool settled = false;
        if (static_cast<int>(recent.size()) == problem.change_window + 1) {
            const double base = std::abs(recent.back()) + 1e-30;
            double max_change = 0;
            for (size_t i = 1; i < recent.size(); ++i) {
                max_change = std::max(max_change, std::abs(recent[i] - recent[i - 1]));
            }
            settled = max_change / base <= problem.tol_change;
        }
        result.primal_residual = primal;
        if (primal <= tol_primal && settled) {
            ++k;
            result.converged = true;
            break;
        }
    }

    // spectral norm of the final constraint residual (power iteration);
    // the certification chain needs only this, not the Frobenius norm
    {
        VectorXd v = VectorXd::Ones(m + n).normalized();
        double lam = 0;
        for (int it = 0; it < 60; ++it) {
            VectorXd w = last_residual * v;
            const double nw = w.norm();
            if (nw < 1e-300) {
                lam = 0;
                break;
            }
            lam = nw;
            v = w / nw;
        }
        result.residual_spectral = lam;
    }

    result.iterations = k;
    result.objective = objective;
    result.mu = mu;
    result.Z = Z;
    result.Y = Y;
    result.column_scale = scale;
    result.L = L * scale.asDiagonal();
    result.S = S * scale.asDiagonal();
    return result;
}

double relaxed_gamma_prime_sq(const MatrixXd& A_bar, const MatrixXd& E, std::string* notes) {
    if (A_bar.rows() != E.rows() || A_bar.cols() != E.cols()) {
        throw std::invalid_argument("relaxed_gamma_prime_sq: shape mismatch");
    }
    const MatrixXd AtA = A_bar.transpose() * A_bar;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(AtA);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("relaxed_gamma_prime_sq: eigensolver failed");
    }
    const VectorXd lam = eig.eigenvalues();
    const double lmax = lam.maxCoeff();
    if (lmax <= 0) throw std::invalid_argument("relaxed_gamma_prime_sq: zero metric matrix");
    const double cut = 1e-12 * lmax;
    std::vector<int> keep;
    for (int i = 0; i < lam.size(); ++i)
        if (lam[i] > cut) keep.push_back(i);
    if (static_cast<int>(keep.size()) < lam.size() && notes) {
        *notes += "metric rank-deficient: restricted to range of the input matrix (rank " +
                  std::to_string(keep.size()) + " of " + std::to_string(lam.size()) + "); ";
    }
    MatrixXd V(lam.size(), keep.size());
    VectorXd inv_sqrt(keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
        V.col(k) = eig.eigenvectors().col(keep[k]);
        inv_sqrt[k] = 1.0 / std::sqrt(lam[keep[k]]);
    }
    const MatrixXd B = E * V * inv_sqrt.asDiagonal();  // whitened difference
    Eigen::SelfAdjointEigenSolver<MatrixXd> top(B.transpose() * B);
    return std::max(0.0, top.eigenvalues().maxCoeff());
}

namespace {

double sampled_omega_lower(const MatrixXd& A_bar, const MatrixXd& E, int n_samples,
                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int n = static_cast<int>(A_bar.cols());
    double lower = 0;
    auto probe = [&](const VectorXd& x) {
        const double a = (A_bar * x).norm();
        if (a < 1e-300) return;
        lower = std::max(lower, (E * x).norm() / a);
    };
    for (int j = 0; j < n; ++j) probe(VectorXd::Unit(n, j));
    VectorXd x(n);
    for (int s = 0; s < n_samples; ++s) {
        for (int j = 0; j < n; ++j) x[j] = uni(rng);
        probe(x);
    }
    return lower;
}

Certificate finish_certificate(Certificate cert, double gamma) {
    if (cert.gamma_prime >= 1.0) {
        cert.feasible = false;
        cert.delta_upper = std::numeric_limits<double>::infinity();
        cert.notes += "certificate void: gamma' >= 1; ";
        return cert;
    }
    cert.delta_upper = cert.gamma_prime / (1.0 - cert.gamma_prime);
    cert.feasible = std::max(cert.gamma_prime, cert.delta_upper) <= gamma;
    return cert;
}

}  // namespace

Certificate certify(const MatrixXd& A_bar, const MatrixXd& A_hat, double gamma, int n_samples,
                    std::uint64_t seed) {
    if (A_bar.rows() != A_hat.rows() || A_bar.cols() != A_hat.cols()) {
        throw std::invalid_argument("certify: shape mismatch");
    }
    if (gamma <= 0) throw std::invalid_argument("certify: gamma must be positive");
    Certificate cert;
    const MatrixXd E = A_hat - A_bar;
    cert.gamma_prime_sq_upper = relaxed_gamma_prime_sq(A_bar, E, &cert.notes);
    cert.gamma_prime = std::sqrt(cert.gamma_prime_sq_upper);
    cert.sampled_lower = sampled_omega_lower(A_bar, E, n_samples, seed);
    return finish_certificate(cert, gamma);
}

namespace {

// Certified lower bound on min {||A x|| : x >= 0, ||x|| = 1} for nonnegative
// A: every nonnegative unit witness w gives ||A x|| >= min_j <w, col_j> ||x||.
// Tries the uniform witness, the column mean, and a short ascent that pours
// weight onto the currently worst column.
double nonneg_min_gain(const MatrixXd& A) {
    const int n = static_cast<int>(A.cols());
    double best = 0;
    auto score = [&](VectorXd w) {
        w = w.cwiseMax(0.0);
        const double norm = w.norm();
        if (norm < 1e-300) return;
        w /= norm;
        double worst = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) worst = std::min(worst, w.dot(A.col(j)));
        best = std::max(best, worst);
    };
    score(VectorXd::Ones(A.rows()));
    VectorXd mean = A.rowwise().mean();
    score(mean);
    VectorXd w = mean.norm() > 0 ? VectorXd(mean / mean.norm())
                                 : VectorXd(VectorXd::Ones(A.rows()).normalized());
    for (int it = 0; it < 40; ++it) {
        int worst_j = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            const double v = w.dot(A.col(j));
            if (v < worst) {
                worst = v;
                worst_j = j;
            }
        }
        const double cn = A.col(worst_j).norm();
        if (cn < 1e-300) return 0;
        w = (w + 0.35 * A.col(worst_j) / cn).normalized();
        score(w);
    }
    return best;
}

}  // namespace

Certificate certify_solution(const MatrixXd& A_scaled, const MatrixXd& A_hat_scaled,
                             double primal_residual, double gamma_bar_used, double gamma,
                             int n_samples, std::uint64_t seed) {
    Certificate spectral = certify(A_scaled, A_hat_scaled, gamma, n_samples, seed);
    if (A_scaled.minCoeff() < -1e-12) {
        spectral.notes += "solution certificate unavailable (negative entries); ";
        return spectral;
    }
    const double gain = nonneg_min_gain(A_scaled);
    if (!(gain > 0)) {
        spectral.notes += "solution certificate unavailable (zero column); ";
        return spectral;
    }
    const double r = primal_residual + 1e-12 * (1.0 + A_scaled.norm());
    const double gp_sq = (1.0 + r) * (gamma_bar_used + r / (gain * gain));
    if (gp_sq >= spectral.gamma_prime_sq_upper) return spectral;

    Certificate cert;
    cert.gamma_prime_sq_upper = gp_sq;
    cert.gamma_prime = std::sqrt(gp_sq);
    cert.sampled_lower = spectral.sampled_lower;
    cert.notes = spectral.notes +
                 "gamma' from the converged PSD slack and nonnegative multiplier "
                 "(residual inflation " +
                 std::to_string(r) + "); ";
    return finish_certificate(cert, gamma);
}

double complexity_ratio(const MatrixXd& L, const MatrixXd& S, int m, int n, double rank_tol,
                        double zero_tol) {
    if (rank_tol <= 0 || zero_tol <= 0) throw std::invalid_argument("tolerances must be positive");
    int r = 0;
    if (L.size() > 0 && L.cwiseAbs().maxCoeff() > 0) {
        Eigen::BDCSVD<MatrixXd> svd(L);
        const VectorXd sigma = svd.singularValues();
        const double top = sigma[0];
        for (int i = 0; i < sigma.size(); ++i)
            if (sigma[i] > rank_tol * top) ++r;
    }
    int s = 0;
    if (S.size() > 0) {
        const double top = S.cwiseAbs().maxCoeff();
        if (top > 0) {
            for (int i = 0; i < S.rows(); ++i)
                for (int j = 0; j < S.cols(); ++j)
                    if (std::abs(S(i, j)) > zero_tol * top) ++s;
        }
    }
    return (static_cast<double>(m + n) * r + s) / (static_cast<double>(m) * n);
}

MatrixXd g_apply(const MatrixXd& L, const MatrixXd& S, const MatrixXd& mu) {
    const int m = static_cast<int>(L.rows());
    const int n = static_cast<int>(L.cols());
    MatrixXd W = MatrixXd::Zero(m + n, m + n);
    W.topRightCorner(m, n) = L + S;
    W.bottomLeftCorner(n, m) = (L + S).transpose();
    W.bottomRightCorner(n, n) = -mu;
    return W;
}

void g_adjoint(const MatrixXd& W, int m, int n, MatrixXd& L_out, MatrixXd& S_out,
               MatrixXd& mu_out) {
    const MatrixXd twice = W.topRightCorner(m, n) + W.bottomLeftCorner(n, m).transpose();
    L_out = twice;
    S_out = twice;
    mu_out = -W.bottomRightCorner(n, n);
}

double operator_g_norm_probe(int m, int n, int trials, std::uint64_t seed) {
    if (trials < 50) throw std::invalid_argument("operator_g_norm_probe: need at least 50 trials");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    auto randmat = [&](int r, int c) {
        MatrixXd M(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) M(i, j) = gauss(rng);
        return M;
    };
    MatrixXd L = randmat(m, n), S = randmat(m, n), mu = randmat(n, n);
    const double init = std::sqrt(L.squaredNorm() + S.squaredNorm() + mu.squaredNorm());
    L /= init;
    S /= init;
    mu /= init;
    double norm_sq = 0;  // Rayleigh estimate of ||G||^2
    for (int it = 0; it < trials; ++it) {
        const MatrixXd W = g_apply(L, S, mu);
        MatrixXd Ln, Sn, mun;
        g_adjoint(W, m, n, Ln, Sn, mun);
        norm_sq = std::sqrt(Ln.squaredNorm() + Sn.squaredNorm() + mun.squaredNorm());
        if (norm_sq < 1e-300) return 0;
        L = Ln / norm_sq;
        S = Sn / norm_sq;
        mu = mun / norm_sq;
    }
    return std::sqrt(norm_sq);
}

}  // namespace lumicone::reduce
