#pragma once

#include <cstdint>
#include <random>

#include "tvgl/types.hpp"

namespace tvgl {

/// Multivariate Student-t parameters. sigma is the scatter (shape) matrix;
/// the covariance is sigma * nu / (nu - 2), which requires nu > 2.
struct StudentTParams {
    Vector mu;
    Matrix sigma;
    double nu = 0.0;

    Matrix covariance() const { return sigma * (nu / (nu - 2.0)); }
};

/// Unnormalized log-density of the graph Student-t model:
///   1/2 logdet*(Lw) - (nu+p)/2 log(1 + x' (Lw) x / nu).
/// logdet* sums the logs of the eigenvalues above 1e-8 * lambda_max; their
/// count must match p minus the number of connected components of w.
/// Throws NumericalError if the Laplacian is rank-deficient beyond that.
double graph_t_logdensity(const Vector& x, const EdgeWeights& w, double nu);

/// Number of connected components of the positive-weight support of w.
int connected_components(const EdgeWeights& w);

/// i.i.d. multivariate Student-t draws as columns: x = mu + z * sqrt(nu/g)
/// with z ~ N(0, sigma) and g ~ ChiSquare(nu). Deterministic per seed.
Matrix sample_student_t(const StudentTParams& params, int count, std::uint64_t seed);

/// Same, drawing from a caller-owned generator.
Matrix sample_student_t(const StudentTParams& params, int count, std::mt19937_64& rng);

struct StudentTFit {
    StudentTParams params;
    double log_likelihood = 0.0;
    int iterations = 0;
    /// Log-likelihood after each EM iteration (non-decreasing).
    std::vector<double> trace;
};

/// EM fit of (mu, sigma) at a fixed nu. Stops when the log-likelihood gain
/// drops below tol or after max_iter iterations.
StudentTFit fit_student_t_fixed_nu(const Matrix& X, double nu, int max_iter = 500,
                                   double tol = 1e-8);

/// Profile-likelihood fit over the nu grid {2.5, 3, 4, 5, 7, 10, 15, 20, 30};
/// returns the triple with the highest log-likelihood. X is p x T with
/// samples in columns; requires T > p + 1 and a full-rank sample scatter.
StudentTFit fit_student_t(const Matrix& X, int max_iter = 500, double tol = 1e-8);

/// The nu grid used by fit_student_t.
const std::vector<double>& student_t_nu_grid();

}  // namespace tvgl
