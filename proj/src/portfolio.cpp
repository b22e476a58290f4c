#include "tvgl/portfolio.hpp"

#include <cmath>

#include "tvgl/errors.hpp"
#include "tvgl/graph_ops.hpp"
#include "tvgl/heavy_tail.hpp"

namespace tvgl {

PortfolioWeights::PortfolioWeights(Vector u_) : u(std::move(u_)) {
    if ((u.array() < -1e-12).any()) {
        throw ValidationError("PortfolioWeights: weights must be nonnegative");
    }
    if (std::abs(u.sum() - 1.0) > 1e-8) {
        throw ValidationError("PortfolioWeights: weights must sum to one");
    }
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "MTVGRP" || name == "mtvgrp") return Scheme::MTVGRP;
    if (name == "MSRP" || name == "msrp") return Scheme::MSRP;
    if (name == "EWP" || name == "ewp") return Scheme::EWP;
    throw ValidationError("unknown portfolio scheme '" + name + "'");
}

std::string scheme_to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::MTVGRP: return "MTVGRP";
        case Scheme::MSRP: return "MSRP";
        case Scheme::EWP: return "EWP";
    }
    return "?";
}

namespace {

// Alternating projections onto {u >= 0} and {mu' u = 1}; the sets intersect
// whenever mu has a positive entry.
Vector project_feasible(Vector u, const Vector& mu, double tol = 1e-10) {
    const double mu_norm2 = mu.squaredNorm();
    for (int it = 0; it < 10000; ++it) {
        u = u.cwiseMax(0.0);
        const double gap = 1.0 - mu.dot(u);
        if (std::abs(gap) <= tol && (u.array() >= -tol).all()) break;
        u += mu * (gap / mu_norm2);
    }
    return u.cwiseMax(0.0);
}

double kkt_residual(const Vector& u, const Vector& grad, const Vector& mu) {
    // Stationarity: grad_i = lambda mu_i on the support, grad_i >= lambda mu_i off it.
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] > 1e-12) {
            num += grad[i] * mu[i];
            den += mu[i] * mu[i];
        }
    }
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    const double lambda = num / den;
    double res = std::abs(mu.dot(u) - 1.0);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] > 1e-12) {
            res = std::max(res, std::abs(grad[i] - lambda * mu[i]));
        } else {
            res = std::max(res, std::max(lambda * mu[i] - grad[i], 0.0));
        }
    }
    return res;
}

}  // namespace

PortfolioWeights solve_min_quadratic(const Matrix& Q, const Vector& mu_hat) {
    const int p = static_cast<int>(Q.rows());
    if (mu_hat.size() != p) throw ValidationError("solve_min_quadratic: dimension mismatch");
    if ((mu_hat.array() <= 0.0).all()) {
        throw ValidationError("solve_min_quadratic: no feasible point, all expected returns nonpositive");
    }

    const double delta = 1e-6 * Q.trace() / p;
    const Matrix A = Q + delta * Matrix::Identity(p, p);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
    const double lip = std::max(2.0 * eig.eigenvalues()[p - 1], 1e-12);

    Vector u = project_feasible(Vector::Constant(p, 1.0 / p), mu_hat);
    Vector u_prev = u;
    double f_prev = u.dot(A * u);

    const int max_iter = 200000;
    for (int l = 0; l < max_iter; ++l) {
        const double momentum = static_cast<double>(l) / (l + 3.0);
        Vector y = u + momentum * (u - u_prev);
        const Vector grad_y = 2.0 * (A * y);
        const double step = (1.0 / lip) / (1.0 + l / 5000.0);
        Vector u_next = project_feasible(y - step * grad_y, mu_hat);

        const double f_next = u_next.dot(A * u_next);
        if (f_next > f_prev) {
            // Momentum restart keeps the objective monotone.
            u_next = project_feasible(u - step * 2.0 * (A * u), mu_hat);
        }
        u_prev = u;
        u = std::move(u_next);
        f_prev = u.dot(A * u);

        if (l % 50 == 0 || l == max_iter - 1) {
            const Vector grad = 2.0 * (A * u);
            if (kkt_residual(u, grad, mu_hat) < 1e-8) break;
        }
    }

    const double total = u.sum();
    if (total <= 0.0) throw NumericalError("solve_min_quadratic: degenerate solution");
    return PortfolioWeights(u / total);
}

PortfolioWeights mtvgrp_weights(const Matrix& L_n, const Vector& mu_hat) {
    return solve_min_quadratic(L_n, mu_hat);
}

double max_drawdown(const Vector& nav) {
    if (nav.size() < 2) throw ValidationError("max_drawdown: need at least two NAV points");
    if ((nav.array() <= 0.0).any()) throw ValidationError("max_drawdown: NAV must stay positive");
    double peak = nav[0];
    double mdd = 0.0;
    for (Eigen::Index t = 1; t < nav.size(); ++t) {
        peak = std::max(peak, nav[t]);
        mdd = std::max(mdd, (peak - nav[t]) / peak);
    }
    return mdd;
}

BacktestReport backtest(const Matrix& returns, const HyperParams& hp, Scheme scheme,
                        const BacktestConfig& cfg) {
    const int p = static_cast<int>(returns.rows());
    const int T = static_cast<int>(returns.cols());
    if (T <= cfg.frame_length) {
        throw ValidationError("backtest: need more days than the estimation window");
    }
    if (cfg.rebalance_every < 1) throw ValidationError("backtest: rebalance period must be positive");

    BacktestReport report;
    std::vector<double> daily;
    daily.reserve(T - cfg.frame_length);

    EdgeWeights w_prev = default_initial_weights(hp.d);

    for (int start = cfg.frame_length; start < T; start += cfg.rebalance_every) {
        const Matrix window = returns.middleCols(start - cfg.frame_length, cfg.frame_length);
        Vector u;
        try {
            if (scheme == Scheme::EWP) {
                u = Vector::Constant(p, 1.0 / p);
            } else {
                const StudentTFit fit = fit_student_t(window);
                if (scheme == Scheme::MSRP) {
                    u = solve_min_quadratic(fit.params.covariance(), fit.params.mu).u;
                } else {
                    FrameObservation obs = FrameObservation::complete(window);
                    FrameResult res = solve_frame(obs, w_prev, hp);
                    w_prev = res.w_hat;
                    u = mtvgrp_weights(laplacian(res.w_hat), fit.params.mu).u;
                }
            }
        } catch (const std::runtime_error& err) {
            throw ValidationError("backtest: estimation failed at day " +
                                  std::to_string(start) + ": " + err.what());
        }

        report.rebalances.push_back({start, u});
        const int hold = std::min(cfg.rebalance_every, T - start);
        for (int t = start; t < start + hold; ++t) {
            daily.push_back(u.dot(returns.col(t)));
        }
    }

    const int n = static_cast<int>(daily.size());
    report.daily_returns = Eigen::Map<Vector>(daily.data(), n);
    const double mean = report.daily_returns.mean();
    const double var =
        (report.daily_returns.array() - mean).square().sum() / std::max(n - 1, 1);
    report.ann_return = mean * 252.0;
    report.ann_volatility = std::sqrt(var * 252.0);
    if (report.ann_volatility > 0.0) {
        report.sharpe = report.ann_return / report.ann_volatility;
        report.sharpe_defined = true;
    }

    Vector nav(n + 1);
    nav[0] = 1.0;
    bool nav_positive = true;
    for (int t = 0; t < n; ++t) {
        nav[t + 1] = nav[t] * (1.0 + report.daily_returns[t]);
        if (nav[t + 1] <= 0.0) {
            nav_positive = false;
            break;
        }
    }
    report.max_drawdown = nav_positive ? max_drawdown(nav) : 1.0;
    return report;
}

}  // namespace tvgl
