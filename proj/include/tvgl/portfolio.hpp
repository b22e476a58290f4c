#pragma once

#include <string>
#include <vector>

#include "tvgl/admm.hpp"
#include "tvgl/types.hpp"

namespace tvgl {

/// Long-only fully invested portfolio weights.
struct PortfolioWeights {
    Vector u;

    PortfolioWeights() = default;
    explicit PortfolioWeights(Vector u_);
};

enum class Scheme { MTVGRP, MSRP, EWP };

Scheme scheme_from_string(const std::string& name);
std::string scheme_to_string(Scheme scheme);

/// Solves min u' (Q + delta I) u subject to mu_hat' u = 1, u >= 0 with a
/// relative ridge delta = 1e-6 tr(Q)/p, by accelerated projected gradient,
/// then renormalizes u to sum to one. Requires some positive entry in mu_hat.
PortfolioWeights solve_min_quadratic(const Matrix& Q, const Vector& mu_hat);

/// Graph-ratio portfolio: solve_min_quadratic with Q equal to the frame
/// Laplacian.
PortfolioWeights mtvgrp_weights(const Matrix& L_n, const Vector& mu_hat);

/// Largest peak-to-trough relative decline of a positive NAV path.
double max_drawdown(const Vector& nav);

struct Rebalance {
    int day = 0;  // first day the weights are held
    Vector weights;
};

struct BacktestReport {
    double ann_return = 0.0;
    double ann_volatility = 0.0;
    double sharpe = 0.0;
    bool sharpe_defined = false;
    double max_drawdown = 0.0;
    std::vector<Rebalance> rebalances;
    Vector daily_returns;
};

struct BacktestConfig {
    int frame_length = 200;
    int rebalance_every = 20;
    std::uint64_t seed = 0;
};

/// Rolling backtest: every rebalance_every days, re-estimate mean/covariance
/// by the Student-t fit over the trailing frame_length-day window (plus the
/// graph for MTVGRP, chained across rebalances), hold the weights, and report
/// annualized statistics over all held days.
BacktestReport backtest(const Matrix& returns, const HyperParams& hp, Scheme scheme,
                        const BacktestConfig& cfg);

}  // namespace tvgl
