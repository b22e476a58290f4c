// tvgl command-line driver: synth | learn | metrics | backtest.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvgl/admm.hpp"
#include "tvgl/errors.hpp"
#include "tvgl/graph_ops.hpp"
#include "tvgl/heavy_tail.hpp"
#include "tvgl/io.hpp"
#include "tvgl/metrics.hpp"
#include "tvgl/portfolio.hpp"
#include "tvgl/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string data_path;
    std::string mask_path;
    std::string truth_path;
    std::string labels_path;
    std::string out_dir = ".";
    long seed = -1;  // -1 means "use the config seed"
};

tvgl::Config load_config(const CommonArgs& args) {
    if (args.config_path.empty()) return tvgl::Config::from_string("");
    return tvgl::Config::from_file(args.config_path);
}

std::uint64_t resolve_seed(const CommonArgs& args, const tvgl::Config& cfg,
                           const std::string& section) {
    if (args.seed >= 0) return static_cast<std::uint64_t>(args.seed);
    return static_cast<std::uint64_t>(cfg.get_int(section, "seed", 0));
}

tvgl::SynthConfig synth_config(const tvgl::Config& cfg, std::uint64_t seed) {
    tvgl::SynthConfig sc;
    sc.p = static_cast<int>(cfg.get_int("synth", "p", sc.p));
    sc.T = static_cast<int>(cfg.get_int("synth", "T", sc.T));
    sc.frame_length = static_cast<int>(cfg.get_int("synth", "frame_length", sc.frame_length));
    sc.clusters = static_cast<int>(cfg.get_int("synth", "clusters", sc.clusters));
    sc.intra_prob = cfg.get_double("synth", "intra_prob", sc.intra_prob);
    sc.inter_prob = cfg.get_double("synth", "inter_prob", sc.inter_prob);
    sc.weight_low = cfg.get_double("synth", "weight_low", sc.weight_low);
    sc.weight_high = cfg.get_double("synth", "weight_high", sc.weight_high);
    sc.var_rate = cfg.get_double("synth", "var_rate", sc.var_rate);
    sc.innovation_std = cfg.get_double("synth", "innovation_std", sc.innovation_std);
    sc.nu = cfg.get_double("synth", "nu", sc.nu);
    sc.sampling_rate = cfg.get_double("synth", "sampling_rate", sc.sampling_rate);
    sc.noise_std = cfg.get_double("synth", "noise_std", sc.noise_std);
    sc.seed = seed;
    const std::string innov = cfg.get_string("synth", "innovation", "gaussian");
    if (innov == "gaussian") {
        sc.innovation = tvgl::SynthConfig::Innovation::gaussian;
    } else if (innov == "laplace") {
        sc.innovation = tvgl::SynthConfig::Innovation::laplace;
    } else {
        throw tvgl::ValidationError("unknown innovation distribution '" + innov + "'");
    }
    return sc;
}

tvgl::HyperParams hyper_params(const tvgl::Config& cfg, int p) {
    const int frame_length = static_cast<int>(cfg.get_int("learn", "frame_length", 200));
    const double d_scalar = cfg.get_double("learn", "d", 1.0);
    return tvgl::HyperParams(
        static_cast<int>(cfg.get_int("learn", "k", 1)),
        tvgl::Vector::Constant(p, d_scalar),
        cfg.get_double("learn", "nu", 3.0),
        cfg.get_double("learn", "sigma_eps", std::exp(0.005 * frame_length)),
        cfg.get_double("learn", "sigma_n", 0.0),
        cfg.get_double("learn", "lambda", 1.0),
        cfg.get_double("learn", "rho", 3.0),
        frame_length,
        static_cast<int>(cfg.get_int("learn", "overlap", 0)),
        cfg.get_double("learn", "eta", -1.0),
        static_cast<int>(cfg.get_int("learn", "max_iter", 1000)),
        cfg.get_double("learn", "tol", 1e-4));
}

int run_synth(const CommonArgs& args) {
    const tvgl::Config cfg = load_config(args);
    const tvgl::SynthConfig sc = synth_config(cfg, resolve_seed(args, cfg, "synth"));
    const tvgl::SynthDataset data = tvgl::generate_dataset(sc);

    fs::create_directories(args.out_dir);
    std::vector<std::string> names;
    names.reserve(sc.p);
    for (int i = 0; i < sc.p; ++i) names.push_back("n" + std::to_string(i));

    tvgl::write_data_csv((fs::path(args.out_dir) / "data.csv").string(), names, data.Y);
    tvgl::write_mask_csv((fs::path(args.out_dir) / "mask.csv").string(), data.M);
    tvgl::write_edge_list((fs::path(args.out_dir) / "truth.csv").string(),
                          data.true_weights, 0.0);
    const std::vector<int> blocks = tvgl::block_assignment(sc.p, sc.clusters);
    tvgl::IntVector labels(sc.p);
    for (int i = 0; i < sc.p; ++i) labels[i] = blocks[i];
    tvgl::write_labels((fs::path(args.out_dir) / "labels.csv").string(), labels);
    std::cout << "wrote data.csv, mask.csv, truth.csv, labels.csv to " << args.out_dir << "\n";
    return 0;
}

int run_learn(const CommonArgs& args) {
    const tvgl::Config cfg = load_config(args);
    if (args.data_path.empty()) throw tvgl::ValidationError("learn requires --data");

    std::optional<std::string> mask;
    if (!args.mask_path.empty()) mask = args.mask_path;
    const tvgl::IngestResult ingest = tvgl::ingest_data(args.data_path, mask);
    const int p = static_cast<int>(ingest.X.rows());
    const int T = static_cast<int>(ingest.X.cols());

    const tvgl::HyperParams hp = hyper_params(cfg, p);
    const int step = hp.frame_length - hp.overlap;
    const int n_frames = (T - hp.overlap) / step;
    if (n_frames < 1) throw tvgl::ValidationError("data is shorter than one frame");

    std::vector<tvgl::FrameObservation> frames;
    frames.reserve(n_frames);
    for (int n = 0; n < n_frames; ++n) {
        frames.emplace_back(ingest.X.middleCols(n * step, hp.frame_length),
                            ingest.M.middleCols(n * step, hp.frame_length));
    }

    const tvgl::EdgeWeights w0 = tvgl::default_initial_weights(hp.d);
    const std::vector<tvgl::FrameResult> results = tvgl::solve_sequence(frames, w0, hp);

    const double edge_tol = cfg.get_double("learn", "edge_tol", 1e-4);
    std::vector<tvgl::EdgeWeights> learned;
    learned.reserve(results.size());
    json diag;
    diag["frames"] = json::array();
    for (std::size_t n = 0; n < results.size(); ++n) {
        const tvgl::FrameResult& r = results[n];
        learned.push_back(r.w_hat);
        json f;
        f["frame"] = n + 1;
        f["iterations"] = r.iters_used;
        f["converged"] = r.converged;
        f["residual_laplacian"] = r.res_laplacian;
        f["residual_temporal"] = r.res_temporal;
        f["residual_degree"] = r.res_degree;
        f["lagrangian"] = r.lagrangian_trace;
        diag["frames"].push_back(std::move(f));
    }

    fs::create_directories(args.out_dir);
    tvgl::write_edge_list((fs::path(args.out_dir) / "edges.csv").string(), learned, edge_tol);
    std::ofstream out(fs::path(args.out_dir) / "diagnostics.json");
    out << diag.dump(2) << "\n";
    std::cout << "wrote edges.csv and diagnostics.json to " << args.out_dir << "\n";
    return 0;
}

int run_metrics(const CommonArgs& args) {
    const tvgl::Config cfg = load_config(args);
    if (args.data_path.empty() || args.truth_path.empty()) {
        throw tvgl::ValidationError("metrics requires --data (estimated) and --truth edge lists");
    }
    const int p_cfg = static_cast<int>(cfg.get_int("metrics", "p", 0));
    std::vector<tvgl::EdgeWeights> est = tvgl::read_edge_list(args.data_path, p_cfg);
    std::vector<tvgl::EdgeWeights> truth = tvgl::read_edge_list(args.truth_path, p_cfg);
    if (est.empty() || truth.empty()) throw tvgl::ValidationError("empty edge lists");
    const int p = std::max(est[0].p, truth[0].p);
    if (est[0].p != truth[0].p) {
        // Re-read with the common node count so both sides align.
        est = tvgl::read_edge_list(args.data_path, p);
        truth = tvgl::read_edge_list(args.truth_path, p);
    }
    if (est.size() != truth.size()) {
        throw tvgl::ValidationError("frame count mismatch: estimated " +
                                    std::to_string(est.size()) + ", truth " +
                                    std::to_string(truth.size()));
    }

    const double edge_tol = cfg.get_double("metrics", "edge_tol", 1e-4);
    const std::uint64_t seed = resolve_seed(args, cfg, "metrics");

    json report;
    report["recovery"] = json::array();
    for (std::size_t n = 0; n < est.size(); ++n) {
        const tvgl::Matrix L_true = tvgl::laplacian(truth[n]);
        const tvgl::Matrix L_est = tvgl::laplacian(est[n]);
        json f;
        f["frame"] = n + 1;
        f["rel_err"] = tvgl::rel_err(L_true, L_est);
        f["f_score"] = tvgl::f_score(L_true, L_est, edge_tol);
        report["recovery"].push_back(std::move(f));
    }

    if (!args.labels_path.empty()) {
        const tvgl::IntVector labels = tvgl::read_labels(args.labels_path);
        if (labels.size() != p) {
            throw tvgl::ValidationError("labels file has " + std::to_string(labels.size()) +
                                        " rows, expected " + std::to_string(p));
        }
        const int k = static_cast<int>(cfg.get_int("metrics", "k", labels.maxCoeff() + 1));
        const tvgl::Partition truth_part(labels, std::max(k, labels.maxCoeff() + 1));
        report["clustering"] = json::array();
        for (std::size_t n = 0; n < est.size(); ++n) {
            const tvgl::Matrix L_est = tvgl::laplacian(est[n]);
            const tvgl::Partition pred = tvgl::spectral_clustering(L_est, k, seed);
            json f;
            f["frame"] = n + 1;
            f["accuracy"] = tvgl::accuracy(truth_part, pred);
            f["purity"] = tvgl::purity(truth_part, pred);
            // Modularity uses the learned weighted adjacency with the
            // ground-truth labels.
            f["modularity"] = tvgl::modularity(tvgl::adjacency(est[n]), truth_part);
            f["ari"] = tvgl::adjusted_rand_index(truth_part, pred);
            report["clustering"].push_back(std::move(f));
        }
    }

    fs::create_directories(args.out_dir);
    std::ofstream out(fs::path(args.out_dir) / "metrics.json");
    out << report.dump(2) << "\n";
    std::cout << "wrote metrics.json to " << args.out_dir << "\n";
    return 0;
}

int run_backtest(const CommonArgs& args) {
    const tvgl::Config cfg = load_config(args);
    if (args.data_path.empty()) throw tvgl::ValidationError("backtest requires --data (returns)");

    const tvgl::IngestResult ingest = tvgl::ingest_data(args.data_path, std::nullopt);
    const int p = static_cast<int>(ingest.X.rows());

    tvgl::BacktestConfig bc;
    bc.frame_length = static_cast<int>(cfg.get_int("backtest", "frame_length", 200));
    bc.rebalance_every = static_cast<int>(cfg.get_int("backtest", "rebalance_every", 20));
    bc.seed = resolve_seed(args, cfg, "backtest");

    tvgl::Config learn_cfg = cfg;
    tvgl::HyperParams hp = hyper_params(cfg, p);
    hp.frame_length = bc.frame_length;

    std::vector<std::string> scheme_names;
    {
        std::stringstream ss(cfg.get_string("backtest", "schemes", "EWP"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto a = item.find_first_not_of(" \t");
            const auto b = item.find_last_not_of(" \t");
            if (a != std::string::npos) scheme_names.push_back(item.substr(a, b - a + 1));
        }
    }

    fs::create_directories(args.out_dir);
    for (const std::string& name : scheme_names) {
        const tvgl::Scheme scheme = tvgl::scheme_from_string(name);
        const tvgl::BacktestReport rep = tvgl::backtest(ingest.X, hp, scheme, bc);
        json j;
        j["scheme"] = tvgl::scheme_to_string(scheme);
        j["ann_return"] = rep.ann_return;
        j["ann_volatility"] = rep.ann_volatility;
        if (rep.sharpe_defined) {
            j["sharpe"] = rep.sharpe;
        } else {
            j["sharpe"] = nullptr;
        }
        j["max_drawdown"] = rep.max_drawdown;
        j["rebalances"] = json::array();
        for (const tvgl::Rebalance& r : rep.rebalances) {
            json jr;
            jr["day"] = r.day;
            jr["weights"] = std::vector<double>(r.weights.data(),
                                                r.weights.data() + r.weights.size());
            j["rebalances"].push_back(std::move(jr));
        }
        const std::string file = "backtest_" + tvgl::scheme_to_string(scheme) + ".json";
        std::ofstream out(fs::path(args.out_dir) / file);
        out << j.dump(2) << "\n";
        std::cout << "wrote " << file << " to " << args.out_dir << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-varying k-component graph learning from heavy-tailed data"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "configuration file");
        sub->add_option("--data", args.data_path, "input data / edge-list path");
        sub->add_option("--mask", args.mask_path, "sampling mask path");
        sub->add_option("--truth", args.truth_path, "ground-truth edge-list path");
        sub->add_option("--labels", args.labels_path, "ground-truth labels path");
        sub->add_option("--out-dir", args.out_dir, "output directory");
        sub->add_option("--seed", args.seed, "master seed (overrides config)");
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic benchmark dataset");
    CLI::App* learn = app.add_subcommand("learn", "learn per-frame graphs from data");
    CLI::App* metrics = app.add_subcommand("metrics", "score estimated graphs against truth");
    CLI::App* backtest = app.add_subcommand("backtest", "portfolio backtest on returns data");
    add_common(synth);
    add_common(learn);
    add_common(metrics);
    add_common(backtest);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_synth(args);
        if (learn->parsed()) return run_learn(args);
        if (metrics->parsed()) return run_metrics(args);
        if (backtest->parsed()) return run_backtest(args);
    } catch (const tvgl::ValidationError& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return 2;
    } catch (const tvgl::NumericalError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
    return 0;
}
