#include "mhpc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhpc/consolidate.hpp"
#include "mhpc/io.hpp"
#include "mhpc/metrics.hpp"
#include "mhpc/synth.hpp"

namespace mhpc {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string hierarchy;
    std::string truth;
    std::string scores;
    std::vector<std::string> predictions;
    std::string out;
    std::string method;
    double lambda = 10.0;
    double alpha = kDefaultAlpha;
    double sigma = 0.0;
    double tol = 1e-4;
    int max_iters = 50;
    std::uint64_t seed = 0;
    double alpha_vague = 0.8;
    double alpha_noise = 0.5;
    std::size_t sources = 4;
    bool dump_graph = false;
};

// Writes through a temporary file so a failed run never leaves a half-written
// output behind.
void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        body(out);
        out.flush();
        if (!out) throw std::runtime_error("I/O error while writing " + path.string());
    }
    fs::rename(tmp, path);
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + out);
    }
    return dir;
}

ordered_json input_digests(const std::vector<std::string>& paths) {
    ordered_json inputs = ordered_json::array();
    for (const auto& p : paths) {
        inputs.push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
    }
    return inputs;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& args, ordered_json config,
                    const std::vector<std::string>& inputs, std::vector<std::string> outputs) {
    ordered_json manifest;
    manifest["tool"] = "mhpc";
    manifest["version"] = std::string(kToolVersion);
    manifest["command"] = command;
    manifest["argv"] = args;
    manifest["config"] = std::move(config);
    manifest["inputs"] = input_digests(inputs);
    manifest["outputs"] = std::move(outputs);
    write_file(dir / "manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });
}

std::vector<fs::path> as_paths(const std::vector<std::string>& files) {
    return {files.begin(), files.end()};
}

ConsolidationConfig consolidation_config(const Options& opt, const CLI::Option* sigma_flag) {
    ConsolidationConfig cfg;
    cfg.lambda = opt.lambda;
    cfg.alpha = opt.alpha;
    cfg.tol = opt.tol;
    cfg.max_iters = opt.max_iters;
    if (sigma_flag->count() > 0) cfg.sigma_override = opt.sigma;
    cfg.validate();
    return cfg;
}

ordered_json consolidation_json(const ConsolidationConfig& cfg, const ConsolidationResult& r) {
    return {{"lambda", cfg.lambda},
            {"alpha", cfg.alpha},
            {"sigma", r.sigma},
            {"sigma_source", cfg.sigma_override ? "flag" : "median"},
            {"tol", cfg.tol},
            {"max_iters", cfg.max_iters},
            {"iterations_run", r.iterations_run},
            {"converged", r.converged}};
}

void write_scores_file(const fs::path& dir, const Matrix& scores, const NameIndex& instances,
                       const NameIndex& labels) {
    write_file(dir / "scores.tsv",
               [&](std::ostream& os) { write_scores(os, scores, instances, labels); });
}

int cmd_generate(const Options& opt, const std::vector<std::string>& args) {
    const HierarchyFile hf = read_hierarchy(opt.hierarchy);
    NameIndex instances;
    const SparseBinaryMatrix truth = load_truth(opt.truth, hf, instances);
    GenConfig cfg{opt.sources, opt.alpha_vague, opt.alpha_noise, opt.seed};
    const PredictionSet preds = generate_predictions(truth, hf.hierarchy, cfg);

    const fs::path dir = prepare_out_dir(opt.out);
    std::vector<std::string> outputs;
    for (std::size_t m = 0; m < preds.n_sources(); ++m) {
        const std::string name = "source_" + std::to_string(m + 1) + ".tsv";
        write_file(dir / name, [&](std::ostream& os) {
            os << "# mhpc generate source=" << (m + 1) << " n_sources=" << cfg.n_sources
               << " alpha_vague=" << format_double(cfg.alpha_vague)
               << " alpha_noise=" << format_double(cfg.alpha_noise) << " seed=" << cfg.seed
               << " prng=" << kPrngAlgorithm << '\n';
            write_labels(os, preds.source(m), instances, hf.labels);
        });
        outputs.push_back(name);
    }
    write_manifest(dir, "generate", args,
                   {{"sources", cfg.n_sources},
                    {"alpha_vague", cfg.alpha_vague},
                    {"alpha_noise", cfg.alpha_noise},
                    {"seed", cfg.seed},
                    {"prng", std::string(kPrngAlgorithm)}},
                   {opt.hierarchy, opt.truth}, outputs);
    return 0;
}

int cmd_consolidate(const Options& opt, const std::vector<std::string>& args,
                    const CLI::Option* sigma_flag, const CLI::Option* alpha_flag) {
    if (opt.method == "mpcu" && alpha_flag->count() > 0) {
        throw UsageError("--alpha has no effect with --method mpcu (uniform support)");
    }
    ConsolidationConfig cfg = consolidation_config(opt, sigma_flag);
    const HierarchyFile hf = read_hierarchy(opt.hierarchy);
    const auto loaded = load_predictions(as_paths(opt.predictions), hf);
    const auto& preds = loaded.predictions;

    std::vector<std::string> outputs{"scores.tsv", "trace.tsv"};
    const fs::path dir = prepare_out_dir(opt.out);
    ConsolidationResult result;
    if (opt.method == "mhpc") {
        const OccurrenceVector occ = occurrence_vector(preds, hf.hierarchy);
        const SupportVector support = support_vector(occ, preds.n_instances(), cfg.alpha);
        result = consolidate_with_support(preds, support.as_vector(), cfg);
        write_file(dir / "support.tsv",
                   [&](std::ostream& os) { write_support(os, occ, support, hf.labels); });
        outputs.push_back("support.tsv");
    } else {
        cfg.support_mode = SupportMode::uniform;
        result = mpc_u(preds, cfg);
    }

    write_scores_file(dir, result.y_hat, loaded.instances, hf.labels);
    write_file(dir / "trace.tsv", [&](std::ostream& os) { write_trace(os, result.trace); });
    if (opt.dump_graph && result.graph.weights.size() > 0) {
        write_file(dir / "similarity.tsv",
                   [&](std::ostream& os) { write_dense(os, result.graph.weights); });
        write_file(dir / "laplacian.tsv", [&](std::ostream& os) {
            write_dense(os, normalized_laplacian(result.graph).entries);
        });
        outputs.push_back("similarity.tsv");
        outputs.push_back("laplacian.tsv");
    }

    auto config = consolidation_json(cfg, result);
    config["method"] = opt.method;
    std::vector<std::string> inputs{opt.hierarchy};
    inputs.insert(inputs.end(), opt.predictions.begin(), opt.predictions.end());
    write_manifest(dir, "consolidate", args, std::move(config), inputs, outputs);
    return 0;
}

int cmd_baseline(const Options& opt, const std::vector<std::string>& args,
                 const std::vector<const CLI::Option*>& solver_flags,
                 const CLI::Option* sigma_flag, const CLI::Option* alpha_flag) {
    if (opt.method != "mpcu") {
        for (const auto* flag : solver_flags) {
            if (flag->count() > 0) {
                throw UsageError(flag->get_name() + " conflicts with --method " + opt.method +
                                 " (averaging baselines have no solver)");
            }
        }
    }
    if (opt.method != "wa" && alpha_flag->count() > 0) {
        throw UsageError("--alpha conflicts with --method " + opt.method +
                         " (only wa uses support weights)");
    }

    const HierarchyFile hf = read_hierarchy(opt.hierarchy);
    const auto loaded = load_predictions(as_paths(opt.predictions), hf);
    const auto& preds = loaded.predictions;
    const fs::path dir = prepare_out_dir(opt.out);
    std::vector<std::string> outputs{"scores.tsv"};
    ordered_json config{{"method", opt.method}};

    if (opt.method == "sa") {
        write_scores_file(dir, simple_average(preds), loaded.instances, hf.labels);
    } else if (opt.method == "wa") {
        const OccurrenceVector occ = occurrence_vector(preds, hf.hierarchy);
        const SupportVector support = support_vector(occ, preds.n_instances(), opt.alpha);
        write_scores_file(dir, weighted_average(preds, support), loaded.instances, hf.labels);
        write_file(dir / "support.tsv",
                   [&](std::ostream& os) { write_support(os, occ, support, hf.labels); });
        outputs.push_back("support.tsv");
        config["alpha"] = opt.alpha;
    } else {
        ConsolidationConfig cfg = consolidation_config(opt, sigma_flag);
        cfg.support_mode = SupportMode::uniform;
        const ConsolidationResult result = mpc_u(preds, cfg);
        write_scores_file(dir, result.y_hat, loaded.instances, hf.labels);
        write_file(dir / "trace.tsv", [&](std::ostream& os) { write_trace(os, result.trace); });
        outputs.push_back("trace.tsv");
        config.update(consolidation_json(cfg, result));
    }

    std::vector<std::string> inputs{opt.hierarchy};
    inputs.insert(inputs.end(), opt.predictions.begin(), opt.predictions.end());
    write_manifest(dir, "baseline", args, std::move(config), inputs, outputs);
    return 0;
}

int cmd_evaluate(const Options& opt, const std::vector<std::string>& args, std::ostream& out) {
    const HierarchyFile hf = read_hierarchy(opt.hierarchy);
    NameIndex instances;
    const SparseBinaryMatrix truth_partial = load_truth(opt.truth, hf, instances);
    const Matrix scores = load_scores(opt.scores, hf, instances);
    // Instances only present in the score file are all-negative in the truth.
    SparseBinaryMatrix truth(instances.size(), hf.hierarchy.num_labels());
    for (std::size_t i = 0; i < truth_partial.rows(); ++i) {
        for (LabelIndex k : truth_partial.row(i)) truth.set(i, k);
    }
    const MetricsReport report = evaluate(scores, truth);
    std::ostringstream row;
    row << format_double(report.ranking_loss) << '\t' << format_double(report.micro_auc) << '\t'
        << format_double(report.coverage_error) << '\t' << report.skipped << '\n';
    out << row.str();

    if (!opt.out.empty()) {
        const fs::path dir = prepare_out_dir(opt.out);
        write_file(dir / "metrics.tsv", [&](std::ostream& os) {
            os << "ranking_loss\tmicro_auc\tcoverage_error\tskipped\n" << row.str();
        });
        write_manifest(dir, "evaluate", args, ordered_json::object(),
                       {opt.hierarchy, opt.truth, opt.scores}, {"metrics.tsv"});
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-source hierarchical prediction consolidation", "mhpc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Options opt;

    auto* generate = app.add_subcommand("generate", "corrupt ground truth into M synthetic sources");
    generate->add_option("--hierarchy", opt.hierarchy, "hierarchy TSV (child<TAB>parent)")->required();
    generate->add_option("--truth", opt.truth, "ground truth TSV (instance<TAB>label)")->required();
    generate->add_option("--sources", opt.sources, "number of sources M")
        ->capture_default_str()->check(CLI::PositiveNumber);
    generate->add_option("--alpha-vague", opt.alpha_vague, "vagueness parameter in (0, 1]")
        ->capture_default_str();
    generate->add_option("--alpha-noise", opt.alpha_noise, "noise parameter in (0, 1]")
        ->capture_default_str();
    generate->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    generate->add_option("--out", opt.out, "output directory")->required();

    auto* consolidate = app.add_subcommand("consolidate", "consolidate source predictions");
    auto* baseline = app.add_subcommand("baseline", "run a baseline aggregation method");
    std::vector<const CLI::Option*> solver_flags;
    const CLI::Option* consolidate_sigma = nullptr;
    const CLI::Option* consolidate_alpha = nullptr;
    const CLI::Option* baseline_sigma = nullptr;
    const CLI::Option* baseline_alpha = nullptr;
    for (auto* sub : {consolidate, baseline}) {
        const bool is_baseline = sub == baseline;
        sub->add_option("--hierarchy", opt.hierarchy, "hierarchy TSV")->required();
        sub->add_option("--predictions", opt.predictions, "one TSV per source")
            ->required()->expected(1, -1);
        sub->add_option("--out", opt.out, "output directory")->required();
        auto* method = sub->add_option("--method", opt.method, "aggregation method");
        if (is_baseline) {
            method->check(CLI::IsMember({"sa", "wa", "mpcu"}))->required();
        } else {
            method->check(CLI::IsMember({"mhpc", "mpcu"}))->default_str("mhpc");
        }
        auto* lambda = sub->add_option("--lambda", opt.lambda, "regularization weight")
                           ->capture_default_str();
        auto* alpha = sub->add_option("--alpha", opt.alpha, "significance level")
                          ->capture_default_str();
        auto* sigma = sub->add_option("--sigma", opt.sigma, "similarity bandwidth (default: median distance)");
        auto* tol = sub->add_option("--tol", opt.tol, "stopping threshold on ||dY||_F")
                        ->capture_default_str();
        auto* iters = sub->add_option("--max-iters", opt.max_iters, "iteration cap")
                          ->capture_default_str();
        if (is_baseline) {
            solver_flags = {lambda, sigma, tol, iters};
            baseline_sigma = sigma;
            baseline_alpha = alpha;
        } else {
            consolidate_sigma = sigma;
            consolidate_alpha = alpha;
            sub->add_flag("--dump-graph", opt.dump_graph, "also write similarity.tsv and laplacian.tsv");
        }
    }

    auto* evaluate_cmd = app.add_subcommand("evaluate", "score a consolidation against ground truth");
    evaluate_cmd->add_option("--hierarchy", opt.hierarchy, "hierarchy TSV")->required();
    evaluate_cmd->add_option("--truth", opt.truth, "ground truth TSV")->required();
    evaluate_cmd->add_option("--scores", opt.scores, "scores TSV (instance<TAB>label<TAB>score)")
        ->required();
    evaluate_cmd->add_option("--out", opt.out, "optional output directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (opt.method.empty()) opt.method = "mhpc";
        if (generate->parsed()) return cmd_generate(opt, args);
        if (consolidate->parsed()) {
            return cmd_consolidate(opt, args, consolidate_sigma, consolidate_alpha);
        }
        if (baseline->parsed()) {
            return cmd_baseline(opt, args, solver_flags, baseline_sigma, baseline_alpha);
        }
        return cmd_evaluate(opt, args, out);
    } catch (const UsageError& e) {
        err << "mhpc: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "mhpc: error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace mhpc
