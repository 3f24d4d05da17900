// mlsol: resample multi-label datasets, benchmark resampling methods, inspect local statistics.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlsol/benchmark.hpp"
#include "mlsol/dataset.hpp"
#include "mlsol/error.hpp"
#include "mlsol/local_stats.hpp"
#include "mlsol/mlsmote.hpp"
#include "mlsol/mlsol_sampler.hpp"
#include "mlsol/neighbors.hpp"

namespace fs = std::filesystem;
using namespace mlsol;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

bool has_extension(const fs::path& p, const char* ext) {
    auto e = p.extension().string();
    for (auto& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e == ext;
}

// Two input paths: (features.csv, labels.csv) or (data.arff, labels.xml).
MultiLabelDataset load_inputs(const std::vector<std::string>& inputs) {
    if (has_extension(inputs[0], ".arff")) return load_mulan(inputs[0], inputs[1]);
    return load_csv(inputs[0], inputs[1]);
}

fs::path sibling(const fs::path& p, const std::string& suffix, const std::string& ext) {
    return p.parent_path() / (p.stem().string() + suffix + ext);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed: " + path.string());
}

std::string format_real(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

std::string_view source_name(LabelSource s) {
    switch (s) {
        case LabelSource::Agreement: return "agree";
        case LabelSource::Seed: return "seed";
        case LabelSource::Reference: return "reference";
    }
    return "?";
}

unsigned worker_count(unsigned flag) {
    if (const char* env = std::getenv("MLSOL_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return flag;
}

struct ResampleOptions {
    std::vector<std::string> paths;
    std::string method = "mlsol";
    std::size_t k = 5;
    double ratio = 0.3;
    std::uint64_t seed = 0;
    bool scale = false;
    bool keep_rare = false;
    std::string labels_out;
    std::string trace;
};

int cmd_resample(const ResampleOptions& opt) {
    auto data = load_inputs(opt.paths);
    if (!opt.keep_rare) data = filter_rare_labels(data);
    if (opt.scale) data = MinMaxScaler::fit(data).transform(data);
    const fs::path out = opt.paths[2];

    MultiLabelDataset result = data;
    if (opt.method == "mlsol") {
        SamplerConfig config;
        config.k = opt.k;
        config.gen_ratio = opt.ratio;
        config.seed = opt.seed;
        auto run = run_mlsol(data, config);
        if (!opt.trace.empty()) {
            std::ostringstream t;
            t << "synthetic,seed,reference,cd,seed_distance,reference_distance";
            for (const auto& name : data.label_names()) t << ",source:" << name;
            t << '\n';
            for (std::size_t g = 0; g < run.trace.size(); ++g) {
                const auto& r = run.trace[g];
                t << data.size() + g << ',' << r.seed << ',' << r.reference << ',' << format_real(r.context.cd) << ','
                  << format_real(r.context.seed_distance) << ',' << format_real(r.context.reference_distance);
                for (auto s : r.sources) t << ',' << source_name(s);
                t << '\n';
            }
            write_text(opt.trace, t.str());
        }
        result = std::move(run.dataset);
    } else {
        if (!opt.trace.empty()) throw Error("--trace is only available for --method mlsol");
        result = mlsmote(data, MlsmoteConfig{opt.k, opt.seed});
    }

    if (has_extension(out, ".arff")) {
        const fs::path xml = opt.labels_out.empty() ? sibling(out, "", ".xml") : fs::path(opt.labels_out);
        write_mulan(result, out, xml);
    } else {
        const fs::path labels = opt.labels_out.empty() ? sibling(out, "_labels", out.extension().string())
                                                       : fs::path(opt.labels_out);
        write_csv(result, out, labels);
    }
    std::cout << "original " << data.size() << "\n"
              << "generated " << result.size() - data.size() << "\n"
              << "total " << result.size() << "\n";
    return 0;
}

struct BenchmarkOptions {
    std::vector<std::string> paths;
    std::vector<std::string> methods{"none", "mlsol"};
    std::optional<std::size_t> ensemble;
    std::string learner = "br-knn";
    std::size_t learner_k = 5;
    std::size_t k = 5;
    double ratio = 0.3;
    std::size_t folds = 2;
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
    bool scale = false;
    bool keep_rare = false;
    unsigned workers = 1;
    std::string out;
    std::string csv;
    std::string log;
};

int cmd_benchmark(const BenchmarkOptions& opt) {
    auto data = load_inputs(opt.paths);
    if (!opt.keep_rare) data = filter_rare_labels(data);

    BenchmarkSpec spec;
    spec.methods.clear();
    for (const auto& m : opt.methods) spec.methods.push_back(parse_method(m));
    spec.ensemble = opt.ensemble;
    spec.learner_k = opt.learner_k;
    spec.k = opt.k;
    spec.ratio = opt.ratio;
    spec.folds = opt.folds;
    spec.repeats = opt.repeats;
    spec.seed = opt.seed;
    spec.min_max_scale = opt.scale;
    spec.workers = worker_count(opt.workers);

    const auto report = run_benchmark(data, spec);
    const auto json = report_json(report, spec);
    if (opt.out.empty()) {
        std::cout << json;
    } else {
        write_text(opt.out, json);
    }
    if (!opt.csv.empty()) write_text(opt.csv, report_csv(report, spec));
    if (!opt.log.empty()) write_text(opt.log, protocol_log_csv(report, spec));

    std::cerr << "method            macro-F    AUC-ROC    AUCPR\n";
    for (const auto& s : report.summaries) {
        std::cerr << s.label << std::string(s.label.size() < 16 ? 16 - s.label.size() : 1, ' ') << "  "
                  << format_real(s.macro_f).substr(0, 8) << "   " << format_real(s.macro_auc_roc).substr(0, 8) << "   "
                  << format_real(s.macro_aucpr).substr(0, 8) << "\n";
    }
    return 0;
}

struct InspectOptions {
    std::vector<std::string> paths;
    std::size_t k = 5;
    bool scale = false;
    bool keep_rare = false;
    std::string out_dir = ".";
};

int cmd_inspect(const InspectOptions& opt) {
    auto data = load_inputs(opt.paths);
    if (!opt.keep_rare) data = filter_rare_labels(data);
    if (opt.scale) data = MinMaxScaler::fit(data).transform(data);

    const auto index = build_knn(data, opt.k);
    const auto c = compute_opposition(data, index);
    const auto w = compute_weights(c, data);
    const auto types = init_types(c, data, index);

    const fs::path dir = opt.out_dir;
    fs::create_directories(dir);
    std::ostringstream cs, ws, ts;
    cs << "instance";
    ts << "instance";
    for (const auto& name : data.label_names()) {
        cs << ',' << name;
        ts << ',' << name;
    }
    cs << '\n';
    ts << '\n';
    ws << "instance,weight\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        cs << i;
        ts << i;
        for (std::size_t j = 0; j < data.num_labels(); ++j) {
            cs << ',' << format_real(c(i, j));
            ts << ',' << to_string(types(i, j));
        }
        cs << '\n';
        ts << '\n';
        ws << i << ',' << format_real(w[i]) << '\n';
    }
    write_text(dir / "opposition.csv", cs.str());
    write_text(dir / "weights.csv", ws.str());
    write_text(dir / "types.csv", ts.str());

    const auto hist = type_histogram(types);
    const auto stats = dataset_stats(data);
    nlohmann::json summary;
    summary["instances"] = data.size();
    summary["features"] = data.num_features();
    summary["labels"] = data.num_labels();
    summary["k"] = opt.k;
    summary["cardinality"] = stats.cardinality;
    summary["mean_imbalance_ratio"] = stats.mean_imbalance_ratio;
    for (std::size_t j = 0; j < data.num_labels(); ++j) {
        nlohmann::json h;
        for (auto t : kAllInstanceTypes) h[std::string(to_string(t))] = hist[j][static_cast<std::size_t>(t)];
        summary["type_histogram"][data.label_names()[j]] = h;
    }
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    std::cout << "label";
    for (auto t : kAllInstanceTypes) std::cout << '\t' << to_string(t);
    std::cout << '\n';
    for (std::size_t j = 0; j < data.num_labels(); ++j) {
        std::cout << data.label_names()[j];
        for (auto t : kAllInstanceTypes) std::cout << '\t' << hist[j][static_cast<std::size_t>(t)];
        std::cout << '\n';
    }
    return 0;
}

void add_dataset_inputs(CLI::App* cmd, std::vector<std::string>& paths, std::size_t count, const std::string& what) {
    cmd->add_option("paths", paths, what)->required()->expected(static_cast<int>(count));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic oversampling for imbalanced multi-label data"};
    app.require_subcommand(1);

    ResampleOptions ropt;
    auto* resample = app.add_subcommand("resample", "Oversample a dataset and write the result");
    add_dataset_inputs(resample, ropt.paths, 3,
                       "FEATURES.csv LABELS.csv OUT (or DATA.arff LABELS.xml OUT); OUT ending in .arff writes ARFF");
    resample->add_option("--method", ropt.method, "Resampling method")
        ->check(CLI::IsMember({"mlsol", "mlsmote"}))
        ->capture_default_str();
    resample->add_option("--k", ropt.k, "Nearest neighbours")->check(CLI::PositiveNumber)->capture_default_str();
    resample->add_option("--ratio", ropt.ratio, "Generated instances as a fraction of n (mlsol)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    resample->add_option("--seed", ropt.seed, "Random seed")->capture_default_str();
    resample->add_flag("--scale", ropt.scale, "Min-max scale features first");
    resample->add_flag("--keep-rare-labels", ropt.keep_rare, "Do not drop labels with a single minority instance");
    resample->add_option("--labels-out", ropt.labels_out, "Label CSV (or label XML) output path");
    resample->add_option("--trace", ropt.trace, "Write the generation trace as CSV (mlsol)");

    BenchmarkOptions bopt;
    auto* benchmark = app.add_subcommand("benchmark", "Cross-validated comparison of resampling methods");
    add_dataset_inputs(benchmark, bopt.paths, 2, "FEATURES.csv LABELS.csv (or DATA.arff LABELS.xml)");
    benchmark->add_option("--methods", bopt.methods, "Methods to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"none", "mlsol", "mlsmote"}))
        ->capture_default_str();
    benchmark->add_option("--ensemble", bopt.ensemble, "Train an ensemble of M resampled models")
        ->check(CLI::PositiveNumber);
    benchmark->add_option("--learner", bopt.learner, "Base learner")
        ->check(CLI::IsMember({"br-knn"}))
        ->capture_default_str();
    benchmark->add_option("--learner-k", bopt.learner_k, "Neighbours of the BR-kNN learner")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    benchmark->add_option("--k", bopt.k, "Neighbours used by the samplers")->check(CLI::PositiveNumber)->capture_default_str();
    benchmark->add_option("--ratio", bopt.ratio, "MLSOL generation ratio")->check(CLI::PositiveNumber)->capture_default_str();
    benchmark->add_option("--folds", bopt.folds, "Folds per repetition")->check(CLI::Range(2, 1000000))->capture_default_str();
    benchmark->add_option("--repeats", bopt.repeats, "Repetitions")->check(CLI::PositiveNumber)->capture_default_str();
    benchmark->add_option("--seed", bopt.seed, "Random seed")->capture_default_str();
    benchmark->add_flag("--scale", bopt.scale, "Min-max scale features (fitted on each training fold)");
    benchmark->add_flag("--keep-rare-labels", bopt.keep_rare, "Do not drop labels with a single minority instance");
    benchmark->add_option("--workers", bopt.workers, "Parallel fold runs (MLSOL_WORKERS overrides)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    benchmark->add_option("--out", bopt.out, "JSON report path (default stdout)");
    benchmark->add_option("--csv", bopt.csv, "CSV report path");
    benchmark->add_option("--log", bopt.log, "Protocol log CSV path");

    InspectOptions iopt;
    auto* inspect = app.add_subcommand("inspect", "Dump opposition values, weights and instance types");
    add_dataset_inputs(inspect, iopt.paths, 2, "FEATURES.csv LABELS.csv (or DATA.arff LABELS.xml)");
    inspect->add_option("--k", iopt.k, "Nearest neighbours")->check(CLI::PositiveNumber)->capture_default_str();
    inspect->add_flag("--scale", iopt.scale, "Min-max scale features first");
    inspect->add_flag("--keep-rare-labels", iopt.keep_rare, "Do not drop labels with a single minority instance");
    inspect->add_option("--out-dir", iopt.out_dir, "Directory for the CSV dumps")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (resample->parsed()) return cmd_resample(ropt);
        if (benchmark->parsed()) return cmd_benchmark(bopt);
        if (inspect->parsed()) return cmd_inspect(iopt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kUsageError;
}
