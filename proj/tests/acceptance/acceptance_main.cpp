// Acceptance suite. Each criterion prints one PASS/FAIL line; the exit code is the number
// of failed criteria not named by --allow-fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mlsol/benchmark.hpp"
#include "mlsol/ensemble.hpp"
#include "mlsol/local_stats.hpp"
#include "mlsol/metrics.hpp"
#include "mlsol/mlsol_sampler.hpp"
#include "support.hpp"

using namespace mlsol;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1
Outcome opposition_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    std::size_t mismatches = 0, cells = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 10 + rng() % 191;
        const std::size_t d = 1 + rng() % 10;
        const std::size_t q = 1 + rng() % 6;
        const auto data = testing::random_dataset(rng, n, d, q, 0.05 + 0.4 * static_cast<double>(rng() % 100) / 100.0);
        const auto c = compute_opposition(data, build_knn(data, 5));
        const auto nn = testing::reference_knn(data, 5);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < q; ++j) {
                std::size_t opposite = 0;
                for (auto m : nn[i]) opposite += data.labels()(m, j) != data.labels()(i, j);
                mismatches += c(i, j) != static_cast<double>(opposite) / 5.0;
                ++cells;
            }
        }
    }
    const double elapsed = seconds_since(t0);
    return {mismatches == 0 && elapsed < 10.0,
            fmt("%zu mismatches over %zu cells, %.2f s", mismatches, cells, elapsed)};
}

// 2
Outcome weight_normalization() {
    std::mt19937_64 rng(1002);
    double worst = 0.0;
    std::size_t checked_labels = 0, all_outlier_instances = 0, bad_weights = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto data = testing::random_dataset(rng, 30 + rng() % 170, 1 + rng() % 5, 1 + rng() % 6, 0.15);
        const auto c = compute_opposition(data, build_knn(data, 5));
        const auto share = label_contributions(c, data);
        const auto w = compute_weights(c, data);
        const auto minority = minority_classes(data);
        for (std::size_t j = 0; j < data.num_labels(); ++j) {
            double z = 0.0, sum = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (data.labels()(i, j) == minority[j] && c(i, j) < 1.0) z += c(i, j);
                sum += share(i, j);
            }
            if (z > 0.0) {
                worst = std::max(worst, std::abs(sum - 1.0));
                ++checked_labels;
            }
        }
        for (std::size_t i = 0; i < data.size(); ++i) {
            bool has_minority = false, all_outliers = true;
            for (std::size_t j = 0; j < data.num_labels(); ++j) {
                if (data.labels()(i, j) != minority[j]) continue;
                has_minority = true;
                all_outliers = all_outliers && c(i, j) == 1.0;
            }
            if (has_minority && all_outliers) {
                ++all_outlier_instances;
                bad_weights += w[i] != 0.0;
            }
        }
    }
    return {worst <= 1e-9 && bad_weights == 0 && all_outlier_instances > 0,
            fmt("max |sum-1| = %.3g over %zu labels; %zu all-outlier instances, %zu nonzero", worst, checked_labels,
                all_outlier_instances, bad_weights)};
}

// 3
Outcome type_fixed_point() {
    std::mt19937_64 rng(1003);
    std::size_t violations = 0, unstable = 0, rare_cells = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto data = testing::random_dataset(rng, 30 + rng() % 170, 1 + rng() % 4, 1 + rng() % 6, 0.2);
        const auto index = build_knn(data, 5);
        const auto t = init_types(compute_opposition(data, index), data, index);
        unstable += reexamine_rare(t, index) != t;
        for (std::size_t i = 0; i < data.size(); ++i) {
            for (std::size_t j = 0; j < data.num_labels(); ++j) {
                if (t(i, j) != InstanceType::Rare) continue;
                ++rare_cells;
                for (auto m : index.neighbors(i)) {
                    violations += t(m, j) == InstanceType::Safe || t(m, j) == InstanceType::Borderline;
                }
            }
        }
    }
    return {violations == 0 && unstable == 0,
            fmt("%zu RR cells, %zu with an SF/BD neighbour, %zu changed by an extra pass", rare_cells, violations, unstable)};
}

// 4
Outcome theta_table() {
    std::mt19937_64 rng(1004);
    std::size_t generated = 0, violations = 0;
    std::map<InstanceType, std::size_t> decided;
    while (generated < 100000) {
        const bool clustered = rng() % 2 == 0;
        const auto data = clustered ? testing::subconcept_dataset(300 + rng() % 200, rng())
                                    : testing::random_dataset(rng, 200 + rng() % 300, 2 + rng() % 3, 1 + rng() % 5, 0.2);
        SamplerConfig config;
        config.seed = rng();
        config.gen_ratio = 5.0;
        const auto index = build_knn(data, config.k);
        const auto types = init_types(compute_opposition(data, index), data, index);
        const auto minority = minority_classes(data);
        const auto run = run_mlsol(data, config);
        for (std::size_t g = 0; g < run.trace.size(); ++g) {
            const auto& r = run.trace[g];
            const auto x = run.dataset.x(data.size() + g);
            const auto y = run.dataset.y(data.size() + g);
            for (std::size_t f = 0; f < data.num_features(); ++f) {
                const double a = data.x(r.seed)[f], b = data.x(r.reference)[f];
                violations += x[f] < std::min(a, b) || x[f] > std::max(a, b);
            }
            const double cd = r.context.cd;
            for (std::size_t j = 0; j < data.num_labels(); ++j) {
                const LabelBit ys = data.y(r.seed)[j], yr = data.y(r.reference)[j];
                if (ys == yr) {
                    violations += y[j] != ys;
                    continue;
                }
                // the side holding the minority class decides
                const bool seed_is_minority = ys == minority[j];
                const std::size_t m = seed_is_minority ? r.seed : r.reference;
                const double cd_m = seed_is_minority ? cd : 1.0 - cd;
                const LabelBit min_value = minority[j];
                const auto type = types(m, j);
                bool expect_minority = false;
                switch (type) {
                    case InstanceType::Rare: expect_minority = true; break;
                    case InstanceType::Outlier: expect_minority = false; break;
                    case InstanceType::Safe: expect_minority = cd_m <= 0.5; break;
                    case InstanceType::Borderline: expect_minority = cd_m <= 0.75; break;
                    case InstanceType::Majority: ++violations; continue;
                }
                ++decided[type];
                violations += (y[j] == min_value) != expect_minority;
            }
        }
        generated += run.trace.size();
    }
    const bool covered = decided[InstanceType::Safe] && decided[InstanceType::Borderline] &&
                         decided[InstanceType::Rare] && decided[InstanceType::Outlier];
    return {violations == 0 && covered,
            fmt("%zu synthetic instances, %zu violations; disagreements decided by SF %zu BD %zu RR %zu OT %zu", generated,
                violations, decided[InstanceType::Safe], decided[InstanceType::Borderline], decided[InstanceType::Rare],
                decided[InstanceType::Outlier])};
}

// 5
Outcome count_and_determinism() {
    std::mt19937_64 rng(1005);
    bool sizes = true, identical = true;
    std::size_t differing = 0;
    for (int pair = 0; pair < 10; ++pair) {
        const std::size_t n = 50 + rng() % 300;
        const auto data = testing::random_dataset(rng, n, 3, 4, 0.2);
        SamplerConfig a;  // k = 5, ratio 0.3
        a.seed = rng();
        SamplerConfig b = a;
        b.seed = a.seed + 1 + rng() % 1000;
        const auto out_a = mlsol::mlsol(data, a);
        sizes = sizes && out_a.size() == n + static_cast<std::size_t>(std::floor(0.3 * static_cast<double>(n)));
        identical = identical && mlsol::mlsol(data, a) == out_a;
        differing += mlsol::mlsol(data, b) != out_a;
    }
    return {sizes && identical && differing == 10,
            fmt("sizes %s, repeat runs %s, %zu/10 seed pairs differ", sizes ? "ok" : "wrong",
                identical ? "identical" : "differ", differing)};
}

// 6
Outcome threshold_optimality() {
    std::mt19937_64 rng(1006);
    std::size_t mismatches = 0;
    for (int col = 0; col < 100; ++col) {
        const std::size_t n = 1 + rng() % 50;
        const int levels = 1 + static_cast<int>(rng() % 10);
        Matrix<double> s(n, 1);
        Matrix<LabelBit> t(n, 1);
        for (std::size_t i = 0; i < n; ++i) {
            s(i, 0) = col % 2 ? static_cast<double>(rng() % levels) / levels : std::uniform_real_distribution<>(0, 1)(rng);
            t(i, 0) = rng() % 3 == 0;
        }
        const double th = tune_thresholds(s, t)[0];
        const auto sv = s.column(0);
        const auto tv = t.column(0);
        mismatches += testing::f1_at(sv, tv, th) != testing::brute_force_best_f1(sv, tv);
    }
    return {mismatches == 0, fmt("%zu/100 columns differ from exhaustive search", mismatches)};
}

// 7
Outcome metric_oracles() {
    std::mt19937_64 rng(1007);
    double worst_roc = 0.0, worst_pr = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 100;
        const int levels = 1 + static_cast<int>(rng() % 20);
        std::vector<double> s(n);
        std::vector<LabelBit> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = trial % 2 ? static_cast<double>(rng() % levels) / levels : std::uniform_real_distribution<>(0, 1)(rng);
            t[i] = rng() % 2;
        }
        t[0] = 1;
        t[1] = 0;
        worst_roc = std::max(worst_roc, std::abs(*auc_roc(s, t) - testing::pairwise_auc(s, t)));
        worst_pr = std::max(worst_pr, std::abs(*auc_pr(s, t) - testing::sweep_aucpr(s, t)));
    }
    const double roc = *auc_roc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<LabelBit>{0, 0, 1, 1});
    const double pr = *auc_pr(std::vector<double>{0.8, 0.6, 0.4, 0.2}, std::vector<LabelBit>{1, 0, 1, 0});
    return {worst_roc <= 1e-12 && worst_pr <= 1e-12 && roc == 0.75 && pr == 5.0 / 6.0,
            fmt("max deviation roc %.3g, pr %.3g; examples %.17g, %.17g", worst_roc, worst_pr, roc, pr)};
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// 8
Outcome directional_efficacy() {
    const auto t0 = Clock::now();
    const auto data = testing::subconcept_dataset(600, 20240601);
    const auto stats = dataset_stats(data);
    double min_imr = 1e300;
    for (double r : stats.per_label_imr) min_imr = std::min(min_imr, r);

    std::vector<double> none_f, mlsol_f, emlsol_f;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        BenchmarkSpec single;  // 5 x 2 stratified CV, BR-kNN k = 5, MLSOL k = 5, ratio 0.3
        single.seed = seed;
        single.methods = {Method::None, Method::Mlsol};
        const auto a = run_benchmark(data, single);
        BenchmarkSpec ens = single;
        ens.methods = {Method::Mlsol};
        ens.ensemble = 5;
        const auto b = run_benchmark(data, ens);
        none_f.push_back(a.summaries[0].macro_f);
        mlsol_f.push_back(a.summaries[1].macro_f);
        emlsol_f.push_back(b.summaries[0].macro_f);
    }
    std::size_t wins = 0;
    for (std::size_t s = 0; s < 10; ++s) wins += mlsol_f[s] >= none_f[s];
    const double elapsed = seconds_since(t0);
    const bool a_ok = wins >= 8;
    const bool b_ok = mean(emlsol_f) >= mean(mlsol_f);
    const bool c_ok = variance(emlsol_f) <= variance(mlsol_f);
    return {min_imr >= 4.0 && a_ok && b_ok && c_ok && elapsed < 300.0,
            fmt("min IMR %.2f; (a) %zu/10 seeds; (b) mean F none %.4f mlsol %.4f emlsol %.4f; (c) var mlsol %.3g emlsol %.3g; %.1f s",
                min_imr, wins, mean(none_f), mean(mlsol_f), mean(emlsol_f), variance(mlsol_f), variance(emlsol_f),
                elapsed)};
}

// 9
Outcome complexity() {
    std::mt19937_64 rng(1009);
    auto time_for = [&](std::size_t n) {
        const auto data = testing::random_dataset(rng, n, 8, 4, 0.2);
        SamplerConfig config;
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            const auto t0 = Clock::now();
            const auto out = mlsol::mlsol(data, config);
            best = std::min(best, seconds_since(t0));
            if (out.size() != n + n * 3 / 10) return -1.0;
        }
        return best;
    };
    const double small = time_for(2000);
    const double large = time_for(4000);
    const double ratio = large / small;
    return {small > 0 && ratio >= 3.0 && ratio <= 6.0, fmt("n=2000 %.3f s, n=4000 %.3f s, ratio %.2f", small, large, ratio)};
}

// 10
Outcome protocol_hygiene() {
    const auto data = testing::subconcept_dataset(300, 77);
    std::size_t test_rows = 0, synthetic_rows = 0, leaks = 0, foreign = 0, unscored = 0;
    for (int variant = 0; variant < 2; ++variant) {
        BenchmarkSpec spec;
        spec.methods = {Method::None, Method::Mlsol, Method::Mlsmote};
        spec.repeats = 3;
        spec.seed = 5;
        if (variant) spec.ensemble = 3;
        const auto report = run_benchmark(data, spec);
        const auto splits = stratified_folds(data, spec.folds, spec.repeats, spec.seed);

        // rebuild each run's test set and synthetic origins from the log text alone
        std::map<std::string, std::set<std::size_t>> tests;
        std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> synth;
        std::istringstream log(protocol_log_csv(report, spec));
        std::string line;
        std::getline(log, line);
        while (std::getline(log, line)) {
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) f.push_back(cell);
            while (f.size() < 8) f.emplace_back();
            const std::string key = f[0] + "/" + f[1] + "/" + f[2];
            if (f[3] == "test") {
                tests[key].insert(std::stoul(f[4]));
                ++test_rows;
            } else {
                synth.push_back({key, {std::stoul(f[6]), std::stoul(f[7])}});
                ++synthetic_rows;
            }
        }
        for (const auto& run : report.runs) {
            const std::string key =
                method_label(run.method, spec.ensemble) + "/" + std::to_string(run.repeat) + "/" + std::to_string(run.fold);
            const auto expected = splits[run.repeat].test_indices(run.fold);
            foreign += tests[key] != std::set<std::size_t>(expected.begin(), expected.end());
            unscored += run.evaluated_rows != expected.size();
        }
        for (const auto& [key, origin] : synth) {
            const auto& test = tests[key];
            leaks += test.count(origin.first) + test.count(origin.second);
        }
    }
    return {leaks == 0 && foreign == 0 && unscored == 0 && synthetic_rows > 0,
            fmt("%zu test rows, %zu synthetic rows; %zu synthetic rows touching test instances, %zu test-set "
                "mismatches, %zu runs scoring resampled rows",
                test_rows, synthetic_rows, leaks, foreign, unscored)};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<std::size_t> allowed;
    for (int a = 1; a < argc; ++a) {
        if (std::string(argv[a]) == "--allow-fail" && a + 1 < argc) {
            allowed.insert(std::stoul(argv[++a]));
        } else {
            std::fprintf(stderr, "usage: %s [--allow-fail N]...\n", argv[0]);
            return 2;
        }
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"opposition matches brute-force recount", opposition_oracle},
        {"weight normalization", weight_normalization},
        {"instance type fixed point", type_fixed_point},
        {"theta table label assignment", theta_table},
        {"output size and determinism", count_and_determinism},
        {"threshold tuner optimality", threshold_optimality},
        {"metric oracles", metric_oracles},
        {"directional efficacy", directional_efficacy},
        {"complexity sanity", complexity},
        {"protocol hygiene", protocol_hygiene},
    };
    int failed = 0, tolerated = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        Outcome o;
        try {
            o = criteria[c].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const bool known = allowed.count(c + 1) > 0;
        if (!o.pass) (known ? tolerated : failed) += 1;
        std::printf("criterion %2zu %s  %s: %s\n", c + 1, o.pass ? "PASS" : (known ? "FAIL (allowed)" : "FAIL"),
                    criteria[c].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d failed, %d allowed failures\n", failed, tolerated);
    return failed;
}
