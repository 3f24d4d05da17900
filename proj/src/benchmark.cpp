#include "mlsol/benchmark.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mlsol/ensemble.hpp"
#include "mlsol/error.hpp"
#include "mlsol/learners.hpp"
#include "mlsol/random.hpp"

namespace mlsol {

void BenchmarkSpec::validate() const {
    if (methods.empty()) throw Error("at least one method is required");
    if (folds < 2) throw Error("folds must be at least 2");
    if (repeats < 1) throw Error("repeats must be at least 1");
    if (ensemble && *ensemble < 1) throw Error("ensemble size must be at least 1");
    if (learner_k < 1) throw Error("learner k must be at least 1");
    if (k < 1) throw Error("k must be at least 1");
    if (!(ratio > 0.0)) throw Error("ratio must be positive");
}

std::string method_label(Method method, const std::optional<std::size_t>& ensemble) {
    return (ensemble ? "e" : "") + std::string(to_string(method));
}

std::uint64_t fold_stream_seed(std::uint64_t seed, std::size_t repeat, std::size_t fold) {
    return derive_seed(seed, repeat + 1, fold + 1);
}

namespace {

struct Job {
    Method method;
    std::size_t repeat;
    std::size_t fold;
};

FoldRun run_fold(const MultiLabelDataset& dataset, const BenchmarkSpec& spec, const FoldAssignment& split,
                 const Job& job) {
    FoldRun run;
    run.method = job.method;
    run.repeat = job.repeat;
    run.fold = job.fold;
    run.stream_seed = fold_stream_seed(spec.seed, job.repeat, job.fold);
    run.train_instances = split.train_indices(job.fold);
    run.test_instances = split.test_indices(job.fold);

    auto train = select_rows(dataset, run.train_instances);
    auto test = select_rows(dataset, run.test_instances);
    if (spec.min_max_scale) {
        const auto scaler = MinMaxScaler::fit(train);
        train = scaler.transform(train);
        test = scaler.transform(test);
    }

    const auto sampler = make_sampler(job.method, spec.k, spec.ratio);
    const auto learner = br_knn_learner(spec.learner_k);
    auto record = [&](std::size_t member, const Resampled& resampled) {
        run.synthetic_count += resampled.origins.size();
        for (const auto& o : resampled.origins) {
            run.provenance.push_back({member, run.train_instances.at(o.seed), run.train_instances.at(o.reference)});
        }
    };

    const std::size_t n = test.size();
    const std::size_t q = test.num_labels();
    Matrix<double> scores(n, q);
    Matrix<LabelBit> preds(n, q);
    if (spec.ensemble) {
        const auto model = train_emls(train, sampler, learner, *spec.ensemble, run.stream_seed, record);
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = model.predict(test.x(i));
            std::copy(p.scores.begin(), p.scores.end(), scores.row(i).begin());
            std::copy(p.bits.begin(), p.bits.end(), preds.row(i).begin());
        }
    } else {
        const auto resampled = sampler(train, run.stream_seed);
        record(0, resampled);
        const auto model = learner(resampled.dataset);
        const std::vector<double> thresholds(q, spec.single_threshold);
        for (std::size_t i = 0; i < n; ++i) {
            const auto s = model->predict_scores(test.x(i));
            const auto b = bipartition(s, thresholds);
            std::copy(s.begin(), s.end(), scores.row(i).begin());
            std::copy(b.begin(), b.end(), preds.row(i).begin());
        }
    }
    run.evaluated_rows = n;
    run.metrics = evaluate(scores, preds, test.labels());
    return run;
}

double mean_finite(const std::vector<double>& values) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        if (std::isfinite(v)) {
            sum += v;
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "";
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

BenchmarkReport run_benchmark(const MultiLabelDataset& dataset, const BenchmarkSpec& spec) {
    spec.validate();
    const auto splits = stratified_folds(dataset, spec.folds, spec.repeats, spec.seed);

    std::vector<Job> jobs;
    for (auto method : spec.methods) {
        for (std::size_t r = 0; r < spec.repeats; ++r) {
            for (std::size_t f = 0; f < spec.folds; ++f) jobs.push_back({method, r, f});
        }
    }

    BenchmarkReport report;
    report.label_names = dataset.label_names();
    report.runs.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            try {
                report.runs[j] = run_fold(dataset, spec, splits[jobs[j].repeat], jobs[j]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(spec.workers, static_cast<unsigned>(jobs.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (auto method : spec.methods) {
        std::vector<double> f, roc, pr;
        for (const auto& run : report.runs) {
            if (run.method != method) continue;
            f.push_back(run.metrics.macro_f);
            roc.push_back(run.metrics.macro_auc_roc);
            pr.push_back(run.metrics.macro_aucpr);
        }
        report.summaries.push_back(
            {method_label(method, spec.ensemble), method, f.size(), mean_finite(f), mean_finite(roc), mean_finite(pr)});
    }
    return report;
}

std::string report_json(const BenchmarkReport& report, const BenchmarkSpec& spec) {
    nlohmann::json j;
    auto& s = j["spec"];
    for (auto m : spec.methods) s["methods"].push_back(std::string(to_string(m)));
    s["ensemble"] = spec.ensemble ? nlohmann::json(*spec.ensemble) : nlohmann::json(nullptr);
    s["learner"] = "br-knn";
    s["learner_k"] = spec.learner_k;
    s["k"] = spec.k;
    s["ratio"] = spec.ratio;
    s["folds"] = spec.folds;
    s["repeats"] = spec.repeats;
    s["seed"] = spec.seed;
    s["min_max_scale"] = spec.min_max_scale;
    s["single_threshold"] = spec.single_threshold;

    auto& runs = j["runs"] = nlohmann::json::array();
    for (const auto& run : report.runs) {
        runs.push_back({{"method", method_label(run.method, spec.ensemble)},
                        {"repeat", run.repeat},
                        {"fold", run.fold},
                        {"stream_seed", run.stream_seed},
                        {"train_size", run.train_instances.size()},
                        {"test_size", run.test_instances.size()},
                        {"evaluated_rows", run.evaluated_rows},
                        {"synthetic", run.synthetic_count},
                        {"metrics", nlohmann::json::parse(to_json(run.metrics, report.label_names))}});
    }
    auto& avg = j["averages"] = nlohmann::json::array();
    for (const auto& m : report.summaries) {
        avg.push_back({{"method", m.label},
                       {"runs", m.runs},
                       {"macro_f", finite_or_null(m.macro_f)},
                       {"macro_auc_roc", finite_or_null(m.macro_auc_roc)},
                       {"macro_aucpr", finite_or_null(m.macro_aucpr)}});
    }
    return j.dump(2) + "\n";
}

std::string report_csv(const BenchmarkReport& report, const BenchmarkSpec& spec) {
    std::ostringstream out;
    out << "method,repeat,fold,stream_seed,train_size,test_size,synthetic,macro_f,macro_auc_roc,macro_aucpr,skipped_labels\n";
    for (const auto& run : report.runs) {
        std::string skipped;
        for (auto l : run.metrics.skipped_labels) skipped += (skipped.empty() ? "" : ";") + std::to_string(l);
        out << method_label(run.method, spec.ensemble) << ',' << run.repeat << ',' << run.fold << ','
            << run.stream_seed << ',' << run.train_instances.size() << ',' << run.test_instances.size() << ','
            << run.synthetic_count << ',' << csv_number(run.metrics.macro_f) << ','
            << csv_number(run.metrics.macro_auc_roc) << ',' << csv_number(run.metrics.macro_aucpr) << ','
            << skipped << '\n';
    }
    for (const auto& m : report.summaries) {
        out << m.label << ",avg,avg,,,,," << csv_number(m.macro_f) << ',' << csv_number(m.macro_auc_roc) << ','
            << csv_number(m.macro_aucpr) << ",\n";
    }
    return out.str();
}

std::string protocol_log_csv(const BenchmarkReport& report, const BenchmarkSpec& spec) {
    std::ostringstream out;
    out << "method,repeat,fold,role,instance,member,seed_instance,reference_instance\n";
    for (const auto& run : report.runs) {
        const auto label = method_label(run.method, spec.ensemble);
        for (auto i : run.test_instances) {
            out << label << ',' << run.repeat << ',' << run.fold << ",test," << i << ",,,\n";
        }
        for (const auto& p : run.provenance) {
            out << label << ',' << run.repeat << ',' << run.fold << ",synthetic,," << p.member << ','
                << p.seed_instance << ',' << p.reference_instance << '\n';
        }
    }
    return out.str();
}

}  // namespace mlsol
