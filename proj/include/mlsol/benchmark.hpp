#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlsol/dataset.hpp"
#include "mlsol/metrics.hpp"
#include "mlsol/resampling.hpp"

namespace mlsol {

/// Cross-validated comparison of resampling methods. Defaults follow the usual protocol:
/// k = 5, ratio 0.3, 5 x 2-fold stratified CV, BR-kNN with 5 neighbours.
struct BenchmarkSpec {
    std::vector<Method> methods{Method::None, Method::Mlsol};
    std::optional<std::size_t> ensemble;  // M members when set
    std::size_t learner_k = 5;
    std::size_t k = 5;
    double ratio = 0.3;
    std::size_t folds = 2;
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
    bool min_max_scale = false;
    double single_threshold = 0.5;  // bipartition cut for non-ensemble runs
    unsigned workers = 1;

    void validate() const;
};

/// A synthetic training row traced back to the original dataset rows it came from.
struct ProvenanceRecord {
    std::size_t member = 0;
    std::size_t seed_instance = 0;
    std::size_t reference_instance = 0;
};

struct FoldRun {
    Method method = Method::None;
    std::size_t repeat = 0;
    std::size_t fold = 0;
    std::uint64_t stream_seed = 0;
    std::vector<std::size_t> train_instances;  // original dataset indices
    std::vector<std::size_t> test_instances;
    std::size_t synthetic_count = 0;  // summed over ensemble members
    std::size_t evaluated_rows = 0;
    std::vector<ProvenanceRecord> provenance;
    MetricsReport metrics;
};

struct MethodSummary {
    std::string label;
    Method method = Method::None;
    std::size_t runs = 0;
    double macro_f = 0.0;
    double macro_auc_roc = 0.0;
    double macro_aucpr = 0.0;
};

struct BenchmarkReport {
    std::vector<std::string> label_names;
    std::vector<FoldRun> runs;  // method-major, then repeat, then fold
    std::vector<MethodSummary> summaries;
};

/// "mlsol", or "emlsol" when an ensemble size is given.
std::string method_label(Method method, const std::optional<std::size_t>& ensemble);

/// Seed of the resampling stream for one (repeat, fold); shared by all methods.
std::uint64_t fold_stream_seed(std::uint64_t seed, std::size_t repeat, std::size_t fold);

/// Runs every method on every fold. Only the training part of a fold is resampled; the
/// test part is scored untouched. Results are independent of the worker count.
BenchmarkReport run_benchmark(const MultiLabelDataset& dataset, const BenchmarkSpec& spec);

std::string report_json(const BenchmarkReport& report, const BenchmarkSpec& spec);
/// One row per fold run plus one "avg" row per method.
std::string report_csv(const BenchmarkReport& report, const BenchmarkSpec& spec);
/// Every test instance and every synthetic training row of every run, by original index.
std::string protocol_log_csv(const BenchmarkReport& report, const BenchmarkSpec& spec);

}  // namespace mlsol
