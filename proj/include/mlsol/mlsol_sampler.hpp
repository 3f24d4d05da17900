#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlsol/dataset.hpp"
#include "mlsol/local_stats.hpp"
#include "mlsol/random.hpp"

namespace mlsol {

/// Cut-points on cd per seed type. A synthetic label copies the minority instance when
/// cd <= theta. Rare is above 1 (always minority); Outlier is below 0 (never minority).
struct ThetaTable {
    double safe = 0.5;
    double borderline = 0.75;
    double rare = 1.0 + 1e-5;
    double outlier = 0.0 - 1e-5;

    double operator[](InstanceType type) const;
};

struct SamplerConfig {
    std::size_t k = 5;
    double gen_ratio = 0.3;
    std::uint64_t seed = 0;
    ThetaTable theta;

    void validate() const;
};

/// Where the synthetic point sits between seed and reference.
struct GenerationContext {
    double cd = 0.5;
    double seed_distance = 0.0;
    double reference_distance = 0.0;
};

/// cd = d_s / (d_s + d_r); 0.5 when the two instances coincide.
GenerationContext make_context(double seed_distance, double reference_distance);

enum class LabelSource : std::uint8_t { Agreement, Seed, Reference };

struct LabelDecision {
    LabelBit value = 0;
    LabelSource source = LabelSource::Agreement;
};

/// Label assignment for one label. When the two values differ the minority side plays the
/// seed: if the seed holds the majority class the roles swap for this label only and cd
/// becomes 1 - cd. The minority side's type selects theta.
LabelDecision assign_label(LabelBit seed_value, InstanceType seed_type, LabelBit ref_value, InstanceType ref_type,
                           double cd, const ThetaTable& theta);

/// Read-only view of one instance together with its type row.
struct InstanceView {
    std::span<const double> features;
    std::span<const LabelBit> labels;
    std::span<const InstanceType> types;
};

struct SyntheticInstance {
    std::vector<double> features;
    std::vector<LabelBit> labels;
    GenerationContext context;
    std::vector<LabelSource> sources;
};

/// Interpolates features with one independent uniform draw per feature, then assigns labels.
SyntheticInstance generate_instance(const InstanceView& seed, const InstanceView& reference, const ThetaTable& theta,
                                    RandomStream& rng);

/// Draws an index with probability proportional to its weight (one uniform draw).
std::size_t select_seed(std::span<const double> weights, RandomStream& rng);

/// Cumulative-weight table for repeated seed draws; same draw semantics as select_seed.
class SeedSelector {
public:
    explicit SeedSelector(std::span<const double> weights);
    std::size_t operator()(RandomStream& rng) const;

private:
    std::vector<double> cumulative_;
};

/// floor(n * ratio)
std::size_t generation_count(std::size_t n, double ratio);

struct TraceRecord {
    std::size_t seed = 0;
    std::size_t reference = 0;
    GenerationContext context;
    std::vector<LabelSource> sources;
};

struct MlsolRun {
    MultiLabelDataset dataset;
    std::vector<TraceRecord> trace;
};

/// Full MLSOL pass. The output holds the original rows unchanged as a prefix, followed by
/// floor(n * gen_ratio) synthetic rows. Seeds are drawn from the original rows only.
///
/// Draw order per synthetic instance: seed (1 draw), reference among the seed's
/// neighbours (1 draw), then one draw per feature.
MlsolRun run_mlsol(const MultiLabelDataset& dataset, const SamplerConfig& config);

MultiLabelDataset mlsol(const MultiLabelDataset& dataset, const SamplerConfig& config);

std::vector<TraceRecord> resample_trace(const MultiLabelDataset& dataset, const SamplerConfig& config);

}  // namespace mlsol
