#include "mlsol/mlsol_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlsol/error.hpp"
#include "mlsol/neighbors.hpp"

namespace mlsol {

double ThetaTable::operator[](InstanceType type) const {
    switch (type) {
        case InstanceType::Safe: return safe;
        case InstanceType::Borderline: return borderline;
        case InstanceType::Rare: return rare;
        case InstanceType::Outlier: return outlier;
        case InstanceType::Majority: break;
    }
    throw Error("no theta for majority cells");
}

void SamplerConfig::validate() const {
    if (k < 1) throw Error("k must be at least 1");
    if (!(gen_ratio > 0.0) || !std::isfinite(gen_ratio)) throw Error("generation ratio must be positive");
}

GenerationContext make_context(double seed_distance, double reference_distance) {
    const double total = seed_distance + reference_distance;
    return {total > 0.0 ? seed_distance / total : 0.5, seed_distance, reference_distance};
}

LabelDecision assign_label(LabelBit seed_value, InstanceType seed_type, LabelBit ref_value, InstanceType ref_type,
                           double cd, const ThetaTable& theta) {
    if (seed_value == ref_value) return {seed_value, LabelSource::Agreement};
    if (seed_type == InstanceType::Majority) {
        // reference holds the minority value here
        const bool minority_wins = 1.0 - cd <= theta[ref_type];
        return minority_wins ? LabelDecision{ref_value, LabelSource::Reference}
                             : LabelDecision{seed_value, LabelSource::Seed};
    }
    const bool minority_wins = cd <= theta[seed_type];
    return minority_wins ? LabelDecision{seed_value, LabelSource::Seed}
                         : LabelDecision{ref_value, LabelSource::Reference};
}

SyntheticInstance generate_instance(const InstanceView& seed, const InstanceView& reference, const ThetaTable& theta,
                                    RandomStream& rng) {
    const std::size_t d = seed.features.size();
    const std::size_t q = seed.labels.size();
    if (reference.features.size() != d || reference.labels.size() != q || seed.types.size() != q ||
        reference.types.size() != q) {
        throw Error("seed and reference instances differ in shape");
    }
    SyntheticInstance out;
    out.features.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        out.features[j] = seed.features[j] + rng.uniform() * (reference.features[j] - seed.features[j]);
    }
    out.context = make_context(euclidean(out.features, seed.features), euclidean(out.features, reference.features));
    out.labels.resize(q);
    out.sources.resize(q);
    for (std::size_t j = 0; j < q; ++j) {
        const auto decision = assign_label(seed.labels[j], seed.types[j], reference.labels[j], reference.types[j],
                                           out.context.cd, theta);
        out.labels[j] = decision.value;
        out.sources[j] = decision.source;
    }
    return out;
}

SeedSelector::SeedSelector(std::span<const double> weights) {
    cumulative_.reserve(weights.size());
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error("seed weights must be finite and nonnegative");
        total += w;
        cumulative_.push_back(total);
    }
    if (!(total > 0.0)) throw Error("no eligible seed instances");
}

std::size_t SeedSelector::operator()(RandomStream& rng) const {
    const double target = rng.uniform() * cumulative_.back();
    // first index whose cumulative weight exceeds target; zero-weight entries never qualify
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) --it;  // target rounding up to the total
    auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    while (idx > 0 && cumulative_[idx] == cumulative_[idx - 1]) --idx;
    return idx;
}

std::size_t select_seed(std::span<const double> weights, RandomStream& rng) {
    return SeedSelector(weights)(rng);
}

std::size_t generation_count(std::size_t n, double ratio) {
    // relative slack absorbs representation error such as 0.29 * 100 = 28.999...
    const double exact = static_cast<double>(n) * ratio;
    return static_cast<std::size_t>(std::floor(exact * (1.0 + 1e-12)));
}

MlsolRun run_mlsol(const MultiLabelDataset& dataset, const SamplerConfig& config) {
    config.validate();
    const std::size_t n = dataset.size();
    if (config.k >= n) {
        throw Error("k (" + std::to_string(config.k) + ") must be smaller than the instance count (" + std::to_string(n) + ")");
    }
    const std::size_t count = generation_count(n, config.gen_ratio);
    if (count == 0) return {dataset, {}};

    const auto index = build_knn(dataset, config.k);
    const auto c = compute_opposition(dataset, index);
    const auto w = compute_weights(c, dataset);
    const auto types = init_types(c, dataset, index);
    const SeedSelector pick_seed(w);

    Matrix<double> x = dataset.features();
    Matrix<LabelBit> y = dataset.labels();
    std::vector<TraceRecord> trace;
    trace.reserve(count);
    RandomStream rng(config.seed);
    auto view = [&](std::size_t i) { return InstanceView{dataset.x(i), dataset.y(i), types.row(i)}; };
    for (std::size_t g = 0; g < count; ++g) {
        const std::size_t s = pick_seed(rng);
        const std::size_t r = index.neighbors(s)[rng.index(config.k)];
        auto synthetic = generate_instance(view(s), view(r), config.theta, rng);
        x.push_row(synthetic.features);
        y.push_row(synthetic.labels);
        trace.push_back({s, r, synthetic.context, std::move(synthetic.sources)});
    }
    return {MultiLabelDataset(std::move(x), std::move(y), dataset.feature_names(), dataset.label_names()),
            std::move(trace)};
}

MultiLabelDataset mlsol(const MultiLabelDataset& dataset, const SamplerConfig& config) {
    return run_mlsol(dataset, config).dataset;
}

std::vector<TraceRecord> resample_trace(const MultiLabelDataset& dataset, const SamplerConfig& config) {
    return run_mlsol(dataset, config).trace;
}

}  // namespace mlsol
