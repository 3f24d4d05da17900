#include "mlsol/mlsmote.hpp"

#include <string>

#include "mlsol/error.hpp"
#include "mlsol/random.hpp"

namespace mlsol {

std::vector<std::size_t> minority_labels(const MultiLabelDataset& dataset) {
    const auto stats = dataset_stats(dataset);
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < stats.per_label_imr.size(); ++j) {
        if (stats.per_label_imr[j] > stats.mean_imbalance_ratio) out.push_back(j);
    }
    return out;
}

std::vector<LabelBit> ranking_labels(const MultiLabelDataset& dataset, std::size_t seed,
                                     std::span<const std::size_t> neighbors) {
    const std::size_t q = dataset.num_labels();
    std::vector<std::size_t> counts(q, 0);
    auto add = [&](std::size_t i) {
        const auto y = dataset.y(i);
        for (std::size_t j = 0; j < q; ++j) counts[j] += y[j];
    };
    add(seed);
    for (auto m : neighbors) add(m);
    // count > (k+1)/2  <=>  2 * count > k + 1
    const std::size_t group = neighbors.size() + 1;
    std::vector<LabelBit> out(q);
    for (std::size_t j = 0; j < q; ++j) out[j] = 2 * counts[j] > group ? 1 : 0;
    return out;
}

MlsmoteRun run_mlsmote(const MultiLabelDataset& dataset, const MlsmoteConfig& config) {
    const std::size_t n = dataset.size();
    if (config.k < 1) throw Error("k must be at least 1");
    if (config.k >= n) {
        throw Error("k (" + std::to_string(config.k) + ") must be smaller than the instance count (" + std::to_string(n) + ")");
    }
    const auto labels = minority_labels(dataset);
    if (labels.empty()) return {dataset, {}};

    const auto index = build_knn(dataset, config.k);
    Matrix<double> x = dataset.features();
    Matrix<LabelBit> y = dataset.labels();
    std::vector<SyntheticOrigin> origins;
    RandomStream rng(config.seed);
    std::vector<double> synthetic(dataset.num_features());
    for (std::size_t j : labels) {
        const LabelBit minority = minority_class(dataset, j);
        for (std::size_t s = 0; s < n; ++s) {
            if (dataset.labels()(s, j) != minority) continue;
            const auto neighbors = index.neighbors(s);
            const std::size_t r = neighbors[rng.index(neighbors.size())];
            const auto xs = dataset.x(s);
            const auto xr = dataset.x(r);
            for (std::size_t f = 0; f < xs.size(); ++f) synthetic[f] = xs[f] + rng.uniform() * (xr[f] - xs[f]);
            x.push_row(synthetic);
            y.push_row(ranking_labels(dataset, s, neighbors));
            origins.push_back({s, r});
        }
    }
    return {MultiLabelDataset(std::move(x), std::move(y), dataset.feature_names(), dataset.label_names()),
            std::move(origins)};
}

MultiLabelDataset mlsmote(const MultiLabelDataset& dataset, const MlsmoteConfig& config) {
    return run_mlsmote(dataset, config).dataset;
}

}  // namespace mlsol
