#include "mlsol/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "mlsol/error.hpp"

namespace mlsol {

namespace {

bool closer(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

// Keeps the k smallest of `all` under `closer`, sorted.
void keep_nearest(std::vector<Neighbor>& all, std::size_t k) {
    if (k < all.size()) {
        std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
        all.resize(k);
    }
    std::sort(all.begin(), all.end(), closer);
}

}  // namespace

NeighborIndex::NeighborIndex(std::size_t k, Matrix<std::size_t> ids, Matrix<double> distances)
    : k_(k), ids_(std::move(ids)), dists_(std::move(distances)) {
    if (ids_.cols() != k_ || dists_.cols() != k_ || ids_.rows() != dists_.rows()) {
        throw Error("neighbor index shape mismatch");
    }
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

NeighborIndex build_knn(const Matrix<double>& features, std::size_t k, unsigned workers) {
    const std::size_t n = features.rows();
    if (k == 0) throw Error("k must be at least 1");
    if (k >= n) throw Error("k (" + std::to_string(k) + ") must be smaller than the instance count (" + std::to_string(n) + ")");

    Matrix<std::size_t> ids(n, k);
    Matrix<double> dists(n, k);
    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<Neighbor> all;
        all.reserve(n - 1);
        for (std::size_t i = begin; i < end; ++i) {
            all.clear();
            const auto xi = features.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) all.push_back({j, euclidean(xi, features.row(j))});
            }
            keep_nearest(all, k);
            for (std::size_t c = 0; c < k; ++c) {
                ids(i, c) = all[c].index;
                dists(i, c) = all[c].distance;
            }
        }
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            pool.emplace_back(work, begin, std::min(n, begin + chunk));
        }
    }
    return NeighborIndex(k, std::move(ids), std::move(dists));
}

NeighborIndex build_knn(const MultiLabelDataset& dataset, std::size_t k, unsigned workers) {
    return build_knn(dataset.features(), k, workers);
}

std::vector<Neighbor> knn_of_point(const Matrix<double>& features, std::span<const double> x, std::size_t k) {
    const std::size_t n = features.rows();
    if (k == 0) throw Error("k must be at least 1");
    if (k > n) throw Error("k (" + std::to_string(k) + ") exceeds the instance count (" + std::to_string(n) + ")");
    std::vector<Neighbor> all;
    all.reserve(n);
    for (std::size_t j = 0; j < n; ++j) all.push_back({j, euclidean(x, features.row(j))});
    keep_nearest(all, k);
    return all;
}

std::vector<Neighbor> knn_of_point(const MultiLabelDataset& dataset, std::span<const double> x, std::size_t k) {
    return knn_of_point(dataset.features(), x, k);
}

}  // namespace mlsol
