#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mlsol/dataset.hpp"
#include "mlsol/matrix.hpp"

namespace mlsol {

struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact k nearest neighbours of every instance of one dataset, self excluded.
/// Rows are ordered by (distance, index) ascending.
class NeighborIndex {
public:
    NeighborIndex(std::size_t k, Matrix<std::size_t> ids, Matrix<double> distances);

    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return ids_.rows(); }
    std::span<const std::size_t> neighbors(std::size_t i) const { return ids_.row(i); }
    std::span<const double> distances(std::size_t i) const { return dists_.row(i); }

    friend bool operator==(const NeighborIndex&, const NeighborIndex&) = default;

private:
    std::size_t k_;
    Matrix<std::size_t> ids_;
    Matrix<double> dists_;
};

double euclidean(std::span<const double> a, std::span<const double> b);

/// Brute-force O(n^2 d) construction. Requires 1 <= k < n. Rows may be split across
/// `workers` threads; the result does not depend on the worker count.
NeighborIndex build_knn(const Matrix<double>& features, std::size_t k, unsigned workers = 1);
NeighborIndex build_knn(const MultiLabelDataset& dataset, std::size_t k, unsigned workers = 1);

/// k nearest training instances to an arbitrary point. Requires 1 <= k <= n.
std::vector<Neighbor> knn_of_point(const Matrix<double>& features, std::span<const double> x, std::size_t k);
std::vector<Neighbor> knn_of_point(const MultiLabelDataset& dataset, std::span<const double> x, std::size_t k);

}  // namespace mlsol
