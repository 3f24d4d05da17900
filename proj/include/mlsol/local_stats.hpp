#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mlsol/dataset.hpp"
#include "mlsol/matrix.hpp"
#include "mlsol/neighbors.hpp"

namespace mlsol {

/// Proportion of each instance's k neighbours holding the opposite value of each label.
/// Every cell is a multiple of 1/k in [0, 1].
struct OppositionMatrix {
    std::size_t k = 0;
    Matrix<double> values;

    double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
};

/// Seed-selection weight of every instance.
using WeightVector = std::vector<double>;

/// Local type of one (instance, label) cell. Minority cells are Safe, Borderline, Rare or
/// Outlier depending on how hostile their neighbourhood is; majority cells are Majority.
enum class InstanceType : std::uint8_t { Safe, Borderline, Rare, Outlier, Majority };

inline constexpr std::array<InstanceType, 5> kAllInstanceTypes = {
    InstanceType::Safe, InstanceType::Borderline, InstanceType::Rare, InstanceType::Outlier, InstanceType::Majority};

std::string_view to_string(InstanceType type);

using TypeMatrix = Matrix<InstanceType>;

OppositionMatrix compute_opposition(const MultiLabelDataset& dataset, const NeighborIndex& index);

/// Plain sum of opposition values over the instance's minority cells. Outliers included.
WeightVector naive_weights(const OppositionMatrix& c, const MultiLabelDataset& dataset);

/// Per-label share of each non-outlier minority cell: C_ij / Z_j, where Z_j sums C over the
/// label's non-outlier minority cells. Labels with Z_j = 0 contribute nothing.
Matrix<double> label_contributions(const OppositionMatrix& c, const MultiLabelDataset& dataset);

/// Row sums of label_contributions. Rare labels get a larger share per instance.
WeightVector compute_weights(const OppositionMatrix& c, const MultiLabelDataset& dataset);

/// Provisional types from the opposition thresholds, before rare cells are re-examined.
TypeMatrix provisional_types(const OppositionMatrix& c, const MultiLabelDataset& dataset);

/// One synchronized re-examination pass: every Rare cell with a Safe or Borderline
/// neighbour on the same label becomes Borderline. Reads `types`, returns the next generation.
TypeMatrix reexamine_rare(const TypeMatrix& types, const NeighborIndex& index);

/// Provisional types followed by re-examination passes until nothing changes.
TypeMatrix init_types(const OppositionMatrix& c, const MultiLabelDataset& dataset, const NeighborIndex& index);

/// Per-label count of each type; result[j][type].
std::vector<std::array<std::size_t, 5>> type_histogram(const TypeMatrix& types);

}  // namespace mlsol
