#include "mlsol/local_stats.hpp"

#include "mlsol/error.hpp"

namespace mlsol {

std::string_view to_string(InstanceType type) {
    switch (type) {
        case InstanceType::Safe: return "SF";
        case InstanceType::Borderline: return "BD";
        case InstanceType::Rare: return "RR";
        case InstanceType::Outlier: return "OT";
        case InstanceType::Majority: return "MJ";
    }
    return "?";
}

OppositionMatrix compute_opposition(const MultiLabelDataset& dataset, const NeighborIndex& index) {
    const std::size_t n = dataset.size();
    const std::size_t q = dataset.num_labels();
    if (index.size() != n) throw Error("neighbor index was built over a different dataset");
    const auto& y = dataset.labels();
    const double k = static_cast<double>(index.k());

    OppositionMatrix c{index.k(), Matrix<double>(n, q)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            std::size_t opposite = 0;
            for (std::size_t m : index.neighbors(i)) opposite += y(m, j) != y(i, j);
            c.values(i, j) = static_cast<double>(opposite) / k;
        }
    }
    return c;
}

namespace {

void check_shape(const OppositionMatrix& c, const MultiLabelDataset& dataset) {
    if (c.values.rows() != dataset.size() || c.values.cols() != dataset.num_labels()) {
        throw Error("opposition matrix shape does not match dataset");
    }
}

}  // namespace

WeightVector naive_weights(const OppositionMatrix& c, const MultiLabelDataset& dataset) {
    check_shape(c, dataset);
    const auto minority = minority_classes(dataset);
    WeightVector w(dataset.size(), 0.0);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (std::size_t j = 0; j < dataset.num_labels(); ++j) {
            if (dataset.labels()(i, j) == minority[j]) w[i] += c(i, j);
        }
    }
    return w;
}

Matrix<double> label_contributions(const OppositionMatrix& c, const MultiLabelDataset& dataset) {
    check_shape(c, dataset);
    const std::size_t n = dataset.size();
    const std::size_t q = dataset.num_labels();
    const auto minority = minority_classes(dataset);
    Matrix<double> share(n, q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (dataset.labels()(i, j) == minority[j] && c(i, j) < 1.0) z += c(i, j);
        }
        if (z == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (dataset.labels()(i, j) == minority[j] && c(i, j) < 1.0) share(i, j) = c(i, j) / z;
        }
    }
    return share;
}

WeightVector compute_weights(const OppositionMatrix& c, const MultiLabelDataset& dataset) {
    const auto share = label_contributions(c, dataset);
    WeightVector w(dataset.size(), 0.0);
    for (std::size_t i = 0; i < share.rows(); ++i) {
        for (double v : share.row(i)) w[i] += v;
    }
    return w;
}

TypeMatrix provisional_types(const OppositionMatrix& c, const MultiLabelDataset& dataset) {
    check_shape(c, dataset);
    const auto minority = minority_classes(dataset);
    TypeMatrix t(dataset.size(), dataset.num_labels(), InstanceType::Majority);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (std::size_t j = 0; j < dataset.num_labels(); ++j) {
            if (dataset.labels()(i, j) != minority[j]) continue;
            const double v = c(i, j);
            if (v < 0.3) {
                t(i, j) = InstanceType::Safe;
            } else if (v < 0.7) {
                t(i, j) = InstanceType::Borderline;
            } else if (v < 1.0) {
                t(i, j) = InstanceType::Rare;
            } else {
                t(i, j) = InstanceType::Outlier;
            }
        }
    }
    return t;
}

TypeMatrix reexamine_rare(const TypeMatrix& types, const NeighborIndex& index) {
    TypeMatrix next = types;
    for (std::size_t i = 0; i < types.rows(); ++i) {
        for (std::size_t j = 0; j < types.cols(); ++j) {
            if (types(i, j) != InstanceType::Rare) continue;
            for (std::size_t m : index.neighbors(i)) {
                const auto t = types(m, j);
                if (t == InstanceType::Safe || t == InstanceType::Borderline) {
                    next(i, j) = InstanceType::Borderline;
                    break;
                }
            }
        }
    }
    return next;
}

TypeMatrix init_types(const OppositionMatrix& c, const MultiLabelDataset& dataset, const NeighborIndex& index) {
    if (index.size() != dataset.size()) throw Error("neighbor index was built over a different dataset");
    TypeMatrix t = provisional_types(c, dataset);
    // Each pass only turns Rare into Borderline, so this terminates within n*q passes.
    while (true) {
        TypeMatrix next = reexamine_rare(t, index);
        if (next == t) return t;
        t = std::move(next);
    }
}

std::vector<std::array<std::size_t, 5>> type_histogram(const TypeMatrix& types) {
    std::vector<std::array<std::size_t, 5>> hist(types.cols(), std::array<std::size_t, 5>{});
    for (std::size_t i = 0; i < types.rows(); ++i) {
        for (std::size_t j = 0; j < types.cols(); ++j) ++hist[j][static_cast<std::size_t>(types(i, j))];
    }
    return hist;
}

}  // namespace mlsol
