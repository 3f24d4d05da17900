#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mlsol/matrix.hpp"

namespace mlsol {

using LabelBit = std::uint8_t;

/// Dense multi-label dataset: n x d finite features and an n x q binary label matrix.
///
/// Instances are immutable once constructed; the constructor enforces the shape and value
/// invariants (n >= 1, matching row counts, finite features, 0/1 labels, one name per column).
class MultiLabelDataset {
public:
    MultiLabelDataset(Matrix<double> features, Matrix<LabelBit> labels, std::vector<std::string> feature_names,
                      std::vector<std::string> label_names);

    std::size_t size() const noexcept { return features_.rows(); }
    std::size_t num_features() const noexcept { return features_.cols(); }
    std::size_t num_labels() const noexcept { return labels_.cols(); }

    const Matrix<double>& features() const noexcept { return features_; }
    const Matrix<LabelBit>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::vector<std::string>& label_names() const noexcept { return label_names_; }

    std::span<const double> x(std::size_t i) const { return features_.row(i); }
    std::span<const LabelBit> y(std::size_t i) const { return labels_.row(i); }

    friend bool operator==(const MultiLabelDataset&, const MultiLabelDataset&) = default;

private:
    Matrix<double> features_;
    Matrix<LabelBit> labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> label_names_;
};

/// Label cardinality and imbalance ratios (majority count / minority count).
struct DatasetStats {
    double cardinality = 0.0;
    double mean_imbalance_ratio = 0.0;
    std::vector<double> per_label_imr;
};

/// One repetition of a k-fold split: fold_of_instance[i] is the fold of instance i.
struct FoldAssignment {
    std::vector<std::size_t> fold_of_instance;
    std::size_t repeat_index = 0;
    std::size_t folds = 0;

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Reads a Mulan dataset: an ARFF file plus the XML file naming its label attributes.
/// Dense and sparse ARFF rows are accepted. Nominal feature attributes are encoded by the
/// position of the value in their declaration. Throws ParseError on malformed input.
MultiLabelDataset load_mulan(const std::filesystem::path& arff_path, const std::filesystem::path& xml_path);

/// Reads a feature CSV and a label CSV, each with a header row.
MultiLabelDataset load_csv(const std::filesystem::path& features_path, const std::filesystem::path& labels_path);

/// Writes features and labels as two CSV files. Reals use the shortest round-trip representation,
/// so load_csv reproduces the dataset bit for bit.
void write_csv(const MultiLabelDataset& dataset, const std::filesystem::path& features_path,
               const std::filesystem::path& labels_path);

/// Writes a dense ARFF file (labels as nominal {0,1}) and the matching Mulan label XML.
void write_mulan(const MultiLabelDataset& dataset, const std::filesystem::path& arff_path,
                 const std::filesystem::path& xml_path, const std::string& relation = "dataset");

/// Less frequent bit of label column j; 1 on a tie.
LabelBit minority_class(const MultiLabelDataset& dataset, std::size_t j);

/// minority_class for every label.
std::vector<LabelBit> minority_classes(const MultiLabelDataset& dataset);

/// Number of instances carrying the minority class of label j.
std::size_t minority_count(const MultiLabelDataset& dataset, std::size_t j);

/// Drops label columns with at most one minority-class instance. Throws if none remain.
MultiLabelDataset filter_rare_labels(const MultiLabelDataset& dataset);

/// Iterative multi-label stratification, repeated `repeats` times with independent shuffles.
///
/// Labels are processed scarcest first. Each instance carrying the current label goes to the
/// fold that still wants the most positives of that label; ties go to the fold with the most
/// remaining slots, then to a seeded random pick. Instances without positive labels fill the
/// remaining slots last.
std::vector<FoldAssignment> stratified_folds(const MultiLabelDataset& dataset, std::size_t folds,
                                             std::size_t repeats, std::uint64_t seed);

DatasetStats dataset_stats(const MultiLabelDataset& dataset);

/// Copy of the given rows, in the given order.
MultiLabelDataset select_rows(const MultiLabelDataset& dataset, std::span<const std::size_t> rows);

/// Per-feature affine map onto [0,1] fitted on one dataset and applicable to others.
class MinMaxScaler {
public:
    static MinMaxScaler fit(const MultiLabelDataset& dataset);

    MultiLabelDataset transform(const MultiLabelDataset& dataset) const;
    void transform_in_place(std::span<double> x) const;

private:
    std::vector<double> min_;
    std::vector<double> range_;
};

}  // namespace mlsol
