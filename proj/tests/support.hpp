// Shared fixtures and independent reference implementations for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mlsol/dataset.hpp"

namespace testing {

using mlsol::LabelBit;
using mlsol::Matrix;
using mlsol::MultiLabelDataset;

inline MultiLabelDataset make_dataset(const std::vector<std::vector<double>>& x, const std::vector<std::vector<int>>& y) {
    const std::size_t n = x.size();
    const std::size_t d = n ? x[0].size() : 0;
    const std::size_t q = n ? y[0].size() : 0;
    Matrix<double> fx(n, d);
    Matrix<LabelBit> fy(n, q);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) fx(i, c) = x[i][c];
        for (std::size_t c = 0; c < q; ++c) fy(i, c) = static_cast<LabelBit>(y[i][c]);
    }
    std::vector<std::string> fn, ln;
    for (std::size_t c = 0; c < d; ++c) fn.push_back("f" + std::to_string(c));
    for (std::size_t c = 0; c < q; ++c) ln.push_back("l" + std::to_string(c));
    return MultiLabelDataset(std::move(fx), std::move(fy), std::move(fn), std::move(ln));
}

/// Uniform features in [0,1); label j positive with probability rates[j]. Every label is
/// forced to hold at least `min_each` instances of each value.
inline MultiLabelDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d, std::size_t q,
                                        double rate = 0.25, std::size_t min_each = 2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix<double> x(n, d);
    Matrix<LabelBit> y(n, q);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) x(i, c) = u(rng);
        for (std::size_t c = 0; c < q; ++c) y(i, c) = u(rng) < rate ? 1 : 0;
    }
    for (std::size_t c = 0; c < q && n >= 2 * min_each; ++c) {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < n; ++i) ones += y(i, c);
        for (std::size_t i = 0; ones < min_each && i < n; ++i) {
            if (!y(i, c)) { y(i, c) = 1; ++ones; }
        }
        for (std::size_t i = n; n - ones < min_each && i-- > 0;) {
            if (y(i, c)) { y(i, c) = 0; --ones; }
        }
    }
    std::vector<std::string> fn, ln;
    for (std::size_t c = 0; c < d; ++c) fn.push_back("f" + std::to_string(c));
    for (std::size_t c = 0; c < q; ++c) ln.push_back("l" + std::to_string(c));
    return MultiLabelDataset(std::move(x), std::move(y), std::move(fn), std::move(ln));
}

/// Two-dimensional dataset with three labels. Each label owns a few disc-shaped
/// sub-concepts of different sizes; the disc cores are mostly positive, the rims are
/// mixed (class overlap) and the background carries a little label noise. Discs of
/// different labels overlap so instances can carry several labels.
inline MultiLabelDataset subconcept_dataset(std::size_t n, std::uint64_t seed) {
    struct Disc {
        std::size_t label;
        double cx, cy, r;
    };
    static const Disc discs[] = {
        {0, 0.25, 0.30, 0.13}, {0, 0.70, 0.75, 0.08}, {0, 0.85, 0.20, 0.05},
        {1, 0.35, 0.38, 0.11}, {1, 0.60, 0.20, 0.07},
        {2, 0.20, 0.80, 0.10}, {2, 0.55, 0.55, 0.09}, {2, 0.68, 0.70, 0.05},
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix<double> x(n, 2);
    Matrix<LabelBit> y(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double px = u(rng), py = u(rng);
        x(i, 0) = px;
        x(i, 1) = py;
        for (std::size_t l = 0; l < 3; ++l) {
            double p = 0.02;
            for (const auto& disc : discs) {
                if (disc.label != l) continue;
                const double dist = std::hypot(px - disc.cx, py - disc.cy);
                if (dist < 0.7 * disc.r) p = std::max(p, 0.9);
                else if (dist < disc.r) p = std::max(p, 0.5);
            }
            y(i, l) = u(rng) < p ? 1 : 0;
        }
    }
    return MultiLabelDataset(std::move(x), std::move(y), {"x", "y"}, {"a", "b", "c"});
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mlsol_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Reference kNN: full sort of every other instance by (distance, index).
inline std::vector<std::vector<std::size_t>> reference_knn(const MultiLabelDataset& data, std::size_t k) {
    std::vector<std::vector<std::size_t>> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (j == i) continue;
            double s = 0.0;
            for (std::size_t c = 0; c < data.num_features(); ++c) {
                const double diff = data.x(i)[c] - data.x(j)[c];
                s += diff * diff;
            }
            all.emplace_back(std::sqrt(s), j);
        }
        std::sort(all.begin(), all.end());
        for (std::size_t c = 0; c < k; ++c) out[i].push_back(all[c].second);
    }
    return out;
}

/// Best F1 over every cut of the descending score list that does not split tied scores.
inline double brute_force_best_f1(const std::vector<double>& scores, const std::vector<LabelBit>& truth) {
    double best = 0.0;
    std::vector<double> cuts(scores);
    cuts.push_back(-1e300);
    for (double t : cuts) {
        // predict positive iff score >= t, which enumerates every top-m prefix
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const bool p = scores[i] >= t;
            tp += p && truth[i];
            fp += p && !truth[i];
            fn += !p && truth[i];
        }
        const double denom = 2.0 * tp + fp + fn;
        best = std::max(best, denom == 0 ? 0.0 : 2.0 * tp / denom);
    }
    return best;
}

inline double f1_at(const std::vector<double>& scores, const std::vector<LabelBit>& truth, double t) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool p = scores[i] > t;
        tp += p && truth[i];
        fp += p && !truth[i];
        fn += !p && truth[i];
    }
    const double denom = 2.0 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * tp / denom;
}

/// Pairwise AUC: wins + ties/2 over all positive-negative pairs.
inline double pairwise_auc(const std::vector<double>& s, const std::vector<LabelBit>& t) {
    double wins = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (!t[i] || t[j]) continue;
            pairs += 1.0;
            wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
    }
    return wins / pairs;
}

/// Precision-recall step area from first principles: for each distinct threshold,
/// recompute precision and recall of (score >= threshold) directly.
inline double sweep_aucpr(const std::vector<double>& s, const std::vector<LabelBit>& t) {
    std::vector<double> thresholds(s);
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    double positives = 0.0;
    for (auto v : t) positives += v;
    double prev_recall = 0.0, area = 0.0;
    for (double th : thresholds) {
        double tp = 0.0, pred = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= th) {
                pred += 1.0;
                tp += t[i];
            }
        }
        const double recall = tp / positives;
        area += (recall - prev_recall) * (tp / pred);
        prev_recall = recall;
    }
    return area;
}

}  // namespace testing
