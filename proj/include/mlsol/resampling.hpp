#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mlsol/dataset.hpp"

namespace mlsol {

struct SamplerConfig;
struct MlsmoteConfig;

/// Rows of the input a synthetic instance was built from.
struct SyntheticOrigin {
    std::size_t seed = 0;
    std::size_t reference = 0;
};

/// A resampled dataset: the input rows first, then synthetic rows with one origin each.
struct Resampled {
    MultiLabelDataset dataset;
    std::vector<SyntheticOrigin> origins;
};

/// Any resampling procedure, parameterized by the random seed of the run.
using Sampler = std::function<Resampled(const MultiLabelDataset&, std::uint64_t seed)>;

enum class Method { None, Mlsol, Mlsmote };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

Sampler identity_sampler();
/// The seed argument replaces config.seed.
Sampler make_mlsol_sampler(const SamplerConfig& config);
Sampler make_mlsmote_sampler(const MlsmoteConfig& config);
Sampler make_sampler(Method method, std::size_t k, double ratio);

}  // namespace mlsol
