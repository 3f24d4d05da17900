#include "mlsol/resampling.hpp"

#include "mlsol/error.hpp"
#include "mlsol/mlsmote.hpp"
#include "mlsol/mlsol_sampler.hpp"

namespace mlsol {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::None: return "none";
        case Method::Mlsol: return "mlsol";
        case Method::Mlsmote: return "mlsmote";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "none") return Method::None;
    if (name == "mlsol") return Method::Mlsol;
    if (name == "mlsmote") return Method::Mlsmote;
    throw Error("unknown method '" + std::string(name) + "'");
}

Sampler identity_sampler() {
    return [](const MultiLabelDataset& data, std::uint64_t) { return Resampled{data, {}}; };
}

Sampler make_mlsol_sampler(const SamplerConfig& config) {
    config.validate();
    return [config](const MultiLabelDataset& data, std::uint64_t seed) {
        auto run_config = config;
        run_config.seed = seed;
        auto run = run_mlsol(data, run_config);
        std::vector<SyntheticOrigin> origins;
        origins.reserve(run.trace.size());
        for (const auto& t : run.trace) origins.push_back({t.seed, t.reference});
        return Resampled{std::move(run.dataset), std::move(origins)};
    };
}

Sampler make_mlsmote_sampler(const MlsmoteConfig& config) {
    return [config](const MultiLabelDataset& data, std::uint64_t seed) {
        auto run_config = config;
        run_config.seed = seed;
        auto run = run_mlsmote(data, run_config);
        return Resampled{std::move(run.dataset), std::move(run.origins)};
    };
}

Sampler make_sampler(Method method, std::size_t k, double ratio) {
    switch (method) {
        case Method::None: return identity_sampler();
        case Method::Mlsol: {
            SamplerConfig config;
            config.k = k;
            config.gen_ratio = ratio;
            return make_mlsol_sampler(config);
        }
        case Method::Mlsmote: return make_mlsmote_sampler(MlsmoteConfig{k, 0});
    }
    throw Error("unknown method");
}

}  // namespace mlsol
