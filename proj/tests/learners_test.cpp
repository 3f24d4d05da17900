#include <doctest.h>

#include <random>

#include "mlsol/error.hpp"
#include "mlsol/learners.hpp"
#include "support.hpp"

using namespace mlsol;
using testing::make_dataset;

TEST_SUITE("learners") {

TEST_CASE("br-knn scores are positive fractions among the k nearest") {
    const auto d = make_dataset({{0}, {1}, {2}, {3}, {4}, {100}},
                                {{1, 0}, {0, 0}, {1, 1}, {0, 0}, {0, 1}, {1, 1}});
    const auto model = train_br_knn(d, 5);
    const auto s = model->predict_scores(std::vector<double>{2});
    CHECK(s[0] == 2.0 / 5.0);
    CHECK(s[1] == 2.0 / 5.0);
    CHECK(model->num_features() == 1);
    CHECK(model->num_labels() == 2);

    const std::vector<double> t{0.4, 0.39};
    CHECK(model->predict_bipartition(std::vector<double>{2}, t) == std::vector<LabelBit>{0, 1});
    const std::vector<double> ones{1.0, 1.0};
    CHECK(model->predict_bipartition(std::vector<double>{2}, ones) == std::vector<LabelBit>{0, 0});
}

TEST_CASE("br-knn preconditions") {
    const auto d = make_dataset({{0}, {1}, {2}}, {{1}, {0}, {0}});
    CHECK_THROWS_AS(train_br_knn(d, 0), Error);
    CHECK_THROWS_AS(train_br_knn(d, 4), Error);
    CHECK_NOTHROW(train_br_knn(d, 3));
    const auto model = train_br_knn(d, 1);
    CHECK_THROWS_AS(model->predict_scores(std::vector<double>{1, 2}), Error);
}

TEST_CASE("br-knn matches a brute-force count") {
    std::mt19937_64 rng(17);
    const auto d = testing::random_dataset(rng, 150, 3, 4);
    const auto learner = br_knn_learner(7);
    const auto model = learner(d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const std::vector<double> x{u(rng), u(rng), u(rng)};
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t i = 0; i < d.size(); ++i) {
            double s = 0;
            for (std::size_t f = 0; f < 3; ++f) s += (x[f] - d.x(i)[f]) * (x[f] - d.x(i)[f]);
            all.push_back({std::sqrt(s), i});
        }
        std::sort(all.begin(), all.end());
        const auto scores = model->predict_scores(x);
        for (std::size_t j = 0; j < 4; ++j) {
            double pos = 0;
            for (std::size_t m = 0; m < 7; ++m) pos += d.labels()(all[m].second, j);
            CHECK(scores[j] == doctest::Approx(pos / 7.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("bipartition is strict") {
    const std::vector<double> s{0.5, 0.5, 0.0, 1.0};
    const std::vector<double> t{0.5, 0.49, -0.1, 1.0};
    CHECK(bipartition(s, t) == std::vector<LabelBit>{0, 1, 1, 0});
    CHECK_THROWS_AS(bipartition(s, std::vector<double>{0.5}), Error);
}

}
