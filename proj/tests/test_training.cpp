#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest/doctest.h>

#include "ldcrf/evaluation.hpp"
#include "ldcrf/rng.hpp"
#include "ldcrf/training.hpp"
#include "ldcrf/types.hpp"
#include "oracle_plain_crf.hpp"
#include "test_support.hpp"

using ldcrf::Dataset;
using ldcrf::LatentMap;
using ldcrf::ModelParams;
using ldcrf::nll_and_gradient;
using ldcrf::TrainConfig;

namespace {

double flat_dot(const ModelParams& a, const ModelParams& b) {
    return a.emission.cwiseProduct(b.emission).sum() +
           a.transition.cwiseProduct(b.transition).sum();
}

}  // namespace

TEST_CASE("zero params on balanced labels give log-counting NLL") {
    // With zero weights every path has equal score, so per frame the label
    // probability is count(y) / |H|; for one frame and counts {1,1} the NLL
    // is log 2 regardless of features.
    Dataset data;
    data.n_labels = 2;
    data.feature_dim = 1;
    ldcrf::SequenceSample s0, s1;
    s0.id = "a";
    s0.features = Eigen::MatrixXd::Constant(1, 1, 4.2);
    s0.labels = {0};
    s1.id = "b";
    s1.features = Eigen::MatrixXd::Constant(1, 1, -1.0);
    s1.labels = {1};
    data.samples = {s0, s1};

    const LatentMap map({1, 1});
    const ldcrf::NllGradient res =
        nll_and_gradient(ldcrf::zero_params(2, 1), map, data, 0.0);
    CHECK(res.value == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("NLL is non-negative without regularization") {
    ldcrf::Rng rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const Dataset data = support::random_dataset(1000 + trial, 3, 5, 2, 2);
        const LatentMap map({rng.uniform_int(1, 2), rng.uniform_int(1, 2)});
        const ModelParams params = support::random_params(rng, map.total(), 2);
        const ldcrf::NllGradient res = nll_and_gradient(params, map, data, 0.0);
        CHECK(res.value >= -1e-9);
    }
}

TEST_CASE("gradient matches central finite differences") {
    ldcrf::Rng rng(43);
    for (int trial = 0; trial < 6; ++trial) {
        const int n_labels = rng.uniform_int(2, 3);
        std::vector<int> counts(n_labels);
        for (int& c : counts) c = rng.uniform_int(1, 2);
        const LatentMap map(counts);
        const int dim = rng.uniform_int(1, 3);
        const Dataset data = support::random_dataset(2000 + trial, 3, 5, dim, n_labels);
        ModelParams params = support::random_params(rng, map.total(), dim, 0.5);
        const double l2 = trial % 2 == 0 ? 0.0 : 0.1;

        const ldcrf::NllGradient res = nll_and_gradient(params, map, data, l2);
        const double h = 1e-6;

        auto check_coord = [&](double& coord, double analytic) {
            const double saved = coord;
            coord = saved + h;
            const double up = nll_and_gradient(params, map, data, l2).value;
            coord = saved - h;
            const double down = nll_and_gradient(params, map, data, l2).value;
            coord = saved;
            const double numeric = (up - down) / (2.0 * h);
            CHECK(analytic == doctest::Approx(numeric).epsilon(1e-4).scale(1.0));
        };

        for (int i = 0; i < params.emission.rows(); ++i) {
            for (int j = 0; j < params.emission.cols(); ++j) {
                check_coord(params.emission(i, j), res.gradient.emission(i, j));
            }
        }
        for (int a = 0; a < params.transition.rows(); ++a) {
            for (int b = 0; b < params.transition.cols(); ++b) {
                check_coord(params.transition(a, b), res.gradient.transition(a, b));
            }
        }
    }
}

TEST_CASE("thread count changes nothing") {
    const Dataset data = support::random_dataset(47, 8, 10, 3, 2);
    const LatentMap map({2, 1});
    ldcrf::Rng rng(48);
    const ModelParams params = support::random_params(rng, map.total(), 3);

    const ldcrf::NllGradient one = nll_and_gradient(params, map, data, 1e-2, 1);
    const ldcrf::NllGradient four = nll_and_gradient(params, map, data, 1e-2, 4);
    CHECK(one.value == four.value);
    CHECK(one.gradient.emission == four.gradient.emission);
    CHECK(one.gradient.transition == four.gradient.transition);
}

TEST_CASE("degenerate map reproduces the plain CRF objective") {
    const Dataset data = support::random_dataset(53, 4, 6, 2, 2);
    const LatentMap map({1, 1});
    ldcrf::Rng rng(54);

    for (int trial = 0; trial < 5; ++trial) {
        const ModelParams params = support::random_params(rng, 2, 2);
        oracle::PlainCrf plain;
        plain.emission = params.emission;
        plain.transition = params.transition;

        oracle::PlainCrf plain_grad;
        const double plain_nll = oracle::plain_nll_and_gradient(plain, data, 1e-2, plain_grad);
        const ldcrf::NllGradient res = nll_and_gradient(params, map, data, 1e-2);

        CHECK(res.value == doctest::Approx(plain_nll).epsilon(1e-9));
        CHECK((res.gradient.emission - plain_grad.emission).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((res.gradient.transition - plain_grad.transition).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("latent assignment partitions separable frames") {
    const Dataset data = support::separable_dataset(61, 2, 6, 8, 2);
    SUBCASE("single latent value is trivial") {
        const auto assignment = ldcrf::init_latent_assignment(data, LatentMap({1, 1}), 0);
        for (std::size_t i = 0; i < data.samples.size(); ++i) {
            for (int t = 0; t < data.samples[i].length(); ++t) {
                const int h = assignment[i][t];
                CHECK(h == data.samples[i].labels[t]);  // offset(y) when count == 1
            }
        }
    }
    SUBCASE("assignments stay inside the label's range") {
        const LatentMap map({2, 3});
        const auto assignment = ldcrf::init_latent_assignment(data, map, 0);
        for (std::size_t i = 0; i < data.samples.size(); ++i) {
            for (int t = 0; t < data.samples[i].length(); ++t) {
                CHECK(map.label_of(assignment[i][t]) == data.samples[i].labels[t]);
            }
        }
    }
    SUBCASE("too few frames for a label's latent count") {
        Dataset tiny;
        tiny.n_labels = 2;
        tiny.feature_dim = 1;
        ldcrf::SequenceSample s;
        s.id = "t";
        s.features = Eigen::MatrixXd::Zero(3, 1);
        s.labels = {0, 0, 1};
        tiny.samples = {s};
        CHECK_THROWS_AS(ldcrf::init_latent_assignment(tiny, LatentMap({2, 2}), 0),
                        std::invalid_argument);
    }
}

TEST_CASE("warm start scales with epsilon") {
    const Dataset data = support::separable_dataset(67, 2, 4, 6, 2);
    const LatentMap map({1, 1});
    const auto assignment = ldcrf::init_latent_assignment(data, map, 0);

    SUBCASE("epsilon zero gives zero params") {
        const ModelParams params = ldcrf::warm_start_params(data, map, assignment, 0.0);
        CHECK(params.emission.isZero());
        CHECK(params.transition.isZero());
    }
    SUBCASE("emission rows are scaled centroids") {
        const double eps = 0.1;
        const ModelParams params = ldcrf::warm_start_params(data, map, assignment, eps);
        // With one latent value per label the centroid is the label's mean frame.
        for (int y = 0; y < 2; ++y) {
            Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
            int count = 0;
            for (const ldcrf::SequenceSample& s : data.samples) {
                for (int t = 0; t < s.length(); ++t) {
                    if (s.labels[t] == y) {
                        mean += s.features.row(t).transpose();
                        count += 1;
                    }
                }
            }
            mean /= count;
            CHECK((params.emission.row(y).head(2).transpose() - eps * mean)
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
            CHECK(params.emission(y, 2) == doctest::Approx(eps));
        }
        CHECK(params.transition.allFinite());
    }
}

TEST_CASE("training fits separable data and keeps a monotone trace") {
    const Dataset data = support::separable_dataset(71, 2, 8, 10, 2);
    TrainConfig config;
    config.max_iterations = 60;

    const ldcrf::TrainResult result = ldcrf::train(data, LatentMap({1, 1}), config);
    CHECK(ldcrf::evaluate(result.params, LatentMap({1, 1}), data).accuracy ==
          doctest::Approx(1.0));

    REQUIRE(!result.trace.empty());
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
        CHECK(result.trace[i].nll <= result.trace[i - 1].nll + 1e-9);
    }
    CHECK(result.final_nll == doctest::Approx(result.trace.back().nll));
    CHECK(result.iterations_used == static_cast<int>(result.trace.size()) - 1);
}

TEST_CASE("a wider latent map can only improve the reachable likelihood") {
    // Two prototype shapes for label 0 force the single-latent model to
    // average them; the (2,1) model separates them and trains to a lower
    // unregularized NLL on the same data.
    ldcrf::Rng rng(73);
    Dataset data;
    data.n_labels = 2;
    data.feature_dim = 2;
    for (int i = 0; i < 16; ++i) {
        ldcrf::SequenceSample s;
        s.id = "m" + std::to_string(i);
        s.features.resize(8, 2);
        const int y = i % 2;
        s.labels.assign(8, y);
        const double center = y == 0 ? (i % 4 < 2 ? -6.0 : 6.0) : 0.0;
        for (int t = 0; t < 8; ++t) {
            s.features(t, 0) = center + 0.3 * rng.normal();
            s.features(t, 1) = (y == 0 ? 3.0 : -3.0) + 0.3 * rng.normal();
        }
        data.samples.push_back(std::move(s));
    }

    TrainConfig config;
    config.l2_strength = 0.0;
    config.max_iterations = 150;
    const double narrow = ldcrf::train(data, LatentMap({1, 1}), config).final_nll;
    const double wide = ldcrf::train(data, LatentMap({2, 1}), config).final_nll;
    CHECK(wide <= narrow + 1e-6);
    CHECK(narrow >= -1e-9);
}

TEST_CASE("warm start beats the cold start objective") {
    const Dataset data = support::separable_dataset(79, 2, 6, 8, 3);
    const LatentMap map({2, 2});
    const auto assignment = ldcrf::init_latent_assignment(data, map, 0);
    const ModelParams warm = ldcrf::warm_start_params(data, map, assignment, 0.1);

    const double warm_nll = nll_and_gradient(warm, map, data, 1e-2).value;
    const double cold_nll =
        nll_and_gradient(ldcrf::zero_params(map.total(), 3), map, data, 1e-2).value;
    CHECK(warm_nll < cold_nll);
}

TEST_CASE("non-finite objective reports the iteration") {
    Dataset data;
    data.n_labels = 2;
    data.feature_dim = 1;
    ldcrf::SequenceSample s;
    s.id = "overflow";
    s.features = Eigen::MatrixXd::Constant(2, 1, 1e200);
    s.labels = {0, 1};
    data.samples = {s};

    TrainConfig config;
    config.max_iterations = 5;
    try {
        ldcrf::train(data, LatentMap({1, 1}), config);
        FAIL("expected a non-finite objective error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("iteration") != std::string::npos);
    }
}

TEST_CASE("training is deterministic across runs and thread counts") {
    const Dataset data = support::separable_dataset(83, 2, 5, 8, 2);
    TrainConfig config;
    config.max_iterations = 40;

    const ldcrf::TrainResult a = ldcrf::train(data, LatentMap({2, 1}), config, 1);
    const ldcrf::TrainResult b = ldcrf::train(data, LatentMap({2, 1}), config, 4);
    CHECK(a.final_nll == b.final_nll);
    CHECK(a.params.emission == b.params.emission);
    CHECK(a.params.transition == b.params.transition);
    CHECK(a.iterations_used == b.iterations_used);
}

TEST_CASE("gradient of the regularizer alone is l2 times the params") {
    // On an empty gradient direction check: the data term vanishes when the
    // dataset consists of one frame and the map has a single label, because
    // the masked sum equals log Z exactly; only the ridge term remains.
    Dataset data;
    data.n_labels = 1;
    data.feature_dim = 1;
    ldcrf::SequenceSample s;
    s.id = "r";
    s.features = Eigen::MatrixXd::Constant(1, 1, 2.0);
    s.labels = {0};
    data.samples = {s};

    const LatentMap map({2});
    ldcrf::Rng rng(89);
    const ModelParams params = support::random_params(rng, 2, 1);
    const ldcrf::NllGradient res = nll_and_gradient(params, map, data, 0.5);
    CHECK(res.value == doctest::Approx(0.25 * (params.emission.squaredNorm() +
                                               params.transition.squaredNorm()))
                           .epsilon(1e-9));
    CHECK((res.gradient.emission - 0.5 * params.emission).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((res.gradient.transition - 0.5 * params.transition).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(flat_dot(res.gradient, params) ==
          doctest::Approx(0.5 * (params.emission.squaredNorm() +
                                 params.transition.squaredNorm()))
              .epsilon(1e-9));
}
