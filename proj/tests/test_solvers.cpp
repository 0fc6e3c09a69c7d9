#include <doctest.h>

#include <cmath>
#include <vector>

#include "hadamard/euclidean.hpp"
#include "hadamard/oracles.hpp"
#include "hadamard/solvers.hpp"
#include "hadamard/spider.hpp"
#include "hadamard/treespace.hpp"
#include "test_support.hpp"

using namespace hadamard;
using testsupport::Rng;

namespace {

AnchorConfiguration<SpiderSpace> counterexample_config() {
    return AnchorConfiguration<SpiderSpace>::uniform({{0, 1.0}, {1, 1.0}, {2, 5.0}});
}

}  // namespace

TEST_CASE("cyclic driver on a single component") {
    EuclideanSpace line(1);
    std::vector<Component<EuclideanSpace>> comps{
        squared_distance_component<EuclideanSpace>({2.0}, 1.0)};
    RunConfig config;
    config.budget = 200;
    const auto trace = ppa_cyclic<EuclideanSpace>(line, comps, {10.0}, config);
    CHECK(std::abs(trace.final_point[0] - 2.0) < 1e-2);
    CHECK(trace.stop_reason == StopReason::budget);
    CHECK(trace.total_steps == 200);
    // single-component runs descend monotonically
    for (std::size_t i = 1; i < trace.objectives.size(); ++i)
        CHECK(trace.objectives[i] <= trace.objectives[i - 1] + 1e-12);
    // iterates shrink toward the anchor monotonically as well
    for (std::size_t i = 1; i < trace.iterates.size(); ++i)
        CHECK(std::abs(trace.iterates[i][0] - 2.0) <=
              std::abs(trace.iterates[i - 1][0] - 2.0) + 1e-15);
}

TEST_CASE("movement tolerance stops early") {
    EuclideanSpace line(1);
    std::vector<Component<EuclideanSpace>> comps{
        squared_distance_component<EuclideanSpace>({0.0}, 1.0)};
    RunConfig config;
    config.budget = 100000;
    config.movement_tolerance = 1e-9;
    const auto trace = ppa_cyclic<EuclideanSpace>(line, comps, {1.0}, config);
    CHECK(trace.stop_reason == StopReason::tolerance);
    CHECK(trace.total_steps < 100000);
}

TEST_CASE("driver input validation") {
    EuclideanSpace line(1);
    std::vector<Component<EuclideanSpace>> empty;
    RunConfig config;
    CHECK_THROWS_AS(ppa_cyclic<EuclideanSpace>(line, empty, {0.0}, config),
                    std::invalid_argument);
    std::vector<Component<EuclideanSpace>> comps{
        squared_distance_component<EuclideanSpace>({0.0}, 1.0)};
    RunConfig bad;
    bad.schedule.custom = [](std::size_t) { return 0.0; };
    CHECK_THROWS_AS(ppa_cyclic<EuclideanSpace>(line, comps, {1.0}, bad),
                    std::invalid_argument);
    RunConfig zero;
    zero.budget = 0;
    CHECK_THROWS_AS(ppa_cyclic<EuclideanSpace>(line, comps, {1.0}, zero),
                    std::invalid_argument);
}

TEST_CASE("cyclic mean lands on the long-ray point of the counterexample") {
    SpiderSpace spider(3);
    RunConfig config;
    config.budget = 5000;
    const auto [mean, trace] =
        frechet_mean(spider, counterexample_config(), MeanVariant::cyclic, config);
    CHECK(mean.ray == 2);
    CHECK(std::abs(mean.radius - 1.0) <= 1e-2);
}

TEST_CASE("random mean agrees across seeds on the counterexample") {
    SpiderSpace spider(3);
    const SpiderPoint truth{2, 1.0};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        RunConfig config;
        config.budget = 60000;
        config.seed = seed;
        config.record_trace = false;
        const auto [mean, trace] =
            frechet_mean(spider, counterexample_config(), MeanVariant::random, config);
        CHECK(spider.distance(mean, truth) <= 5e-2);
        CHECK(trace.generator == SampleStream::kGeneratorId);
    }
}

TEST_CASE("single anchor and duplicate anchors are fixed points") {
    EuclideanSpace plane(2);
    const AnchorConfiguration<EuclideanSpace> one({{0.5, -1.0}}, {1.0});
    RunConfig config;
    config.budget = 10;
    for (auto variant : {MeanVariant::cyclic, MeanVariant::random, MeanVariant::lln}) {
        const auto [mean, trace] = frechet_mean(plane, one, variant, config);
        CHECK(plane.distance(mean, {0.5, -1.0}) <= 1e-12);
    }
    const auto [median, mtrace] =
        geometric_median(plane, one, MedianVariant::cyclic, config);
    CHECK(plane.distance(median, {0.5, -1.0}) <= 1e-12);

    const AnchorConfiguration<EuclideanSpace> same =
        AnchorConfiguration<EuclideanSpace>::uniform({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
    RunConfig rc;
    rc.budget = 500;
    rc.seed = 9;
    const auto [rmean, rtrace] = frechet_mean(plane, same, MeanVariant::random, rc);
    CHECK(plane.distance(rmean, {1.0, 1.0}) <= 1e-12);
}

TEST_CASE("euclidean mean matches the arithmetic mean") {
    EuclideanSpace plane(2);
    const AnchorConfiguration<EuclideanSpace> tri =
        AnchorConfiguration<EuclideanSpace>::uniform({{0, 0}, {1, 0}, {0, 1}});
    RunConfig config;
    config.budget = 5000;
    const auto [mean, trace] = frechet_mean(plane, tri, MeanVariant::cyclic, config);
    CHECK(std::abs(mean[0] - 1.0 / 3.0) <= 1e-3);
    CHECK(std::abs(mean[1] - 1.0 / 3.0) <= 1e-3);
}

TEST_CASE("two-anchor mean is the weighted geodesic point") {
    SpiderSpace spider(4);
    Rng rng(91);
    for (int i = 0; i < 10; ++i) {
        const auto a = testsupport::random_spider_point(rng, 4, 2.0);
        const auto b = testsupport::random_spider_point(rng, 4, 2.0);
        const double s = rng.uniform(0.1, 0.9);
        const AnchorConfiguration<SpiderSpace> pair({a, b}, {1.0 - s, s});
        RunConfig config;
        config.budget = 20000;
        const auto [mean, trace] = frechet_mean(spider, pair, MeanVariant::cyclic, config);
        CHECK(spider.distance(mean, spider.geodesic(a, b, s)) <= 1e-3);
    }
}

TEST_CASE("median runs") {
    SUBCASE("euclidean fermat point") {
        EuclideanSpace plane(2);
        const AnchorConfiguration<EuclideanSpace> tri =
            AnchorConfiguration<EuclideanSpace>::uniform({{0, 0}, {1, 0}, {0, 1}});
        RunConfig config;
        config.budget = 20000;
        const auto [median, trace] =
            geometric_median(plane, tri, MedianVariant::cyclic, config);
        const double fermat = (3.0 - std::sqrt(3.0)) / 6.0;
        CHECK(std::abs(median[0] - fermat) <= 1e-3);
        CHECK(std::abs(median[1] - fermat) <= 1e-3);
    }
    SUBCASE("spider median is the origin") {
        SpiderSpace spider(3);
        RunConfig config;
        config.budget = 20000;
        const auto [median, trace] =
            geometric_median(spider, counterexample_config(), MedianVariant::cyclic, config);
        CHECK(median.radius <= 1e-2);
        const auto comps = median_components(counterexample_config());
        CHECK(objective_value<SpiderSpace>(spider, comps, median) ==
              doctest::Approx(7.0 / 3.0).epsilon(1e-3));

        RunConfig rconfig;
        rconfig.budget = 60000;
        rconfig.seed = 4;
        const auto [rmedian, rtrace] =
            geometric_median(spider, counterexample_config(), MedianVariant::random, rconfig);
        CHECK(rmedian.radius <= 5e-2);
    }
}

TEST_CASE("feasibility by alternating projections") {
    EuclideanSpace plane(2);
    const GeodesicBall<EuclideanSpace> left{{0.0, 0.0}, 1.0};
    const GeodesicBall<EuclideanSpace> right{{1.0, 0.0}, 1.0};
    std::vector<Component<EuclideanSpace>> comps{
        indicator_component<EuclideanSpace>(left), indicator_component<EuclideanSpace>(right)};
    const auto violation = [&](const std::vector<double>& x) {
        return std::max(std::max(0.0, plane.distance(x, left.center) - left.radius),
                        std::max(0.0, plane.distance(x, right.center) - right.radius));
    };

    RunConfig config;
    config.budget = 100;  // cycles of two projections each
    config.movement_tolerance = 1e-12;
    const auto trace = ppa_cyclic<EuclideanSpace>(plane, comps, {3.0, 2.0}, config);
    CHECK(violation(trace.final_point) <= 1e-6);
    CHECK(trace.total_steps <= 200);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RunConfig rc;
        rc.budget = 200;
        rc.seed = seed;
        const auto rt = ppa_random<EuclideanSpace>(plane, comps, {3.0, 2.0}, rc);
        CHECK(violation(rt.final_point) <= 1e-6);
    }
}

TEST_CASE("law of large numbers estimator") {
    EuclideanSpace line(1);
    const AnchorConfiguration<EuclideanSpace> pair =
        AnchorConfiguration<EuclideanSpace>::uniform({{0.0}, {1.0}});

    SUBCASE("empirical mean of finals approaches the true mean") {
        double sum = 0.0;
        const int seeds = 1000;
        for (int seed = 1; seed <= seeds; ++seed) {
            const auto trace = lln_mean(line, pair, static_cast<std::uint64_t>(seed), 1000,
                                        /*record_trace=*/false);
            sum += trace.final_point[0];
        }
        CHECK(std::abs(sum / seeds - 0.5) <= 0.05);
    }
    SUBCASE("single step returns a sampled anchor") {
        const auto trace = lln_mean(line, pair, 3, 1);
        CHECK((trace.final_point[0] == 0.0 || trace.final_point[0] == 1.0));
    }
    SUBCASE("identical anchors pin the estimator") {
        const AnchorConfiguration<EuclideanSpace> same =
            AnchorConfiguration<EuclideanSpace>::uniform({{2.0}, {2.0}});
        const auto trace = lln_mean(line, same, 11, 500);
        CHECK(trace.final_point[0] == 2.0);
    }
    SUBCASE("weighted sampling respects the distribution") {
        const AnchorConfiguration<EuclideanSpace> skewed({{0.0}, {1.0}}, {0.9, 0.1});
        double sum = 0.0;
        const int seeds = 400;
        for (int seed = 1; seed <= seeds; ++seed)
            sum += lln_mean(line, skewed, static_cast<std::uint64_t>(seed), 400, false)
                       .final_point[0];
        CHECK(std::abs(sum / seeds - 0.1) <= 0.05);
    }
}

TEST_CASE("lln error rate stays under the variance bound") {
    EuclideanSpace line(1);
    const AnchorConfiguration<EuclideanSpace> pair =
        AnchorConfiguration<EuclideanSpace>::uniform({{0.0}, {1.0}});
    const std::vector<std::size_t> checkpoints{10, 100, 1000};
    const auto rows = lln_rate_report(line, pair, {0.5}, 400, checkpoints);
    for (const auto& row : rows) {
        INFO(row.instance, " bound=", row.oracle_value, " observed=", row.solver_value);
        CHECK(row.pass);
    }
}

TEST_CASE("random runs replay bit-identically per seed") {
    SpiderSpace spider(3);
    RunConfig config;
    config.budget = 2000;
    config.seed = 1234;
    const auto a = frechet_mean(spider, counterexample_config(), MeanVariant::random, config);
    const auto b = frechet_mean(spider, counterexample_config(), MeanVariant::random, config);
    REQUIRE(a.second.iterates.size() == b.second.iterates.size());
    for (std::size_t i = 0; i < a.second.iterates.size(); ++i) {
        CHECK(a.second.iterates[i].ray == b.second.iterates[i].ray);
        CHECK(a.second.iterates[i].radius == b.second.iterates[i].radius);
    }
    for (std::size_t i = 0; i < a.second.steps.size(); ++i) {
        CHECK(a.second.steps[i].component == b.second.steps[i].component);
        CHECK(a.second.steps[i].lambda == b.second.steps[i].lambda);
        CHECK(a.second.steps[i].t == b.second.steps[i].t);
    }

    const auto l1 = lln_mean(spider, counterexample_config(), 77, 2000);
    const auto l2 = lln_mean(spider, counterexample_config(), 77, 2000);
    for (std::size_t i = 0; i < l1.iterates.size(); ++i) {
        CHECK(l1.iterates[i].ray == l2.iterates[i].ray);
        CHECK(l1.iterates[i].radius == l2.iterates[i].radius);
    }
}

TEST_CASE("random mean with the inductive schedule replays the estimator") {
    // With uniform weights w = 1/N, the schedule l_k = N/(2k) turns the
    // random-order mean update coefficient into 1/(k+1); a huge l_0 makes
    // the first step jump onto the sampled anchor. Both drivers consume the
    // sample stream identically, so the trajectories coincide up to
    // floating-point rounding of the coefficients.
    SpiderSpace spider(3);
    const auto data = counterexample_config();
    const double n = static_cast<double>(data.size());
    RunConfig config;
    config.budget = 2000;
    config.seed = 31;
    config.schedule.custom = [n](std::size_t k) {
        return k == 0 ? 1e300 : n / (2.0 * static_cast<double>(k));
    };
    const auto [mean, ppa_trace] =
        frechet_mean(spider, data, MeanVariant::random, config);
    const auto lln_trace = lln_mean(spider, data, config.seed, config.budget);

    REQUIRE(ppa_trace.iterates.size() == lln_trace.iterates.size() + 1);
    for (std::size_t i = 0; i < lln_trace.iterates.size(); ++i) {
        CHECK(spider.distance(ppa_trace.iterates[i + 1], lln_trace.iterates[i]) <= 1e-12);
    }
    // and the sampled component indices match step for step
    for (std::size_t i = 0; i + 1 < ppa_trace.steps.size(); ++i)
        CHECK(ppa_trace.steps[i + 1].component == lln_trace.steps[i].component);
}

TEST_CASE("semigroup approximation by repeated resolvent sweeps") {
    EuclideanSpace line(1);
    std::vector<Component<EuclideanSpace>> one{
        squared_distance_component<EuclideanSpace>({0.0}, 1.0)};

    SUBCASE("zero time returns the start") {
        CHECK(lie_trotter_kato<EuclideanSpace>(line, one, {1.0}, 0.0, 5)[0] == 1.0);
    }
    SUBCASE("single quadratic flows like exp(-2t)") {
        const auto flowed = lie_trotter_kato<EuclideanSpace>(line, one, {1.0}, 1.0, 10000);
        CHECK(std::abs(flowed[0] - std::exp(-2.0)) <= 1e-3);
    }
    SUBCASE("doubling the component doubles the decay rate") {
        std::vector<Component<EuclideanSpace>> two{
            squared_distance_component<EuclideanSpace>({0.0}, 1.0),
            squared_distance_component<EuclideanSpace>({0.0}, 1.0)};
        const auto flowed = lie_trotter_kato<EuclideanSpace>(line, two, {1.0}, 1.0, 10000);
        CHECK(std::abs(flowed[0] - std::exp(-4.0)) <= 1e-3);
    }
    SUBCASE("empty components are rejected") {
        std::vector<Component<EuclideanSpace>> none;
        CHECK_THROWS_AS(lie_trotter_kato<EuclideanSpace>(line, none, {1.0}, 1.0, 5),
                        std::invalid_argument);
    }
}

TEST_CASE("mean depends lipschitz-continuously on the anchors") {
    SpiderSpace spider(3);
    Rng rng(97);
    for (int i = 0; i < 10; ++i) {
        std::vector<SpiderPoint> anchors, moved;
        double bound = 0.0;
        const int n = rng.uniform_int(2, 5);
        for (int j = 0; j < n; ++j) {
            anchors.push_back(testsupport::random_spider_point(rng, 3, 2.0));
            SpiderPoint shifted = anchors.back();
            shifted.radius = std::max(0.0, shifted.radius + rng.uniform(-0.1, 0.1));
            moved.push_back(shifted);
        }
        const auto base = AnchorConfiguration<SpiderSpace>::uniform(anchors);
        const auto perturbed = AnchorConfiguration<SpiderSpace>::uniform(moved);
        for (int j = 0; j < n; ++j)
            bound += base.weights[j] * spider.distance(anchors[j], moved[j]);
        RunConfig config;
        config.budget = 4000;
        config.record_trace = false;
        const auto [m1, t1] = frechet_mean(spider, base, MeanVariant::cyclic, config);
        const auto [m2, t2] = frechet_mean(spider, perturbed, MeanVariant::cyclic, config);
        CHECK(spider.distance(m1, m2) <= bound + 2e-3);
    }
}

TEST_CASE("variance inequality at tightly solved means") {
    SpiderSpace spider(3);
    Rng rng(101);
    for (int i = 0; i < 3; ++i) {
        std::vector<SpiderPoint> anchors;
        const int n = rng.uniform_int(2, 4);
        for (int j = 0; j < n; ++j) {
            SpiderPoint a{rng.uniform_int(0, 2), rng.uniform(0.3, 1.0)};
            if (j < 2) a.ray = j;  // pin the spread away from zero
            anchors.push_back(a);
        }
        const auto data = AnchorConfiguration<SpiderSpace>::uniform(anchors);
        RunConfig config;
        config.budget = 3000000;
        config.record_trace = false;
        const auto [mean, trace] = frechet_mean(spider, data, MeanVariant::cyclic, config);
        for (int z = 0; z < 100; ++z) {
            const auto probe = testsupport::random_spider_point(rng, 3, 1.5);
            // scale: max pairwise distance over the whole sample
            std::vector<SpiderPoint> sample = anchors;
            sample.push_back(mean);
            sample.push_back(probe);
            double scale = 0.0;
            for (std::size_t j = 0; j < sample.size(); ++j)
                for (std::size_t l = j + 1; l < sample.size(); ++l)
                    scale = std::max(scale, spider.distance(sample[j], sample[l]));
            CHECK(variance_gap(spider, data, mean, probe) >= -1e-6 * scale * scale);
        }
    }
}

TEST_CASE("tree mean of repeated trees returns the tree") {
    const auto [tree, taxa] = parse_newick("((A:1,B:0.5):0.25,C:2,D:1);");
    BhvSpace space{TaxonSet(taxa.labels())};
    const AnchorConfiguration<BhvSpace> data =
        AnchorConfiguration<BhvSpace>::uniform({tree, tree, tree, tree});
    RunConfig config;
    config.budget = 300;
    config.seed = 5;
    const auto [mean, trace] = frechet_mean(space, data, MeanVariant::random, config);
    CHECK(space.distance(mean, tree) <= 1e-6);
}

TEST_CASE("tree mean of two trees sits on their geodesic") {
    const TaxonSet taxa({"A", "B", "C", "D"});
    BhvSpace space{TaxonSet({"A", "B", "C", "D"})};
    const auto t = parse_newick("((A:1,B:1):1,C:1,D:1);", taxa);
    const auto u = parse_newick("((A:1,C:1):1.5,B:0.5,D:1);", taxa);
    const double s = 0.7;
    const AnchorConfiguration<BhvSpace> pair({t, u}, {1.0 - s, s});
    RunConfig config;
    config.budget = 20000;
    config.record_trace = false;
    const auto [mean, trace] = frechet_mean(space, pair, MeanVariant::cyclic, config);
    CHECK(space.distance(mean, space.geodesic(t, u, s)) <= 1e-3);
}
