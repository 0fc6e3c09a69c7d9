#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "hadamard/treespace.hpp"
#include "test_support.hpp"

using namespace hadamard;
using testsupport::Rng;

namespace {

TaxonSet abc() { return TaxonSet({"A", "B", "C"}); }
TaxonSet abcd() { return TaxonSet({"A", "B", "C", "D"}); }

std::uint32_t mask_of(const TaxonSet& taxa, std::initializer_list<const char*> names) {
    std::uint32_t m = 0;
    for (const char* n : names) m |= 1u << *taxa.index_of(n);
    return m;
}

}  // namespace

TEST_CASE("newick parsing") {
    const auto [tree, taxa] = parse_newick("((A:1,B:1):2,C:1);");
    CHECK(taxa.labels() == std::vector<std::string>{"A", "B", "C"});
    REQUIRE(tree.splits.size() == 1);
    CHECK(split_clade(tree.splits[0].first, taxa) == mask_of(taxa, {"A", "B"}));
    CHECK(tree.splits[0].second == 2.0);
    CHECK(tree.pendant_lengths == std::vector<double>{1.0, 1.0, 1.0});

    const auto [star, star_taxa] = parse_newick("(A:1,B:1,C:1);");
    CHECK(star.splits.empty());

    const auto swapped = parse_newick("((A:1,C:1):3,B:1);", abc());
    REQUIRE(swapped.splits.size() == 1);
    CHECK(split_clade(swapped.splits[0].first, abc()) == mask_of(abc(), {"A", "C"}));
    CHECK(swapped.splits[0].second == 3.0);
}

TEST_CASE("newick parse errors carry positions") {
    CHECK_THROWS_AS(parse_newick("((A:1,B:1):2,C:1)"), NewickParseError);   // no ';'
    CHECK_THROWS_AS(parse_newick("(A:1,B:1,A:1);"), NewickParseError);      // duplicate
    CHECK_THROWS_AS(parse_newick("(A:1,B,C:1);"), NewickParseError);        // missing length
    CHECK_THROWS_AS(parse_newick("(A:1,B:1,C:1):1;"), NewickParseError);    // root length
    CHECK_THROWS_AS(parse_newick("(A:1);"), NewickParseError);              // lone child
    CHECK_THROWS_AS(parse_newick("(A:1,B:1,D:1);", abc()), NewickParseError);
    CHECK_THROWS_AS(parse_newick("(A:1,B:1,C:-2);"), NewickParseError);     // negative

    try {
        parse_newick("(A:1,B:1,C:1;");
    } catch (const NewickParseError& err) {
        CHECK(err.position == 12);
    }
}

TEST_CASE("newick round trip") {
    SUBCASE("star tree") {
        const auto [tree, taxa] = parse_newick("(A:0.5,B:1.25,C:2);");
        CHECK(emit_newick(tree, taxa) == "(A:0.5,B:1.25,C:2);");
    }
    SUBCASE("nested tree reproduces the same point") {
        const auto [tree, taxa] =
            parse_newick("(((A:0.1,D:0.2):0.75,B:0.3):1.5,C:0.4,E:0.05);");
        const auto reparsed = parse_newick(emit_newick(tree, taxa), taxa);
        CHECK(reparsed.splits == tree.splits);
        CHECK(reparsed.pendant_lengths == tree.pendant_lengths);
    }
    SUBCASE("random trees") {
        const TaxonSet taxa({"A", "B", "C", "D", "E"});
        Rng rng(31);
        for (int i = 0; i < 200; ++i) {
            const BhvTree tree = testsupport::random_bhv_tree(rng, taxa);
            const auto reparsed = parse_newick(emit_newick(tree, taxa), taxa);
            CHECK(reparsed.splits == tree.splits);
            CHECK(reparsed.pendant_lengths == tree.pendant_lengths);
        }
    }
}

TEST_CASE("split compatibility") {
    const TaxonSet five({"A", "B", "C", "D", "E"});
    const Split ab = split_from_clade(mask_of(five, {"A", "B"}), five);
    const Split abc_split = split_from_clade(mask_of(five, {"A", "B", "C"}), five);
    CHECK(splits_compatible(ab, abc_split, five));  // nested clades
    CHECK(splits_compatible(ab, ab, five));

    const TaxonSet four = abcd();
    const Split ab4 = split_from_clade(mask_of(four, {"A", "B"}), four);
    const Split bc4 = split_from_clade(mask_of(four, {"B", "C"}), four);
    CHECK(!splits_compatible(ab4, bc4, four));
}

TEST_CASE("tree distance in one orthant is euclidean") {
    const auto taxa = abcd();
    BhvSpace space(taxa);
    const auto t = parse_newick("((A:1,B:2):1.5,C:3,D:0.5);", taxa);
    const auto u = parse_newick("((A:2,B:1):0.5,C:3,D:1.5);", taxa);
    // identical split sets; pendants differ by (1,1,0,1) and the split by 1
    CHECK(space.distance(t, u) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(space.distance(t, t) == 0.0);
    CHECK(space.cone_path_length(t, t) == 0.0);
}

TEST_CASE("incompatible quartet crosses the star face") {
    const auto taxa = abcd();
    BhvSpace space(taxa);
    const auto t = parse_newick("((A:1,B:1):1,C:1,D:1);", taxa);
    const auto u = parse_newick("((A:1,C:1):1,B:1,D:1);", taxa);
    CHECK(space.distance(t, u) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(space.cone_path_length(t, u) == doctest::Approx(2.0).epsilon(1e-12));

    const auto mid = space.geodesic(t, u, 0.5);
    CHECK(mid.splits.empty());  // the star tree
    CHECK(mid.pendant_lengths == std::vector<double>{1.0, 1.0, 1.0, 1.0});

    CHECK(space.geodesic(t, u, 0.0).splits == t.splits);
    CHECK(space.geodesic(t, u, 1.0).splits == u.splits);
}

TEST_CASE("two-leg support beats the cone path") {
    // Five taxa; T carries {B,C}:0.5 and {B,C,D}:2, U carries {C,D}:2 and
    // {C,D,E}:0.5. The only pair compatible across the trees is
    // ({B,C,D}, {C,D}), so the unique two-block support is
    // A = ({BC}, {BCD}), B = ({CD}, {CDE}) with legs (0.5+2) and (2+0.5):
    // squared length 12.5 against the cone value 17.
    const TaxonSet taxa({"A", "B", "C", "D", "E"});
    BhvSpace space(taxa);
    BhvTree t, u;
    t.pendant_lengths.assign(5, 1.0);
    u.pendant_lengths.assign(5, 1.0);
    t.splits.push_back({split_from_clade(mask_of(taxa, {"B", "C"}), taxa), 0.5});
    t.splits.push_back({split_from_clade(mask_of(taxa, {"B", "C", "D"}), taxa), 2.0});
    u.splits.push_back({split_from_clade(mask_of(taxa, {"C", "D"}), taxa), 2.0});
    u.splits.push_back({split_from_clade(mask_of(taxa, {"C", "D", "E"}), taxa), 0.5});
    t.sort_splits();
    u.sort_splits();

    CHECK(space.distance(t, u) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
    CHECK(space.cone_path_length(t, u) == doctest::Approx(std::sqrt(17.0)).epsilon(1e-12));

    // Midpoint sits on the middle leg: {B,C,D} shrunk to 0.75, {C,D} grown
    // to 0.75.
    const auto mid = space.geodesic(t, u, 0.5);
    REQUIRE(mid.splits.size() == 2);
    CHECK(split_clade(mid.splits[0].first, taxa) == mask_of(taxa, {"C", "D"}));
    CHECK(split_clade(mid.splits[1].first, taxa) == mask_of(taxa, {"B", "C", "D"}));
    CHECK(mid.splits[0].second == doctest::Approx(0.75));
    CHECK(mid.splits[1].second == doctest::Approx(0.75));
    CHECK(space.distance(t, mid) == doctest::Approx(0.5 * std::sqrt(12.5)).epsilon(1e-10));
}

TEST_CASE("guards") {
    std::vector<std::string> labels;
    for (int i = 0; i < 9; ++i) labels.push_back(std::string(1, static_cast<char>('A' + i)));
    BhvSpace nine{TaxonSet(labels)};
    BhvTree star;
    star.pendant_lengths.assign(9, 1.0);
    CHECK_THROWS_AS(nine.distance(star, star), std::invalid_argument);

    BhvSpace four(abcd());
    BhvTree wrong;
    wrong.pendant_lengths.assign(3, 1.0);
    CHECK_THROWS_AS(four.distance(wrong, wrong), std::invalid_argument);

    BhvTree clash;
    clash.pendant_lengths.assign(4, 1.0);
    clash.splits.push_back({split_from_clade(mask_of(abcd(), {"A", "B"}), abcd()), 1.0});
    clash.splits.push_back({split_from_clade(mask_of(abcd(), {"B", "C"}), abcd()), 1.0});
    clash.sort_splits();
    CHECK_THROWS_AS(four.validate(clash), std::invalid_argument);
}

TEST_CASE("tree space contracts on random instances") {
    SUBCASE("distance never exceeds the cone path") {
        const TaxonSet taxa({"A", "B", "C", "D", "E"});
        BhvSpace space(taxa);
        Rng rng(41);
        for (int i = 0; i < 300; ++i) {
            const auto t = testsupport::random_bhv_tree(rng, taxa);
            const auto u = testsupport::random_bhv_tree(rng, taxa);
            const double d = space.distance(t, u);
            CHECK(d <= space.cone_path_length(t, u) + 1e-12);
            CHECK(d == doctest::Approx(space.distance(u, t)).epsilon(1e-12));
        }
    }

    SUBCASE("jointly compatible pairs reduce to euclidean coordinates") {
        const TaxonSet taxa({"A", "B", "C", "D"});
        BhvSpace space(taxa);
        Rng rng(43);
        for (int i = 0; i < 200; ++i) {
            const auto t = testsupport::random_bhv_tree(rng, taxa);
            // Shrink/vary lengths but keep a subset of the same splits.
            BhvTree u;
            u.pendant_lengths = t.pendant_lengths;
            for (double& p : u.pendant_lengths) p = rng.uniform(0.0, 1.0);
            double expected_sq = 0.0;
            for (std::size_t s = 0; s < t.splits.size(); ++s) {
                if (rng.uniform(0.0, 1.0) < 0.5) {
                    const double len = rng.uniform(0.05, 1.0);
                    u.splits.push_back({t.splits[s].first, len});
                    expected_sq += (t.splits[s].second - len) * (t.splits[s].second - len);
                } else {
                    expected_sq += t.splits[s].second * t.splits[s].second;
                }
            }
            for (std::size_t p = 0; p < 4; ++p) {
                const double diff = t.pendant_lengths[p] - u.pendant_lengths[p];
                expected_sq += diff * diff;
            }
            u.sort_splits();
            CHECK(space.distance(t, u) ==
                  doctest::Approx(std::sqrt(expected_sq)).epsilon(1e-12));
        }
    }

    SUBCASE("geometric contracts, 4 and 5 taxa") {
        constexpr double kTol = 1e-8;
        for (int leaves : {4, 5}) {
            std::vector<std::string> labels;
            for (int i = 0; i < leaves; ++i)
                labels.push_back(std::string(1, static_cast<char>('A' + i)));
            const TaxonSet taxa(labels);
            BhvSpace space(taxa);
            const auto stats = testsupport::measure_space_properties(
                space, [&](Rng& rng) { return testsupport::random_bhv_tree(rng, taxa); }, 260,
                500 + static_cast<std::uint64_t>(leaves));
            CHECK(stats.cat0 <= kTol);
            CHECK(stats.reshetnyak <= kTol);
            CHECK(stats.speed <= kTol);
            CHECK(stats.triangle <= kTol);
            CHECK(stats.symmetry <= kTol);
            CHECK(stats.projection_expansion <= kTol);
        }
    }
}
