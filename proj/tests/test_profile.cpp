#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hsis/graph.hpp"
#include "hsis/profile.hpp"

using namespace hsis;

TEST_CASE("profile params enforce (0,1] rates") {
    CHECK_THROWS_AS(ProfileParams({{0.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(ProfileParams({{0.5, 1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(ProfileParams({{-0.1, 0.5}}), std::invalid_argument);
    CHECK_NOTHROW(ProfileParams({{1.0, 1.0}}));
}

TEST_CASE("profile params json round trip") {
    auto params = ProfileParams::from_json_text(
        R"({"profiles":[{"beta":0.006,"delta":0.0001},{"beta":0.009,"delta":0.1}]})");
    CHECK(params.k() == 2);
    CHECK(params.rates(0).beta == 0.006);
    CHECK(params.rates(1).delta == 0.1);
    auto again = ProfileParams::from_json_text(params.to_json_text());
    CHECK(again.rates(0).beta == params.rates(0).beta);
}

TEST_CASE("random split balances profile sizes and is deterministic") {
    Graph g = gen_clique(2000);
    auto pm = assign_random_split(g, 2, 5);
    auto sizes = pm.profile_sizes();
    CHECK(sizes[0] == 1000);
    CHECK(sizes[1] == 1000);

    auto pm2 = assign_random_split(g, 2, 5);
    CHECK(pm.assignment() == pm2.assignment());

    Graph small = gen_clique(5);
    auto spm = assign_random_split(small, 2, 17);
    auto ssz = spm.profile_sizes();
    CHECK(std::max(ssz[0], ssz[1]) == 3);
    CHECK(std::min(ssz[0], ssz[1]) == 2);
    auto spm2 = assign_random_split(small, 2, 17);
    CHECK(spm.assignment() == spm2.assignment());

    auto one = assign_random_split(small, 1, 0);
    for (NodeId i = 0; i < 5; ++i) CHECK(one.profile_of(i) == 0);

    CHECK_THROWS_AS(assign_random_split(small, 6, 0), std::invalid_argument);
}

TEST_CASE("attribute binning and missing-value drops") {
    Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    std::string path = "/tmp/hsis_test_ages.csv";
    {
        std::ofstream out(path);
        out << "node_id,value\n0,7\n1,15\n2,25\n";  // node 3 has no age
    }
    auto res = assign_by_attribute(g, path, {10, 18, 30, 50});
    CHECK(res.graph.node_count() == 3);
    CHECK(res.dropped_nodes == 1);
    CHECK(res.profiles.k() == 5);
    CHECK(res.profiles.profile_of(0) == 0);
    CHECK(res.profiles.profile_of(1) == 1);
    CHECK(res.profiles.profile_of(2) == 2);
    CHECK(res.empty_bins.size() == 2);  // bins 3 and 4 unused
    std::remove(path.c_str());
}

TEST_CASE("attribute binning with all-equal values warns via empty bins") {
    Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
    std::string path = "/tmp/hsis_test_flat.csv";
    {
        std::ofstream out(path);
        out << "0,42\n1,42\n2,42\n";
    }
    auto res = assign_by_attribute(g, path, {10.0});
    CHECK(res.profiles.k() == 2);
    auto sizes = res.profiles.profile_sizes();
    CHECK(sizes[1] == 3);
    CHECK(res.empty_bins == std::vector<std::uint32_t>{0});
    std::remove(path.c_str());
}

TEST_CASE("attribute binning errors when nothing is retained") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    std::string path = "/tmp/hsis_test_none.csv";
    {
        std::ofstream out(path);
        out << "9,1.0\n";  // no such node
    }
    CHECK_THROWS_AS(assign_by_attribute(g, path, {1.0}), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("attribute file with original ids goes through the remap") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    std::vector<std::int64_t> original = {500, 900};
    std::string path = "/tmp/hsis_test_orig.csv";
    {
        std::ofstream out(path);
        out << "500,5\n900,20\n";
    }
    auto res = assign_by_attribute(g, path, {10.0}, &original);
    CHECK(res.profiles.profile_of(0) == 0);
    CHECK(res.profiles.profile_of(1) == 1);
    std::remove(path.c_str());
}

TEST_CASE("build_matrices expands per-profile rates to diagonals") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    ProfileMap pm({0, 1}, 2);
    ProfileParams params({{0.1, 0.5}, {0.2, 0.7}});
    auto sm = build_matrices(pm, params);
    CHECK(sm.beta == std::vector<double>{0.1, 0.2});
    CHECK(sm.delta == std::vector<double>{0.5, 0.7});

    // identical inputs give identical diagonals
    auto sm2 = build_matrices(pm, params);
    CHECK(sm.beta == sm2.beta);
    CHECK(sm.delta == sm2.delta);

    // a uniform single profile gives constant diagonals
    ProfileMap uni({0, 0}, 1);
    ProfileParams up({{0.3, 0.4}});
    auto usm = build_matrices(uni, up);
    CHECK(usm.beta == std::vector<double>{0.3, 0.3});

    // five-profile expansion
    Graph g5 = gen_clique(5);
    ProfileMap pm5({0, 1, 2, 3, 4}, 5);
    ProfileParams p5({{0.006, 0.0001},
                      {0.009, 0.1},
                      {0.006, 0.0001},
                      {0.009, 0.1},
                      {0.006, 0.0001}});
    auto sm5 = build_matrices(pm5, p5);
    CHECK(sm5.beta[0] == 0.006);
    CHECK(sm5.delta[0] == 0.0001);
    CHECK(sm5.beta[3] == 0.009);
    CHECK(sm5.delta[3] == 0.1);

    // a map that uses profiles the params lack
    ProfileMap wide({0, 1}, 2);
    ProfileParams narrow({{0.1, 0.1}});
    CHECK_THROWS_AS(build_matrices(wide, narrow), std::invalid_argument);
}

TEST_CASE("unused profiles are reported, not rejected") {
    ProfileMap pm({0, 0, 0}, 3);
    CHECK(pm.unused_profiles() == std::vector<std::uint32_t>{1, 2});
}
