#include <sstream>

#include <gtest/gtest.h>

#include "dpratio/io.hpp"
#include "dpratio/params.hpp"

using namespace dpratio;

TEST(EdgeList, WriteFormat) {
  std::ostringstream os;
  write_edge_list(os, to_general(build_blowup(1, 3)));
  EXPECT_EQ(os.str(), "3 3\n0 1\n1 2\n2 0\n");
}

TEST(EdgeList, RoundTripsSampledGraphs) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Digraph g = to_general(sample_subgraph(build_blowup(3, 3), 11, Seed{s}));
    std::stringstream buf;
    write_edge_list(buf, g);
    EXPECT_EQ(read_digraph(buf), g);
  }
}

TEST(EdgeList, Malformed) {
  std::istringstream truncated("3 2\n0 1\n");
  EXPECT_THROW(read_edge_list(truncated), Error);
  std::istringstream loop("2 1\n1 1\n");
  EXPECT_THROW(read_edge_list(loop), Error);
  std::istringstream trailing("2 1\n0 1\n1 0\n");
  EXPECT_THROW(read_edge_list(trailing), Error);
}

TEST(Json, CarriesParts) {
  const Digraph g = to_general(build_blowup(2, 2));
  const auto j = to_json(g);
  EXPECT_EQ(j["n"], 4);
  EXPECT_EQ(j["edges"].size(), 8u);
  EXPECT_EQ(j["parts"], nlohmann::json::parse("[[0,1],[2,3]]"));

  std::istringstream in(j.dump());
  const Digraph back = read_digraph(in);
  EXPECT_EQ(back, g);
  EXPECT_EQ(back.parts, g.parts);
}

TEST(Json, PartsOptionalAndValidated) {
  std::istringstream plain(R"({"n": 3, "edges": [[0,1],[1,2],[2,0]]})");
  const Digraph g = read_digraph(plain);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.parts.empty());

  std::istringstream bad_part(R"({"n": 2, "edges": [], "parts": [[0],[5]]})");
  EXPECT_THROW(read_digraph(bad_part), Error);
  std::istringstream bad_json(R"({"n": 2, "edges": [)");
  EXPECT_THROW(read_digraph(bad_json), Error);
}

TEST(Json, PlanSchema) {
  const ConstructionPlan pl = plan(0.3, 8);
  const auto j = to_json(pl);
  EXPECT_EQ(j["schema"], 1);
  for (const char* key : {"r", "ell", "p", "x", "k", "m"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(plan_from_json(j), pl);
}
