#include <gtest/gtest.h>

#include "cliquefactor/constructions.hpp"
#include "cliquefactor/io.hpp"

namespace cf = cliquefactor;
namespace io = cliquefactor::io;

TEST(Io, VertexIds) {
  EXPECT_EQ(io::format_vertex({2, 11}), "c2.v11");
  EXPECT_EQ(io::parse_vertex("c0.v3"), (cf::VertexId{0, 3}));
  for (const char* bad : {"", "c1", "c.v1", "v1.c2", "c1.v", "c-1.v2", "c1.v2x"}) {
    EXPECT_THROW(io::parse_vertex(bad), std::invalid_argument) << bad;
  }
}

TEST(Io, JsonAndEdgeListRoundTrip) {
  for (cf::Seed seed = 0; seed < 4; ++seed) {
    const auto h = cf::random_partite(3 + seed % 2, 2 + seed % 2, 3, 0.5, seed);
    const auto from_json = io::parse_instance(io::instance_to_json(h).dump());
    const auto from_edges = io::parse_instance(io::instance_to_edge_list(h));
    EXPECT_EQ(from_json.to_raw().edges, h.to_raw().edges);
    EXPECT_EQ(from_edges.to_raw().edges, h.to_raw().edges);
    EXPECT_EQ(io::instance_to_json(from_edges), io::instance_to_json(h));
  }
}

TEST(Io, EdgeListCommentsAndBlankLines) {
  const auto h = io::parse_instance("# header next\n3 2 1 1 1\n\nc0.v0 c1.v0\n# note\nc1.v0 c2.v0\n");
  EXPECT_EQ(h.edge_count(), 2u);
}

TEST(Io, ErrorsCiteTheOffendingLine) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      io::parse_instance(text);
    } catch (const io::ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("3 2 2 2 2\nc0.v0 c1.v0\nc0.v0 c0.v1\n"), 3u);           // same class
  EXPECT_EQ(line_of("3 2 2 2 2\n\nc0.v0 c1.v0\n# x\nc0.v0 c1.v7\n"), 5u);    // out of range
  EXPECT_EQ(line_of("3 2 2 2 2\nc0.v0 c1.v0\nc1.v0 c0.v0\n"), 3u);           // duplicate
  EXPECT_EQ(line_of("3 2 2 2 2\nc0.v0\n"), 2u);                              // wrong size
  EXPECT_EQ(line_of("3 2 2 2 2\nc0.v0 bogus\n"), 2u);                        // bad vertex id
  EXPECT_EQ(line_of("3 x 2 2 2\n"), 1u);
  EXPECT_THROW(io::parse_instance("{\"t\": 3}"), io::ParseError);
  EXPECT_THROW(io::parse_instance("{not json"), io::ParseError);
  EXPECT_THROW(io::parse_instance(""), io::ParseError);
}

TEST(Io, GeneralRoundTrip) {
  const auto g = cf::random_general(8, 3, 0.4, 2);
  const auto back = io::parse_general(io::general_to_json(g).dump());
  ASSERT_EQ(back.edge_count(), g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    EXPECT_TRUE(std::equal(g.edge(i).begin(), g.edge(i).end(), back.edge(i).begin()));
  }
  EXPECT_EQ(io::parse_general("4 2\n0 1\n# c\n2 3\n").edge_count(), 2u);
  EXPECT_THROW(io::parse_general("4 2\n0 9\n"), io::ParseError);
}
