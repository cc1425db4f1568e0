#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "dspanner/error.hpp"
#include "dspanner/generate.hpp"
#include "dspanner/io.hpp"

namespace dspanner {
namespace {

ErrorCode parse_error(std::string_view text, std::string* message = nullptr) {
  try {
    parse_graph(text);
  } catch (const Error& e) {
    if (message != nullptr) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "expected an error for: " << text;
  return ErrorCode::kContractViolation;
}

TEST(ParseGraph, Minimal) {
  const DiGraph g = parse_graph("2 1\n0 1 1.0\n");
  EXPECT_EQ(g.num_vertices(), 2u);
  ASSERT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.edge(0), (Edge{0, 1, 1.0}));
}

TEST(ParseGraph, CommentsBlankLinesAndWhitespace) {
  const DiGraph g = parse_graph("# a triangle\n\n3 3   # header\n0 1 1\n\t0 2 2.5e0\r\n2 1 +0.5\n# done");
  ASSERT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.edge(1).length, 2.5);
  EXPECT_EQ(g.edge(2).length, 0.5);
}

TEST(ParseGraph, NoTrailingNewline) { EXPECT_EQ(parse_graph("2 1\n1 0 3").edge(0).length, 3.0); }

TEST(ParseGraph, SemanticErrors) {
  EXPECT_EQ(parse_error("2 1\n0 1 -1\n"), ErrorCode::kNegativeLength);
  EXPECT_EQ(parse_error("2 1\n0 0 1\n"), ErrorCode::kSelfLoop);
  EXPECT_EQ(parse_error("2 1\n0 5 1\n"), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(parse_error("2 2\n0 1 1\n0 1 2\n"), ErrorCode::kDuplicateEdge);
}

TEST(ParseGraph, SyntaxErrorsNameTheLine) {
  std::string msg;
  EXPECT_EQ(parse_error("3 2\n0 1 1\n", &msg), ErrorCode::kSyntaxError);
  EXPECT_NE(msg.find("line 1"), std::string::npos);
  EXPECT_EQ(parse_error("# c\n2 1\n0 1 1\n1 0 1\n", &msg), ErrorCode::kSyntaxError);
  EXPECT_NE(msg.find("line 4"), std::string::npos);
  EXPECT_NE(msg.find("line 2"), std::string::npos);
  EXPECT_EQ(parse_error("2 1\n0 1 x\n", &msg), ErrorCode::kSyntaxError);
  EXPECT_NE(msg.find("line 2, col 5"), std::string::npos);
  EXPECT_EQ(parse_error("2 1\n0 1\n"), ErrorCode::kSyntaxError);
  EXPECT_EQ(parse_error("2\n"), ErrorCode::kSyntaxError);
  EXPECT_EQ(parse_error(""), ErrorCode::kSyntaxError);
  EXPECT_EQ(parse_error("2 1\n-1 1 1\n"), ErrorCode::kSyntaxError);
  EXPECT_EQ(parse_error("2 1\n0 1 inf\n"), ErrorCode::kSyntaxError);
  EXPECT_EQ(parse_error("2 1\n0 1 nan\n"), ErrorCode::kSyntaxError);
}

TEST(SerializeGraph, RoundTripsGeneratedInstances) {
  for (const char* spec : {"er:n=25,p=0.2,maxlen=9,seed=3", "cycle:n=7", "layered:n=20,p=0.5,layers=4,seed=1",
                           "grid:n=12,bidir=1", "er:n=1,p=0.5"}) {
    const DiGraph g = generate_instance(parse_instance_spec(spec));
    EXPECT_EQ(parse_graph(serialize_graph(g)), g) << spec;
  }
}

TEST(SerializeGraph, RoundTripsArbitraryDoubles) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> len(0.0, 1e6);
  std::vector<Edge> edges;
  for (VertexId v = 0; v + 1 < 200; ++v) edges.push_back({v, v + 1, len(rng)});
  edges.push_back({5, 2, 1e-300});
  edges.push_back({6, 2, 0.1});
  const DiGraph g = DiGraph::build(200, edges);
  EXPECT_EQ(parse_graph(serialize_graph(g)), g);
  EXPECT_EQ(format_length(0.1), "0.1");
  EXPECT_EQ(format_length(3.0), "3");
}

TEST(ReadGraphFile, ReadsAndReportsMissingFiles) {
  const auto path = std::filesystem::temp_directory_path() / "dspanner_io_test.txt";
  {
    std::ofstream f(path);
    f << "3 2\n0 1 1\n1 2 1\n";
  }
  EXPECT_EQ(read_graph_file(path).num_edges(), 2u);
  std::filesystem::remove(path);
  EXPECT_THROW(read_graph_file(path), Error);
}

TEST(GenerateInstance, Examples) {
  const DiGraph c = generate_instance(parse_instance_spec("cycle:n=5"));
  EXPECT_EQ(c.num_edges(), 5u);
  EXPECT_TRUE(c.all_unit_lengths());
  EXPECT_EQ(generate_instance(parse_instance_spec("er:n=10,p=1.0")).num_edges(), 90u);
  const DiGraph a = generate_instance(parse_instance_spec("er:n=20,p=0.2,seed=9"));
  const DiGraph b = generate_instance(parse_instance_spec("er:n=20,p=0.2,seed=9"));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, generate_instance(parse_instance_spec("er:n=20,p=0.2,seed=10")));
}

TEST(GenerateInstance, FamiliesHaveTheirShape) {
  const DiGraph grid = generate_instance(parse_instance_spec("grid:n=12,rows=3"));
  EXPECT_EQ(grid.num_edges(), 3u * 3 + 2u * 4);
  EXPECT_EQ(generate_instance(parse_instance_spec("grid:n=12,rows=3,bidir=1")).num_edges(), 34u);
  const DiGraph lay = generate_instance(parse_instance_spec("layered:n=12,p=1,layers=3"));
  EXPECT_EQ(lay.num_edges(), 2u * 16);
  for (const Edge& e : lay.edges()) EXPECT_LT(e.tail, e.head);
  const DiGraph weighted = generate_instance(parse_instance_spec("er:n=15,p=0.5,maxlen=4,seed=2"));
  bool varied = false;
  for (const Edge& e : weighted.edges()) {
    EXPECT_GE(e.length, 1);
    EXPECT_LE(e.length, 4);
    EXPECT_EQ(e.length, std::floor(e.length));
    varied |= e.length != 1;
  }
  EXPECT_TRUE(varied);
}

TEST(InstanceSpecText, ParsesAndPrints) {
  const InstanceSpec s = parse_instance_spec("er:n=30,p=0.15,maxlen=4,seed=7");
  EXPECT_EQ(s.family, Family::kErdosRenyi);
  EXPECT_EQ(s.n, 30u);
  EXPECT_EQ(s.p, 0.15);
  EXPECT_EQ(s.max_length, 4);
  EXPECT_EQ(s.seed, 7u);
  const InstanceSpec again = parse_instance_spec(to_string(s));
  EXPECT_EQ(generate_instance(again), generate_instance(s));
}

TEST(InstanceSpecText, BadSpecs) {
  for (const char* text : {"tree:n=4", "er:n=4,q=1", "er:n=x", "er:p=1.5", "er:maxlen=0", "er:n", "grid:n=12,rows=5"}) {
    try {
      generate_instance(parse_instance_spec(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadSpec) << text;
    }
  }
}

}  // namespace
}  // namespace dspanner
