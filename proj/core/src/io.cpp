#include "dspanner/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "dspanner/error.hpp"

namespace dspanner {

namespace {

struct Token {
  std::string_view text;
  std::size_t col = 0;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

[[noreturn]] void syntax_error(std::size_t line, std::size_t col, const std::string& what) {
  throw Error(ErrorCode::kSyntaxError,
              "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what);
}

std::uint64_t parse_index(const Token& t, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  const char* end = t.text.data() + t.text.size();
  auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    syntax_error(line, t.col, std::string("expected a nonnegative integer ") + what + ", got '" +
                                  std::string(t.text) + "'");
  }
  return v;
}

double parse_length(const Token& t, std::size_t line) {
  double v = 0.0;
  const char* begin = t.text.data();
  const char* end = begin + t.text.size();
  // from_chars rejects a leading '+'; accept it for friendliness.
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v, std::chars_format::general);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    syntax_error(line, t.col, "expected a decimal length, got '" + std::string(t.text) + "'");
  }
  return v;
}

}  // namespace

DiGraph parse_graph(std::string_view text) {
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::size_t header_line = 0;
  std::vector<Edge> edges;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (!have_header) {
      if (tokens.size() != 2) {
        syntax_error(line_no, tokens.front().col, "header must be 'n m'");
      }
      n = parse_index(tokens[0], line_no, "vertex count");
      m = parse_index(tokens[1], line_no, "edge count");
      if (n > 0xffffffffULL || m > 0xffffffffULL) syntax_error(line_no, 1, "header counts too large");
      have_header = true;
      header_line = line_no;
      edges.reserve(m);
      continue;
    }
    if (edges.size() == m) {
      syntax_error(line_no, tokens.front().col,
                   "more edge lines than the " + std::to_string(m) + " declared on line " +
                       std::to_string(header_line));
    }
    if (tokens.size() != 3) {
      syntax_error(line_no, tokens.front().col, "edge line must be 'tail head length'");
    }
    const std::uint64_t tail = parse_index(tokens[0], line_no, "tail");
    const std::uint64_t head = parse_index(tokens[1], line_no, "head");
    const double length = parse_length(tokens[2], line_no);
    if (tail > 0xffffffffULL || head > 0xffffffffULL) {
      throw Error(ErrorCode::kIndexOutOfRange, "line " + std::to_string(line_no) + ": vertex index too large");
    }
    edges.push_back({static_cast<VertexId>(tail), static_cast<VertexId>(head), length});
  }
  if (!have_header) syntax_error(line_no, 1, "missing 'n m' header");
  if (edges.size() != m) {
    syntax_error(line_no, 1,
                 "header on line " + std::to_string(header_line) + " declares " + std::to_string(m) +
                     " edges but " + std::to_string(edges.size()) + " were found");
  }
  return DiGraph::build(n, std::move(edges));
}

DiGraph read_graph_file(const std::filesystem::path& path) { return parse_graph(read_text_file(path)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_length(Length value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string serialize_graph(const DiGraph& g) {
  std::string out = std::to_string(g.num_vertices()) + " " + std::to_string(g.num_edges()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.tail) + " " + std::to_string(e.head) + " " + format_length(e.length) + "\n";
  }
  return out;
}

}  // namespace dspanner
