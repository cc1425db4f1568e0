#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dspanner/graph.hpp"

namespace dspanner {

/*
  Edge-list text format:

    # comment (anywhere, to end of line)
    n m
    tail head length      (m lines)

  Blank lines are ignored. Lengths are decimal literals. Syntax problems throw
  Error(SyntaxError) with "line L, col C"; semantic problems come from
  DiGraph::build.
*/
DiGraph parse_graph(std::string_view text);

DiGraph read_graph_file(const std::filesystem::path& path);

/// Inverse of parse_graph; lengths use the shortest round-trip decimal form.
std::string serialize_graph(const DiGraph& g);

std::string format_length(Length value);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dspanner
