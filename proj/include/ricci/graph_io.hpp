#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ricci/graph.hpp"

namespace ricci {

struct LoadedGraph {
  Graph graph;
  WeightVector weights;
};

// Parses either format below; a document whose first non-blank character is
// '{' is read as JSON, anything else as an edge list.
//
// Edge list: one edge per line, "u v [weight]", whitespace separated, '#'
// starts a comment. Vertex tokens are arbitrary labels numbered in order of
// first appearance. Missing weights default to 1.0.
//
// JSON:
//   {"vertices": ["a", "b", "c"],
//    "edges": [{"u": "a", "v": "b", "w": 2.0}, {"u": "b", "v": "c"}]}
// Labels may be strings or integers. "vertices" is optional; when given it
// fixes the vertex order and every edge endpoint must appear in it.
//
// Throws ParseError for malformed input, ValidationError for a graph that is
// empty, disconnected or not simple.
LoadedGraph load_graph(std::string_view source);
LoadedGraph load_graph_file(const std::filesystem::path& path);

// Serializes in the JSON format accepted by load_graph.
std::string to_json_document(const Graph& g, const WeightVector& w);

// "edge_index value" per line, '#' comments. Every edge must be listed once.
std::vector<double> parse_edge_values(std::string_view source, std::size_t edge_count);

}  // namespace ricci
