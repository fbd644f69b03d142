#include "ricci/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "ricci/errors.hpp"

namespace ricci {

namespace {

using nlohmann::json;

class LabelTable {
 public:
  Vertex intern(const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, labels_.size());
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  std::optional<Vertex> find(const std::string& label) const {
    const auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return labels_.size(); }
  std::vector<std::string> release() { return std::move(labels_); }

 private:
  std::map<std::string, Vertex> index_;
  std::vector<std::string> labels_;
};

std::optional<double> parse_double(std::string_view token) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string_view strip_comment(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  return tokens;
}

LoadedGraph load_edge_list(std::string_view source) {
  LabelTable labels;
  std::vector<Edge> edges;
  std::vector<double> weights;
  std::size_t line_no = 0;
  std::istringstream in{std::string(source)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto tokens = split_ws(strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3)
      throw ParseError("expected 'u v [weight]', got " + std::to_string(tokens.size()) + " fields",
                       line_no);
    double w = 1.0;
    if (tokens.size() == 3) {
      const auto parsed = parse_double(tokens[2]);
      if (!parsed) throw ParseError("weight '" + tokens[2] + "' is not a number", line_no);
      w = *parsed;
    }
    const Vertex u = labels.intern(tokens[0]);
    const Vertex v = labels.intern(tokens[1]);
    if (u == v) throw ValidationError("line " + std::to_string(line_no) + ": self-loop at " + tokens[0]);
    edges.push_back({u, v});
    weights.push_back(w);
  }
  if (edges.empty()) throw ValidationError("graph has no edges");
  const std::size_t n = labels.size();
  Graph g(n, std::move(edges), labels.release());
  return {std::move(g), WeightVector(std::move(weights))};
}

std::string label_of(const json& node, const char* field) {
  if (node.is_string()) return node.get<std::string>();
  if (node.is_number_integer()) return std::to_string(node.get<long long>());
  throw ParseError(std::string("field '") + field + "' must be a string or integer label");
}

LoadedGraph load_json(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph document must be a JSON object");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw ParseError("graph document needs an 'edges' array");

  LabelTable labels;
  const bool fixed_vertices = doc.contains("vertices");
  if (fixed_vertices) {
    if (!doc["vertices"].is_array()) throw ParseError("'vertices' must be an array");
    for (const auto& v : doc["vertices"]) {
      const auto label = label_of(v, "vertices");
      if (labels.find(label)) throw ValidationError("duplicate vertex label '" + label + "'");
      labels.intern(label);
    }
  }

  std::vector<Edge> edges;
  std::vector<double> weights;
  std::size_t record = 0;
  for (const auto& e : doc["edges"]) {
    ++record;
    const std::string where = "edge record " + std::to_string(record);
    if (!e.is_object() || !e.contains("u") || !e.contains("v"))
      throw ParseError(where + " needs fields 'u' and 'v'");
    const auto resolve = [&](const char* field) {
      const auto label = label_of(e[field], field);
      if (fixed_vertices) {
        const auto found = labels.find(label);
        if (!found) throw ParseError(where + " references unknown vertex '" + label + "'");
        return *found;
      }
      return labels.intern(label);
    };
    const Vertex u = resolve("u");
    const Vertex v = resolve("v");
    double w = 1.0;
    if (e.contains("w")) {
      if (!e["w"].is_number()) throw ParseError(where + ": 'w' must be a number");
      w = e["w"].get<double>();
    }
    edges.push_back({u, v});
    weights.push_back(w);
  }
  if (labels.size() == 0) throw ValidationError("graph has no vertices");
  const std::size_t n = labels.size();
  Graph g(n, std::move(edges), labels.release());
  return {std::move(g), WeightVector(std::move(weights))};
}

}  // namespace

LoadedGraph load_graph(std::string_view source) {
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && source[first] == '{') return load_json(source);
  return load_edge_list(source);
}

LoadedGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_graph(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string to_json_document(const Graph& g, const WeightVector& w) {
  check_compatible(g, w);
  json doc;
  doc["vertices"] = json::array();
  for (Vertex x = 0; x < g.vertex_count(); ++x) doc["vertices"].push_back(g.label(x));
  doc["edges"] = json::array();
  for (EdgeIndex i = 0; i < g.edge_count(); ++i)
    doc["edges"].push_back({{"u", g.label(g.edge(i).u)}, {"v", g.label(g.edge(i).v)}, {"w", w[i]}});
  return doc.dump(2);
}

std::vector<double> parse_edge_values(std::string_view source, std::size_t edge_count) {
  std::vector<std::optional<double>> values(edge_count);
  std::size_t line_no = 0;
  std::istringstream in{std::string(source)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto tokens = split_ws(strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError("expected 'edge_index value'", line_no);
    std::size_t index = 0;
    const auto [ptr, ec] =
        std::from_chars(tokens[0].data(), tokens[0].data() + tokens[0].size(), index);
    if (ec != std::errc() || ptr != tokens[0].data() + tokens[0].size())
      throw ParseError("edge index '" + tokens[0] + "' is not a non-negative integer", line_no);
    if (index >= edge_count) throw ParseError("edge index " + tokens[0] + " out of range", line_no);
    const auto value = parse_double(tokens[1]);
    if (!value) throw ParseError("value '" + tokens[1] + "' is not a number", line_no);
    if (values[index]) throw ParseError("edge index " + tokens[0] + " listed twice", line_no);
    values[index] = *value;
  }
  std::vector<double> out(edge_count);
  for (std::size_t i = 0; i < edge_count; ++i) {
    if (!values[i]) throw ParseError("edge index " + std::to_string(i) + " has no value");
    out[i] = *values[i];
  }
  return out;
}

}  // namespace ricci
