#pragma once

#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "erl/error.hpp"
#include "erl/graph.hpp"

namespace erl {

enum class GraphFormat { EdgeList, Json };

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<std::uint64_t> to_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline Graph parse_edge_list(std::string_view text) {
  std::optional<std::size_t> n;
  std::optional<int> degree_bound;
  std::vector<Edge> edges;
  std::map<Edge, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      // "# degree_bound: D" carries a declared bound above the max degree.
      const auto comment = trim(line.substr(hash + 1));
      constexpr std::string_view kKey = "degree_bound:";
      if (comment.substr(0, kKey.size()) == kKey) {
        const auto value = to_uint(trim(comment.substr(kKey.size())));
        if (!value) throw ParseError(line_no, "bad degree_bound directive");
        degree_bound = static_cast<int>(*value);
      }
      line = line.substr(0, hash);
    }
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (!n) {
      const auto value = tokens.size() == 1 ? to_uint(tokens[0]) : std::nullopt;
      if (!value || *value == 0) throw ParseError(line_no, "expected node count n >= 1");
      n = static_cast<std::size_t>(*value);
      continue;
    }
    if (tokens.size() != 2) throw ParseError(line_no, "expected 'u v'");
    const auto u = to_uint(tokens[0]);
    const auto v = to_uint(tokens[1]);
    if (!u || !v) throw ParseError(line_no, "node ids must be nonnegative integers");
    if (*u >= *n || *v >= *n) throw ParseError(line_no, "node id out of range for n = " + std::to_string(*n));
    if (*u == *v) throw ParseError(line_no, "self-loop at node " + std::to_string(*u));
    Edge e{static_cast<NodeId>(std::min(*u, *v)), static_cast<NodeId>(std::max(*u, *v))};
    if (const auto [it, inserted] = seen.emplace(e, line_no); !inserted) {
      throw ParseError(line_no, "duplicate edge (first on line " + std::to_string(it->second) + ")");
    }
    edges.push_back(e);
  }
  if (!n) throw ParseError(line_no, "missing node count");
  try {
    return Graph::from_edges(*n, std::move(edges), degree_bound);
  } catch (const GraphError& e) {
    throw ParseError(0, e.what());
  }
}

inline Graph parse_json_graph(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(0, "graph JSON must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_unsigned()) throw ParseError(0, "field 'n' must be a positive integer");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw ParseError(0, "field 'edges' must be an array");
  const auto n = doc["n"].get<std::size_t>();
  std::optional<int> degree_bound;
  if (doc.contains("degree_bound") && !doc["degree_bound"].is_null()) {
    if (!doc["degree_bound"].is_number_unsigned()) throw ParseError(0, "field 'degree_bound' must be an integer");
    degree_bound = doc["degree_bound"].get<int>();
  }
  std::vector<Edge> edges;
  std::size_t index = 0;
  for (const auto& item : doc["edges"]) {
    const std::string where = "edges[" + std::to_string(index++) + "]";
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() || !item[1].is_number_unsigned()) {
      throw ParseError(0, where + " must be a pair of node ids");
    }
    edges.push_back({item[0].get<NodeId>(), item[1].get<NodeId>()});
  }
  try {
    return Graph::from_edges(n, std::move(edges), degree_bound);
  } catch (const GraphError& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace detail

/// Parses either text format; JSON is recognized by a leading '{'.
inline Graph parse_graph(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return detail::parse_json_graph(text);
  return detail::parse_edge_list(text);
}

inline std::string serialize_graph(const Graph& g, GraphFormat format = GraphFormat::EdgeList) {
  if (format == GraphFormat::Json) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
    const nlohmann::json doc = {{"n", g.node_count()}, {"edges", edges}, {"degree_bound", g.degree_bound()}};
    return doc.dump() + "\n";
  }
  std::ostringstream os;
  if (g.degree_bound() != g.max_degree()) os << "# degree_bound: " << g.degree_bound() << "\n";
  os << g.node_count() << "\n";
  for (const auto& e : g.edges()) os << e.u << " " << e.v << "\n";
  return os.str();
}

}  // namespace erl
