#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "erl/error.hpp"
#include "erl/graph.hpp"
#include "erl/rng.hpp"

namespace erl {

enum class GraphKind { Line, Cycle, Star, Complete, Hypercube, Grid, RandomRegular };

inline std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Line: return "line";
    case GraphKind::Cycle: return "cycle";
    case GraphKind::Star: return "star";
    case GraphKind::Complete: return "complete";
    case GraphKind::Hypercube: return "hypercube";
    case GraphKind::Grid: return "grid";
    case GraphKind::RandomRegular: return "random_regular";
  }
  return "unknown";
}

inline std::optional<GraphKind> graph_kind_from_string(std::string_view name) {
  for (const auto k : {GraphKind::Line, GraphKind::Cycle, GraphKind::Star, GraphKind::Complete, GraphKind::Hypercube,
                       GraphKind::Grid, GraphKind::RandomRegular}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

namespace detail {

inline Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  // Pairing model, restarted until the pairing is simple.
  SplitMix64 rng(seed);
  std::vector<NodeId> stubs;
  stubs.reserve(n * d);
  constexpr int kAttempts = 20000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    stubs.clear();
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < d; ++k) stubs.push_back(static_cast<NodeId>(v));
    }
    for (std::size_t i = stubs.size(); i > 1; --i) {
      std::swap(stubs[i - 1], stubs[rng.below(i)]);
    }
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
      NodeId u = stubs[i];
      NodeId v = stubs[i + 1];
      if (u == v) {
        simple = false;
        break;
      }
      if (u > v) std::swap(u, v);
      edges.push_back({u, v});
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    return Graph::from_edges(n, std::move(edges));
  }
  throw GenerationError("random_regular: no simple pairing found for n = " + std::to_string(n) +
                        ", d = " + std::to_string(d));
}

inline void require_params(GraphKind kind, const std::vector<std::int64_t>& params, std::size_t count) {
  if (params.size() != count) {
    throw GenerationError(std::string(to_string(kind)) + " takes " + std::to_string(count) + " parameter(s), got " +
                          std::to_string(params.size()));
  }
}

}  // namespace detail

/// Builds a graph of the given family. `seed` only affects random_regular.
/// The degree bound of the result is its exact maximum degree.
///
///   line:n  cycle:n  star:leaves  complete:n  hypercube:d  grid:rows,cols  random_regular:n,d
inline Graph generate(GraphKind kind, const std::vector<std::int64_t>& params, std::uint64_t seed = 0) {
  for (const auto p : params) {
    if (p < 0) throw GenerationError("negative generator parameter");
  }
  std::vector<Edge> edges;
  switch (kind) {
    case GraphKind::Line: {
      detail::require_params(kind, params, 1);
      const auto n = static_cast<std::size_t>(params[0]);
      if (n < 1) throw GenerationError("line needs n >= 1");
      for (std::size_t v = 0; v + 1 < n; ++v) edges.push_back({NodeId(v), NodeId(v + 1)});
      return Graph::from_edges(n, std::move(edges));
    }
    case GraphKind::Cycle: {
      detail::require_params(kind, params, 1);
      const auto n = static_cast<std::size_t>(params[0]);
      if (n < 3) throw GenerationError("cycle needs n >= 3");
      for (std::size_t v = 0; v < n; ++v) edges.push_back({NodeId(v), NodeId((v + 1) % n)});
      return Graph::from_edges(n, std::move(edges));
    }
    case GraphKind::Star: {
      detail::require_params(kind, params, 1);
      const auto leaves = static_cast<std::size_t>(params[0]);
      for (std::size_t v = 1; v <= leaves; ++v) edges.push_back({0, NodeId(v)});
      return Graph::from_edges(leaves + 1, std::move(edges));
    }
    case GraphKind::Complete: {
      detail::require_params(kind, params, 1);
      const auto n = static_cast<std::size_t>(params[0]);
      if (n < 1) throw GenerationError("complete needs n >= 1");
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) edges.push_back({NodeId(u), NodeId(v)});
      }
      return Graph::from_edges(n, std::move(edges));
    }
    case GraphKind::Hypercube: {
      detail::require_params(kind, params, 1);
      const auto d = static_cast<std::size_t>(params[0]);
      if (d > 20) throw GenerationError("hypercube dimension too large");
      const std::size_t n = std::size_t{1} << d;
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t k = 0; k < d; ++k) {
          const std::size_t v = u ^ (std::size_t{1} << k);
          if (u < v) edges.push_back({NodeId(u), NodeId(v)});
        }
      }
      return Graph::from_edges(n, std::move(edges));
    }
    case GraphKind::Grid: {
      detail::require_params(kind, params, 2);
      const auto rows = static_cast<std::size_t>(params[0]);
      const auto cols = static_cast<std::size_t>(params[1]);
      if (rows < 1 || cols < 1) throw GenerationError("grid needs rows, cols >= 1");
      const auto id = [cols](std::size_t r, std::size_t c) { return NodeId(r * cols + c); };
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
          if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
        }
      }
      return Graph::from_edges(rows * cols, std::move(edges));
    }
    case GraphKind::RandomRegular: {
      detail::require_params(kind, params, 2);
      const auto n = static_cast<std::size_t>(params[0]);
      const auto d = static_cast<std::size_t>(params[1]);
      if (n < 1) throw GenerationError("random_regular needs n >= 1");
      if (d > n - 1) throw GenerationError("random_regular needs d <= n - 1");
      if ((d * n) % 2 != 0) throw GenerationError("random_regular needs d * n even");
      return detail::random_regular(n, d, seed);
    }
  }
  throw GenerationError("unknown graph kind");
}

/// Parses "kind:p1,p2,..." (e.g. "random_regular:10,3") and generates it.
inline Graph generate_from_spec(std::string_view spec, std::uint64_t seed = 0) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const auto kind = graph_kind_from_string(name);
  if (!kind) throw GenerationError("unknown graph kind '" + std::string(name) + "'");
  std::vector<std::int64_t> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (true) {
      const auto comma = rest.find(',');
      const std::string token(rest.substr(0, comma));
      std::size_t used = 0;
      std::int64_t value = 0;
      try {
        value = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = std::string::npos;
      }
      if (token.empty() || used != token.size()) {
        throw GenerationError("bad generator parameter '" + token + "' in '" + std::string(spec) + "'");
      }
      params.push_back(value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  return generate(*kind, params, seed);
}

}  // namespace erl
