#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "erl/bag.hpp"
#include "erl/epidemic.hpp"
#include "erl/error.hpp"

namespace erl {

inline std::string format_time(double t) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), t);
  return std::string(buf.data(), res.ptr);
}

/// CSV with header `time,kind,node`. Times use the shortest round-trip form.
inline void write_event_csv(std::ostream& os, const EventLog& log) {
  os << "time,kind,node\n";
  for (const Event& e : log.events) os << format_time(e.time) << ',' << to_string(e.kind) << ',' << e.node << '\n';
}

/// Parses events only; the caller supplies the initial bag. The final bag is
/// recomputed by toggling, so consistency still needs replay against a graph.
inline EventLog read_event_csv(std::istream& is, const Bag& initial) {
  EventLog log;
  log.initial_infected = initial;
  Bag state = initial;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != "time,kind,node") throw ParseError(line_no, "expected header 'time,kind,node'");
      header = false;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ParseError(line_no, "expected three fields");
    Event e;
    const std::string_view sv(line);
    const auto t = sv.substr(0, c1);
    if (std::from_chars(t.data(), t.data() + t.size(), e.time).ptr != t.data() + t.size()) {
      throw ParseError(line_no, "bad time '" + std::string(t) + "'");
    }
    const auto kind = sv.substr(c1 + 1, c2 - c1 - 1);
    if (kind == "INFECTION") {
      e.kind = EventKind::Infection;
    } else if (kind == "RECOVERY") {
      e.kind = EventKind::Recovery;
    } else {
      throw ParseError(line_no, "bad kind '" + std::string(kind) + "'");
    }
    const auto node = sv.substr(c2 + 1);
    if (std::from_chars(node.data(), node.data() + node.size(), e.node).ptr != node.data() + node.size()) {
      throw ParseError(line_no, "bad node '" + std::string(node) + "'");
    }
    if (e.node >= state.universe()) throw ParseError(line_no, "node " + std::to_string(e.node) + " out of range");
    state.toggle(e.node);
    log.events.push_back(e);
  }
  log.final_infected = state;
  return log;
}

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 4);
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
  put_u32(os, static_cast<std::uint32_t>(v));
  put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw InvalidInputError("truncated event log");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint64_t get_u64(std::istream& is) {
  const std::uint64_t lo = get_u32(is);
  return lo | (static_cast<std::uint64_t>(get_u32(is)) << 32);
}

inline void put_bag(std::ostream& os, const Bag& b) {
  put_u32(os, static_cast<std::uint32_t>(b.size()));
  b.for_each([&](NodeId v) { put_u32(os, v); });
}

inline Bag get_bag(std::istream& is, std::size_t n) {
  const std::uint32_t count = get_u32(is);
  if (count > n) throw InvalidInputError("event log bag larger than its universe");
  std::vector<NodeId> nodes(count);
  for (auto& v : nodes) v = get_u32(is);
  return Bag::from_nodes(n, nodes);
}

}  // namespace detail

// "EVL1", u32 n, initial bag, final bag (u32 count + ids), u64 event count,
// then per event f64 time bits, u8 kind, u32 node; all little-endian.
inline void write_event_binary(std::ostream& os, const EventLog& log) {
  os.write("EVL1", 4);
  detail::put_u32(os, static_cast<std::uint32_t>(log.initial_infected.universe()));
  detail::put_bag(os, log.initial_infected);
  detail::put_bag(os, log.final_infected);
  detail::put_u64(os, log.events.size());
  for (const Event& e : log.events) {
    detail::put_u64(os, std::bit_cast<std::uint64_t>(e.time));
    os.put(static_cast<char>(e.kind));
    detail::put_u32(os, e.node);
  }
}

inline EventLog read_event_binary(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), 4) || std::string_view(magic.data(), 4) != "EVL1") {
    throw InvalidInputError("not an EVL1 event log");
  }
  const std::size_t n = detail::get_u32(is);
  EventLog log;
  log.initial_infected = detail::get_bag(is, n);
  log.final_infected = detail::get_bag(is, n);
  const std::uint64_t count = detail::get_u64(is);
  log.events.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
  for (std::uint64_t i = 0; i < count; ++i) {
    Event e;
    e.time = std::bit_cast<double>(detail::get_u64(is));
    const int kind = is.get();
    if (kind != 0 && kind != 1) throw InvalidInputError("bad event kind at event " + std::to_string(i));
    e.kind = static_cast<EventKind>(kind);
    e.node = detail::get_u32(is);
    log.events.push_back(e);
  }
  return log;
}

}  // namespace erl
