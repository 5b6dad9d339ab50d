#include "xlqe/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>

namespace xlqe {

namespace {

bool parse_index(std::string_view text, std::size_t& out) {
  if (text.empty() || text.front() == '-' || text.front() == '+') return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

AlignmentSet parse_pharaoh(std::string_view line) {
  AlignmentSet result;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !is_space(line[end])) ++end;
    const std::string_view token = line.substr(pos, end - pos);
    pos = end;

    const auto dash = token.find('-');
    AlignmentLink link;
    if (dash == std::string_view::npos || !parse_index(token.substr(0, dash), link.src) ||
        !parse_index(token.substr(dash + 1), link.mt)) {
      throw InvalidArgument("malformed alignment token \"" + std::string(token) + "\"");
    }
    result.insert(link);
  }
  return result;
}

std::string to_pharaoh(const AlignmentSet& align) {
  std::string out;
  for (const auto& link : align) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(link.src);
    out.push_back('-');
    out += std::to_string(link.mt);
  }
  return out;
}

AlignmentSet symmetrize(const AlignmentSet& forward, const AlignmentSet& backward,
                        SymmetrizeMode mode) {
  AlignmentSet out;
  if (mode == SymmetrizeMode::Union) {
    std::set_union(forward.begin(), forward.end(), backward.begin(), backward.end(),
                   std::inserter(out, out.end()));
  } else {
    std::set_intersection(forward.begin(), forward.end(), backward.begin(), backward.end(),
                          std::inserter(out, out.end()));
  }
  return out;
}

SymmetrizeMode parse_symmetrize_mode(std::string_view name) {
  if (name == "union") return SymmetrizeMode::Union;
  if (name == "intersection") return SymmetrizeMode::Intersection;
  throw InvalidArgument("unknown symmetrization mode \"" + std::string(name) + "\"");
}

}  // namespace xlqe
