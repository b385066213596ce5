#include "bswalk/detail/text.hpp"

#include <cctype>

#include "bswalk/errors.hpp"

namespace bswalk::detail {

  std::vector<std::string> tokens(std::string_view line) {
    std::vector<std::string> out;
    std::size_t              i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
        ++j;
      }
      if (j > i) {
        out.emplace_back(line.substr(i, j - i));
      }
      i = j;
    }
    return out;
  }

  std::vector<std::string> content_lines(std::string_view text) {
    std::vector<std::string> out;
    std::size_t              start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      std::string_view line = text.substr(start, end - start);
      if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      if (!tokens(line).empty()) {
        out.emplace_back(line);
      }
      start = end + 1;
    }
    return out;
  }

  std::size_t parse_index(std::string_view text) {
    if (text.empty() || text.size() > 18) {
      throw ParseError("expected an index, got '" + std::string(text) + "'");
    }
    std::size_t value = 0;
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParseError("expected an index, got '" + std::string(text) + "'");
      }
      value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    return value;
  }

}  // namespace bswalk::detail
