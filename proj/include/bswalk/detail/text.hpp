#ifndef BSWALK_DETAIL_TEXT_HPP_
#define BSWALK_DETAIL_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace bswalk::detail {

  // Whitespace-separated tokens of one line.
  std::vector<std::string> tokens(std::string_view line);

  // Lines of a text, with '#' comments and blank lines dropped.
  std::vector<std::string> content_lines(std::string_view text);

  std::size_t parse_index(std::string_view text);

}  // namespace bswalk::detail

#endif  // BSWALK_DETAIL_TEXT_HPP_
