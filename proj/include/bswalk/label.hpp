#ifndef BSWALK_LABEL_HPP_
#define BSWALK_LABEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bswalk/integer.hpp"

namespace bswalk {

  // Cardinality of a <b>-orbit: a positive integer or infinity.
  class Label {
   public:
    Label() = default;  // infinity
    explicit Label(Int value);
    explicit Label(std::int64_t value) : Label(Int(value)) {}

    static Label infinity() {
      return Label();
    }

    bool is_infinite() const noexcept {
      return !_value.has_value();
    }
    bool is_finite() const noexcept {
      return _value.has_value();
    }
    // Precondition: is_finite().
    Int const& value() const {
      return *_value;
    }

    bool operator==(Label const&) const = default;
    // Finite labels ordered by value, infinity last.
    bool operator<(Label const& other) const;

   private:
    std::optional<Int> _value;
  };

  // N ^ k = gcd(N, k), with infinity ^ k = |k|.
  std::int64_t wedge(Label const& label, std::int64_t k);

  std::string to_string(Label const& label);
  // "inf" or a positive integer.
  Label parse_label(std::string_view text);

}  // namespace bswalk

#endif  // BSWALK_LABEL_HPP_
