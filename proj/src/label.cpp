#include "bswalk/label.hpp"

#include "bswalk/errors.hpp"

namespace bswalk {

  Label::Label(Int value) : _value(std::move(value)) {
    if (*_value < 1) {
      throw BadParams("labels are positive integers or inf, got "
                      + to_string(*_value));
    }
  }

  bool Label::operator<(Label const& other) const {
    if (is_infinite()) {
      return false;
    }
    return other.is_infinite() || value() < other.value();
  }

  std::int64_t wedge(Label const& label, std::int64_t k) {
    std::int64_t ak = k < 0 ? -k : k;
    if (label.is_infinite()) {
      return ak;
    }
    return static_cast<std::int64_t>(gcd(label.value(), Int(ak)));
  }

  std::string to_string(Label const& label) {
    return label.is_infinite() ? std::string("inf") : to_string(label.value());
  }

  Label parse_label(std::string_view text) {
    if (text == "inf" || text == "oo" || text == "infinity") {
      return Label::infinity();
    }
    Int v = parse_int(text);
    if (v < 1) {
      throw ParseError("labels are positive integers or inf, got '"
                       + std::string(text) + "'");
    }
    return Label(v);
  }

}  // namespace bswalk
