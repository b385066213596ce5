#ifndef BSWALK_ERRORS_HPP_
#define BSWALK_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bswalk {

  // Base of every error raised by the library. `kind()` is the short
  // machine-readable tag the CLI prints in front of the message.
  class Error : public std::runtime_error {
   public:
    Error(std::string kind, std::string const& what)
        : std::runtime_error(what), _kind(std::move(kind)) {}

    std::string const& kind() const noexcept {
      return _kind;
    }

   private:
    std::string _kind;
  };

#define BSWALK_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(std::string const& what) : Error(#Name, what) {} \
  };

  BSWALK_DEFINE_ERROR(ParseError)
  BSWALK_DEFINE_ERROR(BadParams)
  BSWALK_DEFINE_ERROR(IoError)
  BSWALK_DEFINE_ERROR(InvalidGraph)
  BSWALK_DEFINE_ERROR(NotConnected)
  BSWALK_DEFINE_ERROR(PhenotypeMismatch)
  BSWALK_DEFINE_ERROR(MissingRoot)
  BSWALK_DEFINE_ERROR(AlreadySaturated)
  BSWALK_DEFINE_ERROR(HypothesesNotMet)

#undef BSWALK_DEFINE_ERROR

  // A word left the domain of a partial action; `prefix_length` is the
  // number of letters applied successfully before the failing one.
  class Undefined : public Error {
   public:
    explicit Undefined(std::size_t prefix_length)
        : Error("Undefined",
                "letter " + std::to_string(prefix_length + 1)
                    + " is not defined"),
          _prefix(prefix_length) {}

    std::size_t prefix_length() const noexcept {
      return _prefix;
    }

   private:
    std::size_t _prefix;
  };

  class HypothesisViolated : public Error {
   public:
    explicit HypothesisViolated(std::size_t index, std::string const& why)
        : Error("HypothesisViolated",
                "hypothesis violated at step " + std::to_string(index) + ": "
                    + why),
          _index(index) {}

    std::size_t index() const noexcept {
      return _index;
    }

   private:
    std::size_t _index;
  };

}  // namespace bswalk

#endif  // BSWALK_ERRORS_HPP_
