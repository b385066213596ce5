#ifndef BSWALK_WORDS_HPP_
#define BSWALK_WORDS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bswalk/integer.hpp"

namespace bswalk {

  // Parameters of BS(m, n) = < b, t | t b^m t^-1 = b^n >, with |m|, |n| >= 2.
  class Params {
   public:
    Params(std::int64_t m, std::int64_t n);

    std::int64_t m() const noexcept {
      return _m;
    }
    std::int64_t n() const noexcept {
      return _n;
    }
    std::int64_t abs_m() const noexcept {
      return _m < 0 ? -_m : _m;
    }
    std::int64_t abs_n() const noexcept {
      return _n < 0 ? -_n : _n;
    }

    bool operator==(Params const&) const = default;

   private:
    std::int64_t _m;
    std::int64_t _n;
  };

  // b, b^-1, t, t^-1; the text syntax is b, B, t, T.
  enum class Letter : std::uint8_t { b, B, t, T };

  Letter inverse(Letter x) noexcept;
  char   to_char(Letter x) noexcept;
  bool   is_t(Letter x) noexcept;
  // +1 for b and t, -1 for their inverses.
  int sign(Letter x) noexcept;

  using Word = std::vector<Letter>;

  Word        inverse(Word const& w);
  std::string to_string(Word const& w);
  // Accepts letters b, B, t, T with optional exponent suffix, e.g. "tb^-3T".
  Word parse_word(std::string_view text);

  // Number of t-letters (t or t^-1) in a spelling.
  std::size_t t_count(Word const& w) noexcept;

  // One block t^sign b^exponent of a normal form.
  struct Block {
    int sign;
    Int exponent;

    bool operator==(Block const&) const = default;
  };

  // b^leading t^e1 b^n2 ... t^er b^n(r+1), where the exponent following t is
  // in [0, |m|), the one following t^-1 is in [0, |n|), and no t^e b^0 t^-e
  // occurs.  Built incrementally by right multiplication, so a NormalForm is
  // always reduced.
  class NormalForm {
   public:
    NormalForm() = default;

    static NormalForm power_of_b(Int exponent);

    Int const& leading() const noexcept {
      return _leading;
    }
    std::vector<Block> const& blocks() const noexcept {
      return _blocks;
    }
    bool is_identity() const noexcept {
      return _leading == 0 && _blocks.empty();
    }

    // Right multiplication by b^e, resp. t^sign, keeping the form reduced.
    void append_b(Params const& p, Int const& e);
    void append_t(Params const& p, int sign);
    void append(Params const& p, Letter x);
    void append(Params const& p, Word const& w);

    bool operator==(NormalForm const&) const = default;

   private:
    Int                _leading = 0;
    std::vector<Block> _blocks;
  };

  NormalForm  reduce(Params const& p, Word const& w);
  Word        spell(NormalForm const& nf);
  NormalForm  multiply(Params const& p, NormalForm const& a, NormalForm const& b);
  NormalForm  invert(Params const& p, NormalForm const& a);
  std::size_t height(NormalForm const& a) noexcept;
  // All |w| + 1 prefixes of w, shortest first.
  std::vector<Word> subwords(Word const& w);

  // "identity", or the compact spelling with exponents, e.g. "b^6 t b".
  std::string to_string(NormalForm const& nf);

  Word operator+(Word const& u, Word const& v);

}  // namespace bswalk

#endif  // BSWALK_WORDS_HPP_
