#include "bswalk/words.hpp"

#include <cctype>

#include "bswalk/errors.hpp"

namespace bswalk {

  Params::Params(std::int64_t m, std::int64_t n) : _m(m), _n(n) {
    if (abs_m() < 2 || abs_n() < 2) {
      throw BadParams("BS(m,n) requires |m| >= 2 and |n| >= 2, got m = "
                      + std::to_string(m) + ", n = " + std::to_string(n));
    }
  }

  Letter inverse(Letter x) noexcept {
    switch (x) {
      case Letter::b:
        return Letter::B;
      case Letter::B:
        return Letter::b;
      case Letter::t:
        return Letter::T;
      default:
        return Letter::t;
    }
  }

  char to_char(Letter x) noexcept {
    constexpr char chars[] = {'b', 'B', 't', 'T'};
    return chars[static_cast<int>(x)];
  }

  bool is_t(Letter x) noexcept {
    return x == Letter::t || x == Letter::T;
  }

  int sign(Letter x) noexcept {
    return (x == Letter::b || x == Letter::t) ? 1 : -1;
  }

  Word inverse(Word const& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& x : out) {
      x = inverse(x);
    }
    return out;
  }

  std::string to_string(Word const& w) {
    std::string out;
    out.reserve(w.size());
    for (auto x : w) {
      out.push_back(to_char(x));
    }
    return out;
  }

  Word parse_word(std::string_view text) {
    Word        out;
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '.'
          || c == '*') {
        ++i;
        continue;
      }
      Letter x;
      switch (c) {
        case 'b':
          x = Letter::b;
          break;
        case 'B':
          x = Letter::B;
          break;
        case 't':
          x = Letter::t;
          break;
        case 'T':
          x = Letter::T;
          break;
        default:
          throw ParseError("unexpected character '" + std::string(1, c)
                           + "' in word '" + std::string(text) + "'");
      }
      ++i;
      std::int64_t exponent = 1;
      if (i < text.size() && text[i] == '^') {
        std::size_t j = ++i;
        if (j < text.size() && (text[j] == '-' || text[j] == '+')) {
          ++j;
        }
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
          ++j;
        }
        Int e = parse_int(text.substr(i, j - i));
        if (abs(e) > 1'000'000) {
          throw ParseError("exponent too large in word '" + std::string(text)
                           + "'");
        }
        exponent = static_cast<std::int64_t>(e);
        i        = j;
      }
      if (exponent < 0) {
        x        = inverse(x);
        exponent = -exponent;
      }
      out.insert(out.end(), static_cast<std::size_t>(exponent), x);
    }
    return out;
  }

  std::size_t t_count(Word const& w) noexcept {
    std::size_t count = 0;
    for (auto x : w) {
      count += is_t(x) ? 1 : 0;
    }
    return count;
  }

  NormalForm NormalForm::power_of_b(Int exponent) {
    NormalForm nf;
    nf._leading = std::move(exponent);
    return nf;
  }

  void NormalForm::append_b(Params const& p, Int const& e) {
    if (_blocks.empty()) {
      _leading += e;
      return;
    }
    _blocks.back().exponent += e;
    // Push multiples of m (after t) or n (after t^-1) leftwards through t^+-1
    // using t b^m = b^n t and t^-1 b^n = b^m t^-1.
    for (std::size_t i = _blocks.size(); i-- > 0;) {
      Block&       blk     = _blocks[i];
      std::int64_t modulus = blk.sign > 0 ? p.abs_m() : p.abs_n();
      if (blk.exponent >= 0 && blk.exponent < modulus) {
        break;
      }
      std::int64_t r     = floor_mod(blk.exponent, modulus);
      Int          q     = (blk.exponent - r) / (blk.sign > 0 ? p.m() : p.n());
      Int          carry = q * (blk.sign > 0 ? p.n() : p.m());
      blk.exponent       = r;
      if (i == 0) {
        _leading += carry;
      } else {
        _blocks[i - 1].exponent += carry;
      }
    }
  }

  void NormalForm::append_t(Params const&, int sign) {
    if (!_blocks.empty() && _blocks.back().exponent == 0
        && _blocks.back().sign == -sign) {
      _blocks.pop_back();
      return;
    }
    _blocks.push_back(Block{sign, 0});
  }

  void NormalForm::append(Params const& p, Letter x) {
    if (is_t(x)) {
      append_t(p, sign(x));
    } else {
      append_b(p, Int(sign(x)));
    }
  }

  void NormalForm::append(Params const& p, Word const& w) {
    std::size_t i = 0;
    while (i < w.size()) {
      if (is_t(w[i])) {
        append_t(p, sign(w[i]));
        ++i;
        continue;
      }
      std::int64_t run = 0;
      while (i < w.size() && !is_t(w[i])) {
        run += sign(w[i]);
        ++i;
      }
      if (run != 0) {
        append_b(p, Int(run));
      }
    }
  }

  NormalForm reduce(Params const& p, Word const& w) {
    NormalForm nf;
    nf.append(p, w);
    return nf;
  }

  namespace {
    void emit_b(Word& out, Int const& e) {
      Letter x     = e < 0 ? Letter::B : Letter::b;
      Int    count = abs(e);
      if (count > 100'000'000) {
        throw BadParams("normal form exponent too large to spell: "
                        + to_string(e));
      }
      out.insert(out.end(), static_cast<std::size_t>(count), x);
    }
  }  // namespace

  Word spell(NormalForm const& nf) {
    Word out;
    emit_b(out, nf.leading());
    for (auto const& blk : nf.blocks()) {
      out.push_back(blk.sign > 0 ? Letter::t : Letter::T);
      emit_b(out, blk.exponent);
    }
    return out;
  }

  NormalForm multiply(Params const& p, NormalForm const& a, NormalForm const& b) {
    NormalForm out = a;
    out.append_b(p, b.leading());
    for (auto const& blk : b.blocks()) {
      out.append_t(p, blk.sign);
      out.append_b(p, blk.exponent);
    }
    return out;
  }

  NormalForm invert(Params const& p, NormalForm const& a) {
    NormalForm out;
    auto const& blocks = a.blocks();
    for (std::size_t i = blocks.size(); i-- > 0;) {
      out.append_b(p, -blocks[i].exponent);
      out.append_t(p, -blocks[i].sign);
    }
    out.append_b(p, -a.leading());
    return out;
  }

  std::size_t height(NormalForm const& a) noexcept {
    return a.blocks().size();
  }

  std::vector<Word> subwords(Word const& w) {
    std::vector<Word> out;
    out.reserve(w.size() + 1);
    for (std::size_t len = 0; len <= w.size(); ++len) {
      out.emplace_back(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len));
    }
    return out;
  }

  std::string to_string(NormalForm const& nf) {
    if (nf.is_identity()) {
      return "identity";
    }
    std::string out;
    auto        put = [&out](std::string piece) {
      if (!out.empty()) {
        out.push_back(' ');
      }
      out += piece;
    };
    auto put_b = [&put](Int const& e) {
      if (e == 1) {
        put("b");
      } else if (e != 0) {
        put("b^" + to_string(e));
      }
    };
    put_b(nf.leading());
    for (auto const& blk : nf.blocks()) {
      put(blk.sign > 0 ? "t" : "T");
      put_b(blk.exponent);
    }
    return out;
  }

  Word operator+(Word const& u, Word const& v) {
    Word out = u;
    out.insert(out.end(), v.begin(), v.end());
    return out;
  }

}  // namespace bswalk
