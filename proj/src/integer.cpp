#include "bswalk/integer.hpp"

#include <cctype>

#include "bswalk/errors.hpp"

namespace bswalk {

  Int floor_mod(Int const& x, Int const& modulus) {
    Int mod = abs(modulus);
    Int r   = x % mod;
    if (r < 0) {
      r += mod;
    }
    return r;
  }

  std::int64_t floor_mod(Int const& x, std::int64_t modulus) {
    std::int64_t mod = modulus < 0 ? -modulus : modulus;
    if (x >= 0 && x < mod) {
      return static_cast<std::int64_t>(x);
    }
    auto r = static_cast<std::int64_t>(x % mod);
    return r < 0 ? r + mod : r;
  }

  Int gcd(Int a, Int b) {
    return boost::multiprecision::gcd(abs(a), abs(b));
  }

  Int inverse_mod(Int const& a, Int const& mod) {
    if (mod == 1) {
      return 0;
    }
    Int r0 = mod, r1 = floor_mod(a, mod);
    if (r1 == 1) {
      return 1;
    }
    Int s0 = 0, s1 = 1;
    while (r1 != 0) {
      Int q  = r0 / r1;
      Int r2 = r0 - q * r1;
      r0     = r1;
      r1     = r2;
      Int s2 = s0 - q * s1;
      s0     = s1;
      s1     = s2;
    }
    return floor_mod(s0, mod);
  }

  int valuation(Int x, std::int64_t p) {
    x = abs(x);
    int v = 0;
    while (x != 0 && x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  }

  int valuation(std::int64_t x, std::int64_t p) {
    return valuation(Int(x), p);
  }

  Int strip_common_primes(Int x, Int const& primes_of) {
    x   = abs(x);
    Int g = gcd(x, primes_of);
    while (g > 1) {
      x /= g;
      g = gcd(x, g);
    }
    return x;
  }

  std::vector<std::int64_t> prime_factors(std::int64_t x) {
    std::vector<std::int64_t> out;
    x = x < 0 ? -x : x;
    for (std::int64_t p = 2; p * p <= x; ++p) {
      if (x % p == 0) {
        out.push_back(p);
        while (x % p == 0) {
          x /= p;
        }
      }
    }
    if (x > 1) {
      out.push_back(x);
    }
    return out;
  }

  std::string to_string(Int const& x) {
    return x.str();
  }

  Int parse_int(std::string_view text) {
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      ++i;
    }
    if (i == text.size()) {
      throw ParseError("expected an integer, got '" + std::string(text) + "'");
    }
    for (std::size_t j = i; j < text.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
        throw ParseError("expected an integer, got '" + std::string(text)
                         + "'");
      }
    }
    Int value(std::string(text.substr(i)));
    return text[0] == '-' ? Int(-value) : value;
  }

}  // namespace bswalk
