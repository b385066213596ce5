#ifndef BSWALK_INTEGER_HPP_
#define BSWALK_INTEGER_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bswalk {

  // Exponents and orbit offsets grow geometrically under rewriting, so every
  // exact quantity in the library is an arbitrary-precision integer.
  using Int = boost::multiprecision::cpp_int;

  // Representative of x mod |modulus| in [0, |modulus|).
  Int floor_mod(Int const& x, Int const& modulus);

  // Same, for the common case of a machine-sized modulus.
  std::int64_t floor_mod(Int const& x, std::int64_t modulus);

  Int gcd(Int a, Int b);

  // Multiplicative inverse of a modulo mod (mod >= 1, gcd(a, mod) == 1).
  Int inverse_mod(Int const& a, Int const& mod);

  // p-adic valuation |x|_p of a nonzero integer.
  int valuation(Int x, std::int64_t p);
  int valuation(std::int64_t x, std::int64_t p);

  // Strip from x every prime factor of `primes_of`; the result is coprime to it.
  Int strip_common_primes(Int x, Int const& primes_of);

  std::vector<std::int64_t> prime_factors(std::int64_t x);

  std::string to_string(Int const& x);

  // Parses an optionally signed decimal integer; throws ParseError.
  Int parse_int(std::string_view text);

}  // namespace bswalk

#endif  // BSWALK_INTEGER_HPP_
