#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace murmur {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// num/den rendered with `places` decimals, rounding half to even. Exact.
inline std::string format_rational(std::int64_t num, std::uint64_t den, int places) {
  const bool negative = num < 0;
  unsigned __int128 n = negative ? static_cast<unsigned __int128>(-(static_cast<__int128>(num)))
                                 : static_cast<unsigned __int128>(num);
  unsigned __int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  n *= scale;
  unsigned __int128 q = n / den;
  const unsigned __int128 r = n % den;
  if (2 * r > den || (2 * r == den && (q & 1))) ++q;
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(q % 10)));
    q /= 10;
  } while (q != 0);
  while (static_cast<int>(digits.size()) <= places) digits.insert(digits.begin(), '0');
  std::string out;
  const bool zero = digits.find_first_not_of('0') == std::string::npos;
  if (negative && !zero) out += '-';
  out += digits.substr(0, digits.size() - static_cast<std::size_t>(places));
  if (places > 0) out += '.' + digits.substr(digits.size() - static_cast<std::size_t>(places));
  return out;
}

}  // namespace murmur
