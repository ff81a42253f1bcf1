#pragma once

#include <cstdint>

namespace busp {

// One hit of the search: n divides s2 = sigma_bu(s1), s1 = sigma_bu(n), and
// s2 = k * n.
struct SearchRecord {
  std::uint64_t n = 0;
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
  std::uint32_t k = 0;

  friend bool operator==(const SearchRecord&, const SearchRecord&) = default;
};

}  // namespace busp
