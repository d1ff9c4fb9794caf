#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace anglers {

// Permutation of {0,1,2,3}, the vertex action of a face gluing.
struct Perm4 {
  std::array<std::uint8_t, 4> img{0, 1, 2, 3};

  constexpr Perm4() = default;
  constexpr Perm4(int a, int b, int c, int d)
      : img{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
            static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {}

  constexpr int operator[](int i) const { return img[static_cast<std::size_t>(i)]; }

  constexpr bool operator==(const Perm4&) const = default;

  constexpr bool is_valid() const {
    int seen = 0;
    for (int i = 0; i < 4; ++i) {
      if (img[i] > 3) return false;
      seen |= 1 << img[i];
    }
    return seen == 0xF;
  }

  constexpr Perm4 inverse() const {
    Perm4 out;
    for (int i = 0; i < 4; ++i) out.img[img[i]] = static_cast<std::uint8_t>(i);
    return out;
  }

  // (this.then(g))[i] == g[ this[i] ]
  constexpr Perm4 then(const Perm4& g) const {
    Perm4 out;
    for (int i = 0; i < 4; ++i) out.img[i] = static_cast<std::uint8_t>(g[(*this)[i]]);
    return out;
  }

  constexpr bool is_odd() const {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (img[i] > img[j]) ++inversions;
    return (inversions & 1) != 0;
  }

  // Swaps two images; flips parity.
  constexpr Perm4 swapped(int a, int b) const {
    Perm4 out = *this;
    std::swap(out.img[a], out.img[b]);
    return out;
  }

  std::string str() const {
    return "[" + std::to_string(img[0]) + "," + std::to_string(img[1]) + "," +
           std::to_string(img[2]) + "," + std::to_string(img[3]) + "]";
  }
};

}  // namespace anglers
