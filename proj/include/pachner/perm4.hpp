#pragma once

#include <array>
#include <cstdint>
#include <ostream>

#include "pachner/error.hpp"

namespace pachner {

namespace detail {

struct Perm4Tables {
  std::array<std::array<std::uint8_t, 4>, 24> image{};
  std::array<std::array<std::uint8_t, 24>, 24> compose{};
  std::array<std::uint8_t, 24> inverse{};
  // code of (a,b,c,d) packed as a + 4b + 16c + 64d -> index, 255 if not a bijection
  std::array<std::uint8_t, 256> from_code{};
};

constexpr int pack(const std::array<std::uint8_t, 4>& im) {
  return im[0] + 4 * im[1] + 16 * im[2] + 64 * im[3];
}

constexpr Perm4Tables make_perm4_tables() {
  Perm4Tables t{};
  for (auto& c : t.from_code) c = 255;
  // Lexicographic order of images: (0,1,2,3) is 0, (0,1,3,2) is 1, ... (3,2,1,0) is 23.
  int n = 0;
  for (std::uint8_t a = 0; a < 4; ++a)
    for (std::uint8_t b = 0; b < 4; ++b)
      for (std::uint8_t c = 0; c < 4; ++c)
        for (std::uint8_t d = 0; d < 4; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
          t.image[n] = {a, b, c, d};
          t.from_code[pack(t.image[n])] = static_cast<std::uint8_t>(n);
          ++n;
        }
  for (int p = 0; p < 24; ++p) {
    std::array<std::uint8_t, 4> inv{};
    for (std::uint8_t i = 0; i < 4; ++i) inv[t.image[p][i]] = i;
    t.inverse[p] = t.from_code[pack(inv)];
    for (int q = 0; q < 24; ++q) {
      std::array<std::uint8_t, 4> pq{};
      for (int i = 0; i < 4; ++i) pq[i] = t.image[p][t.image[q][i]];
      t.compose[p][q] = t.from_code[pack(pq)];
    }
  }
  return t;
}

inline constexpr Perm4Tables kPerm4 = make_perm4_tables();

}  // namespace detail

/// A permutation of the four vertex labels {0,1,2,3} of a tetrahedron.
///
/// Permutations are identified by their position in the lexicographic
/// enumeration of S4, which is also the index written into signatures.
class Perm4 {
 public:
  constexpr Perm4() = default;

  constexpr Perm4(int a, int b, int c, int d) {
    const int code = a + 4 * b + 16 * c + 64 * d;
    if (a < 0 || a > 3 || b < 0 || b > 3 || c < 0 || c > 3 || d < 0 || d > 3 ||
        detail::kPerm4.from_code[code] == 255)
      throw Error("Perm4: images do not form a permutation of {0,1,2,3}");
    index_ = detail::kPerm4.from_code[code];
  }

  static constexpr Perm4 from_index(int index) {
    if (index < 0 || index >= 24) throw Error("Perm4: index out of range");
    Perm4 p;
    p.index_ = static_cast<std::uint8_t>(index);
    return p;
  }

  static constexpr Perm4 identity() { return Perm4{}; }

  // Transposition of a and b.
  static constexpr Perm4 swap(int a, int b) {
    std::array<int, 4> im{0, 1, 2, 3};
    im[a] = b;
    im[b] = a;
    return Perm4(im[0], im[1], im[2], im[3]);
  }

  constexpr int index() const { return index_; }
  constexpr int operator[](int i) const { return detail::kPerm4.image[index_][i]; }

  constexpr int pre_image(int v) const {
    return detail::kPerm4.image[detail::kPerm4.inverse[index_]][v];
  }

  constexpr Perm4 inverse() const { return from_index(detail::kPerm4.inverse[index_]); }

  // (p * q)[i] == p[q[i]]
  friend constexpr Perm4 operator*(Perm4 p, Perm4 q) {
    return from_index(detail::kPerm4.compose[p.index_][q.index_]);
  }

  friend constexpr bool operator==(Perm4 a, Perm4 b) { return a.index_ == b.index_; }

  friend std::ostream& operator<<(std::ostream& os, Perm4 p) {
    return os << '(' << p[0] << ',' << p[1] << ',' << p[2] << ',' << p[3] << ')';
  }

 private:
  std::uint8_t index_ = 0;
};

}  // namespace pachner
