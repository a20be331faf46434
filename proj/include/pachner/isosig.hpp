#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "pachner/error.hpp"
#include "pachner/perm4.hpp"
#include "pachner/triangulation.hpp"

namespace pachner {

inline constexpr std::string_view kAlphabet =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

inline char alphabet_encode(int n) {
  if (n < 0 || n > 63) throw Error("alphabet_encode: value " + std::to_string(n) + " out of range");
  return kAlphabet[n];
}

// -1 for characters outside the alphabet.
constexpr int alphabet_value(char c) {
  if (c >= 'a' && c <= 'z') return c - 'a';
  if (c >= 'A' && c <= 'Z') return c - 'A' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '-') return 63;
  return -1;
}

inline int alphabet_decode(char c) {
  const int v = alphabet_value(c);
  if (v < 0) throw Error(std::string("alphabet_decode: '") + c + "' is not in the alphabet");
  return v;
}

inline bool is_signature_text(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (alphabet_value(c) < 0) return false;
  return true;
}

namespace detail {

// Number of base-64 digits used for every integer field when N >= 63.
inline int signature_digits(std::size_t n) {
  if (n < 63) return 1;
  int d = 0;
  for (std::size_t tmp = n; tmp > 0; tmp >>= 6) ++d;
  return d;
}

/// Builds one encoded canonical labelling at a time, reusing its buffers.
///
/// When given the best string found so far, candidates are abandoned as soon
/// as an emitted character exceeds the corresponding character of `best`.
class LabellingEncoder {
 public:
  // Returns false if the candidate was abandoned (it cannot beat `best`).
  bool run(const Triangulation& tri, std::size_t start, Perm4 start_perm, const std::string* best,
           std::string& out) {
    const std::size_t n = tri.size();
    image_.assign(n, -1);
    pre_image_.assign(n, 0);
    vertex_map_.resize(n);
    dests_.clear();
    perms_.clear();
    out.clear();
    state_ = best ? 0 : -1;
    best_ = best;
    out_ = &out;

    const int digits = signature_digits(n);
    if (n >= 63) {
      if (!put(kAlphabet[63]) || !put(kAlphabet[digits])) return false;
    }
    if (!put_number(n, digits)) return false;

    image_[start] = 0;
    pre_image_[0] = start;
    vertex_map_[start] = start_perm;
    std::size_t next_unused = 1;
    int pending[3];
    int pending_count = 0;

    auto push_type = [&](int type) {
      pending[pending_count++] = type;
      if (pending_count == 3) {
        pending_count = 0;
        return put(kAlphabet[pending[0] + 4 * pending[1] + 16 * pending[2]]);
      }
      return true;
    };

    for (std::size_t img = 0; img < n && img < next_unused; ++img) {
      const std::size_t src = pre_image_[img];
      const Perm4 map = vertex_map_[src];
      for (int face_img = 0; face_img < 4; ++face_img) {
        const int face_src = map.pre_image(face_img);
        const Gluing& g = tri.gluing(src, face_src);
        if (g.boundary()) {
          if (!push_type(0)) return false;
          continue;
        }
        const std::size_t dest = g.destination->tet;
        if (image_[dest] >= 0) {
          const auto di = static_cast<std::size_t>(image_[dest]);
          // Already listed from the other side.
          if (di < img || (dest == src && map[g.destination->face] < face_img)) continue;
        }
        if (image_[dest] < 0) {
          image_[dest] = static_cast<std::ptrdiff_t>(next_unused);
          pre_image_[next_unused++] = dest;
          vertex_map_[dest] = map * g.perm.inverse();
          if (!push_type(1)) return false;
          continue;
        }
        dests_.push_back(static_cast<std::size_t>(image_[dest]));
        perms_.push_back(static_cast<std::uint8_t>((vertex_map_[dest] * g.perm * map.inverse()).index()));
        if (!push_type(2)) return false;
      }
    }
    if (next_unused != n) throw Error("encode: triangulation is disconnected");
    if (pending_count > 0) {
      while (pending_count < 3) pending[pending_count++] = 0;
      pending_count = 0;
      if (!put(kAlphabet[pending[0] + 4 * pending[1] + 16 * pending[2]])) return false;
    }
    for (std::size_t d : dests_)
      if (!put_number(d, digits)) return false;
    for (std::uint8_t p : perms_)
      if (!put(kAlphabet[p])) return false;
    return true;
  }

 private:
  bool put(char c) {
    out_->push_back(c);
    if (state_ == 0) {
      const std::size_t pos = out_->size() - 1;
      const char b = pos < best_->size() ? (*best_)[pos] : '\0';
      if (c < b) state_ = -1;
      else if (c > b) return false;
    }
    return true;
  }

  bool put_number(std::size_t value, int digits) {
    for (int i = 0; i < digits; ++i) {
      if (!put(kAlphabet[value & 0x3F])) return false;
      value >>= 6;
    }
    return true;
  }

  std::vector<std::ptrdiff_t> image_;
  std::vector<std::size_t> pre_image_;
  std::vector<Perm4> vertex_map_;
  std::vector<std::size_t> dests_;
  std::vector<std::uint8_t> perms_;
  const std::string* best_ = nullptr;
  std::string* out_ = nullptr;
  int state_ = -1;
};

}  // namespace detail

/// Encodes the canonical labelling that sends `start_tet` to tetrahedron 0
/// and relabels its vertices by `start_perm` (original label -> new label).
inline std::string encode_labelling(const Triangulation& tri, std::size_t start_tet, Perm4 start_perm) {
  if (start_tet >= tri.size()) throw Error("encode_labelling: start tetrahedron out of range");
  detail::LabellingEncoder enc;
  std::string out;
  enc.run(tri, start_tet, start_perm, nullptr, out);
  return out;
}

/// Isomorphism signature: the lexicographically smallest of the 24N encoded
/// canonical labellings.
inline std::string encode(const Triangulation& tri) {
  if (tri.size() == 0) throw Error("encode: empty triangulation");
  if (!is_connected(tri)) throw Error("encode: triangulation is disconnected");
  detail::LabellingEncoder enc;
  std::string best, candidate;
  bool have_best = false;
  for (std::size_t t = 0; t < tri.size(); ++t) {
    for (int p = 0; p < 24; ++p) {
      if (enc.run(tri, t, Perm4::from_index(p), have_best ? &best : nullptr, candidate)) {
        if (!have_best || candidate < best) {
          best.swap(candidate);
          have_best = true;
        }
      }
    }
  }
  return best;
}

/// Tetrahedron count read from the signature prefix alone.
inline std::size_t signature_tet_count(std::string_view sig) {
  if (sig.empty()) throw ParseError("empty signature", 0);
  const int first = alphabet_value(sig[0]);
  if (first < 0) throw ParseError("character is not in the alphabet", 0);
  if (first < 63) return static_cast<std::size_t>(first);
  if (sig.size() < 2) throw ParseError("truncated signature", 1);
  const int digits = alphabet_value(sig[1]);
  if (digits < 1 || static_cast<std::size_t>(2 + digits) > sig.size()) throw ParseError("bad digit count", 1);
  std::size_t n = 0;
  for (int i = 0; i < digits; ++i) {
    const int v = alphabet_value(sig[2 + i]);
    if (v < 0) throw ParseError("character is not in the alphabet", 2 + i);
    n |= static_cast<std::size_t>(v) << (6 * i);
  }
  return n;
}

/// Reconstructs a triangulation from a signature (one connected component).
inline Triangulation decode(std::string_view sig) {
  std::size_t pos = 0;
  auto next_value = [&](const char* what) {
    if (pos >= sig.size()) throw ParseError(std::string("truncated signature: expected ") + what, pos);
    const int v = alphabet_value(sig[pos]);
    if (v < 0) throw ParseError(std::string("character '") + sig[pos] + "' is not in the alphabet", pos);
    ++pos;
    return v;
  };
  auto read_number = [&](int digits, const char* what) {
    std::size_t value = 0;
    for (int i = 0; i < digits; ++i) value |= static_cast<std::size_t>(next_value(what)) << (6 * i);
    return value;
  };

  int digits = 1;
  std::size_t n = static_cast<std::size_t>(next_value("tetrahedron count"));
  if (n == 63) {
    digits = next_value("digit count");
    if (digits < 1 || digits > 8) throw ParseError("unsupported digit count", pos - 1);
    n = read_number(digits, "tetrahedron count");
  }
  if (n == 0) throw ParseError("signature describes an empty triangulation", 0);

  // Type sequence: a boundary consumes one face slot, a gluing consumes two.
  std::vector<std::uint8_t> types;
  std::size_t remaining = 4 * n;
  std::size_t joins = 0;
  while (remaining > 0) {
    const std::size_t char_pos = pos;
    int packed = next_value("type sequence");
    for (int k = 0; k < 3; ++k, packed >>= 2) {
      const int type = packed & 3;
      if (remaining == 0) {
        if (type != 0) throw ParseError("non-zero padding in type sequence", char_pos);
        continue;
      }
      if (type == 3) throw ParseError("invalid gluing type 3", char_pos);
      if (type != 0 && remaining < 2) throw ParseError("gluing type exceeds available faces", char_pos);
      remaining -= type == 0 ? 1 : 2;
      if (type == 2) ++joins;
      types.push_back(static_cast<std::uint8_t>(type));
    }
  }
  std::vector<std::size_t> dests(joins);
  std::vector<std::size_t> dest_pos(joins);
  for (std::size_t j = 0; j < joins; ++j) {
    dest_pos[j] = pos;
    dests[j] = read_number(digits, "destination sequence");
  }
  std::vector<int> perms(joins);
  std::vector<std::size_t> perm_pos(joins);
  for (std::size_t j = 0; j < joins; ++j) {
    perm_pos[j] = pos;
    perms[j] = next_value("permutation sequence");
    if (perms[j] > 23) throw ParseError("permutation index exceeds 23", perm_pos[j]);
  }
  if (pos != sig.size()) throw ParseError("unexpected trailing characters", pos);

  Triangulation tri(n);
  std::vector<bool> decided(4 * n, false);
  std::size_t next_unused = 1, type_pos = 0, join_pos = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t >= next_unused) throw ParseError("tetrahedron " + std::to_string(t) + " is never reached", pos);
    for (int f = 0; f < 4; ++f) {
      if (decided[4 * t + f]) continue;
      if (type_pos >= types.size()) throw ParseError("type sequence too short", pos);
      const int type = types[type_pos++];
      decided[4 * t + f] = true;
      if (type == 0) continue;
      if (type == 1) {
        if (next_unused >= n) throw ParseError("too many new tetrahedra", pos);
        const std::size_t d = next_unused++;
        tri.join(t, f, d, Perm4::identity());
        decided[4 * d + f] = true;
        continue;
      }
      const std::size_t d = dests[join_pos];
      const Perm4 p = Perm4::from_index(perms[join_pos]);
      if (d >= next_unused) throw ParseError("destination refers to an unseen tetrahedron", dest_pos[join_pos]);
      const int df = p[f];
      if ((d == t && df == f) || decided[4 * d + df])
        throw ParseError("gluing targets a face that is already determined", perm_pos[join_pos]);
      tri.join(t, f, d, p);
      decided[4 * d + df] = true;
      ++join_pos;
    }
  }
  if (type_pos != types.size()) throw ParseError("type sequence too long", pos);
  return tri;
}

/// Reads a signature list: one per line, '#' comments and blank lines skipped.
inline std::vector<std::string> read_isosig_list(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    std::string s = line.substr(b, e - b + 1);
    if (!is_signature_text(s)) throw ParseError("line " + std::to_string(line_no) + " is not a signature", line_no);
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<std::string> read_isosig_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_isosig_list(in);
}

}  // namespace pachner
