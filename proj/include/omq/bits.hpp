#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace omq {

// Fixed-size bit vector sized at construction. Backing store is a word
// vector, so instances are cheap to copy, compare and hash.
class Bits {
 public:
  Bits() : nbits_(0) {}
  explicit Bits(std::size_t nbits, bool value = false)
      : nbits_(nbits), words_((nbits + 63) / 64, value ? ~0ull : 0ull) {
    trim();
  }

  std::size_t size() const { return nbits_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v = true) {
    if (v)
      words_[i >> 6] |= (1ull << (i & 63));
    else
      words_[i >> 6] &= ~(1ull << (i & 63));
  }

  Bits& operator&=(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  Bits& subtract(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }

  bool subset_of(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  bool intersects(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool all() const {
    Bits full(nbits_, true);
    return *this == full;
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += __builtin_popcountll(w);
    return n;
  }

  bool operator==(const Bits& o) const {
    return nbits_ == o.nbits_ && words_ == o.words_;
  }
  bool operator!=(const Bits& o) const { return !(*this == o); }
  bool operator<(const Bits& o) const {
    if (nbits_ != o.nbits_) return nbits_ < o.nbits_;
    return words_ < o.words_;
  }

  std::size_t hash() const {
    std::size_t h = nbits_ * 0x9e3779b97f4a7c15ull;
    for (auto w : words_) h = h * 1099511628211ull ^ w;
    return h;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  // Indices of set bits, ascending.
  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nbits_; ++i)
      if (get(i)) out.push_back(i);
    return out;
  }

  std::string to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

 private:
  void trim() {
    if (nbits_ & 63) {
      std::uint64_t mask = (1ull << (nbits_ & 63)) - 1;
      if (!words_.empty()) words_.back() &= mask;
    }
  }
  std::size_t nbits_;
  std::vector<std::uint64_t> words_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

inline std::size_t hash_mix(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

}  // namespace omq
