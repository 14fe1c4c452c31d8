#pragma once

// Full multiplication tables for groups small enough to enumerate.
//
// Elements of W get dense indices in breadth-first order from the identity, so
// index order refines length order. A twisted element delta^k w is addressed
// as the pair (k, index of w).

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "coxmin/coxeter.hpp"

namespace coxmin {

class GroupTable {
 public:
  using Index = std::uint32_t;
  static constexpr std::uint64_t kDefaultBound = 1000000;

  explicit GroupTable(const CoxeterSystem& sys, std::uint64_t bound = kDefaultBound) : sys_(sys) {
    const std::uint64_t order = sys.group_order();
    if (order > bound)
      fail(ErrorKind::TooLarge, "group of order " + std::to_string(order) + " exceeds enumeration bound " +
                                    std::to_string(bound));
    n_ = sys.rank();
    size_ = static_cast<std::size_t>(order);
    elements_.reserve(size_);
    elements_.push_back(sys.identity().perm);
    index_.reserve(size_ * 2);
    index_.emplace(key(elements_[0]), 0);
    parent_.push_back(0);
    parent_gen_.push_back(0);
    length_.push_back(0);
    right_.assign(size_ * n_, 0);
    for (std::size_t head = 0; head < elements_.size(); ++head) {
      for (std::size_t i = 0; i < n_; ++i) {
        Perm nxt(elements_[head].size());
        const Perm& s = sys.roots().simple_reflection(i);
        for (std::size_t p = 0; p < nxt.size(); ++p) nxt[p] = elements_[head][s[p]];
        auto [it, fresh] = index_.emplace(key(nxt), static_cast<Index>(elements_.size()));
        if (fresh) {
          if (elements_.size() >= size_) fail(ErrorKind::TooLarge, "group enumeration overflow");
          parent_.push_back(static_cast<Index>(head));
          parent_gen_.push_back(static_cast<std::uint8_t>(i));
          length_.push_back(length_[head] + 1);
          elements_.push_back(std::move(nxt));
        }
        right_[head * n_ + i] = it->second;
      }
    }
    if (elements_.size() != size_) fail(ErrorKind::TooLarge, "group order mismatch during enumeration");
    left_.assign(n_, std::vector<Index>(size_));
    inverse_.resize(size_);
    for (std::size_t g = 0; g < size_; ++g) {
      inverse_[g] = lookup(invert(elements_[g]));
      for (std::size_t i = 0; i < n_; ++i) left_[i][g] = 0;
    }
    // s_i g = (g^-1 s_i)^-1
    for (std::size_t g = 0; g < size_; ++g)
      for (std::size_t i = 0; i < n_; ++i) left_[i][g] = inverse_[right_[inverse_[g] * n_ + i]];
    const unsigned order_d = sys.twist_order();
    twist_map_.assign(order_d, std::vector<Index>(size_));
    for (unsigned k = 0; k < order_d; ++k)
      for (std::size_t g = 0; g < size_; ++g)
        twist_map_[k][g] = k == 0 ? static_cast<Index>(g) : lookup(sys.twist_conjugate(k, Element{0, elements_[g]}).perm);
    support_.assign(size_, 0);
    for (std::size_t g = 1; g < size_; ++g) support_[g] = support_[parent_[g]] | singleton(parent_gen_[g]);
  }

  const CoxeterSystem& system() const { return sys_; }
  std::size_t size() const { return size_; }
  std::size_t rank() const { return n_; }
  unsigned twist_order() const { return sys_.twist_order(); }

  Index identity() const { return 0; }
  std::size_t length(Index g) const { return length_[g]; }
  Index left_mul(std::size_t i, Index g) const { return left_[i][g]; }
  Index right_mul(Index g, std::size_t i) const { return right_[g * n_ + i]; }
  Index inverse(Index g) const { return inverse_[g]; }
  /// delta^k g delta^-k
  Index twist(unsigned k, Index g) const { return twist_map_[k % twist_order()][g]; }
  IndexSet support(Index g) const { return support_[g]; }

  Element element(Index g) const { return Element{0, elements_[g]}; }
  Element twisted_element(unsigned k, Index g) const { return sys_.with_twist(k, element(g)); }
  const Perm& perm(Index g) const { return elements_[g]; }

  Index lookup(const Perm& p) const {
    auto it = index_.find(key(p));
    if (it == index_.end()) fail(ErrorKind::InvalidInput, "element not in group table");
    return it->second;
  }
  /// Index of the body of a twisted element.
  Index index_of(const Element& e) const { return lookup(sys_.body(e).perm); }

  Index multiply(Index a, Index b) const {
    // walk b's spanning-tree word, which is reduced
    std::vector<std::uint8_t> word;
    for (Index g = b; g != 0; g = parent_[g]) word.push_back(parent_gen_[g]);
    Index r = a;
    for (std::size_t t = word.size(); t-- > 0;) r = right_mul(r, word[t]);
    return r;
  }

  std::vector<std::size_t> word(Index g) const {
    std::vector<std::size_t> w;
    for (; g != 0; g = parent_[g]) w.push_back(parent_gen_[g]);
    std::reverse(w.begin(), w.end());
    return w;
  }

  /// Body of s_i (delta^k g) s_i.
  Index conj_simple(unsigned k, Index g, std::size_t i) const {
    return left_mul(sys_.twist_index(twist_order() - k % twist_order(), i), right_mul(g, i));
  }

  /// Body of x^-1 (delta^k g) x.
  Index conj(unsigned k, Index g, Index x) const {
    const Index left = twist(twist_order() - k % twist_order(), inverse(x));
    return multiply(multiply(left, g), x);
  }

 private:
  std::string key(const Perm& p) const {
    std::string s(2 * n_, '\0');
    for (std::size_t i = 0; i < n_; ++i) {
      s[2 * i] = static_cast<char>(p[i] & 0xff);
      s[2 * i + 1] = static_cast<char>(p[i] >> 8);
    }
    return s;
  }

  const CoxeterSystem& sys_;
  std::size_t n_ = 0, size_ = 0;
  std::vector<Perm> elements_;
  std::unordered_map<std::string, Index> index_;
  std::vector<Index> parent_;
  std::vector<std::uint8_t> parent_gen_;
  std::vector<std::uint32_t> length_;
  std::vector<Index> right_;
  std::vector<std::vector<Index>> left_;
  std::vector<Index> inverse_;
  std::vector<std::vector<Index>> twist_map_;
  std::vector<IndexSet> support_;
};

}  // namespace coxmin
