#ifndef GIBMAP_VALUESET_HPP_
#define GIBMAP_VALUESET_HPP_

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <vector>

namespace gibmap {

// A non-empty subset of one variable's domain. Values are domain indices.
class ValueSet {
 public:
  ValueSet() = default;
  ValueSet(int owner, std::size_t domainSize) : owner_(owner), bits_(domainSize) {}

  static ValueSet full(int owner, std::size_t domainSize) {
    ValueSet s(owner, domainSize);
    s.bits_.set();
    return s;
  }
  static ValueSet single(int owner, std::size_t domainSize, std::size_t value) {
    ValueSet s(owner, domainSize);
    s.bits_.set(value);
    return s;
  }

  int owner() const { return owner_; }
  std::size_t domain_size() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool is_full() const { return bits_.all(); }
  bool contains(std::size_t value) const { return bits_.test(value); }
  void add(std::size_t value) { bits_.set(value); }

  bool subset_of(const ValueSet& other) const { return bits_.is_subset_of(other.bits_); }
  bool strict_subset_of(const ValueSet& other) const {
    return bits_.is_proper_subset_of(other.bits_);
  }
  ValueSet intersect(const ValueSet& other) const {
    ValueSet s = *this;
    s.bits_ &= other.bits_;
    return s;
  }

  // Value indices in ascending (domain declaration) order.
  std::vector<std::size_t> values() const {
    std::vector<std::size_t> out;
    out.reserve(bits_.count());
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos;
         i = bits_.find_next(i)) {
      out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const ValueSet& a, const ValueSet& b) {
    return a.owner_ == b.owner_ && a.bits_ == b.bits_;
  }
  friend bool operator!=(const ValueSet& a, const ValueSet& b) { return !(a == b); }
  // Deterministic total order: owner, then membership in domain order.
  friend bool operator<(const ValueSet& a, const ValueSet& b) {
    if (a.owner_ != b.owner_) return a.owner_ < b.owner_;
    if (a.bits_.size() != b.bits_.size()) return a.bits_.size() < b.bits_.size();
    for (std::size_t i = 0; i < a.bits_.size(); ++i) {
      if (a.bits_.test(i) != b.bits_.test(i)) return b.bits_.test(i);
    }
    return false;
  }

 private:
  int owner_ = -1;
  boost::dynamic_bitset<> bits_;
};

}  // namespace gibmap

#endif  // GIBMAP_VALUESET_HPP_
