#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

namespace pg {

using Id = std::uint32_t;
using Count = std::uint32_t;

/// Finite multiset over dense integer ids.
///
/// Entries are kept sorted by id with strictly positive counts, so two equal
/// multisets are bitwise-identical: they can serve directly as hash keys and
/// serialize the same way every time.
class Multiset {
 public:
  using Entry = std::pair<Id, Count>;

  Multiset() = default;

  static Multiset single(Id id, Count n = 1) {
    Multiset m;
    if (n > 0) m.entries_.emplace_back(id, n);
    return m;
  }

  /// Builds from arbitrary (id, count) pairs: duplicates are summed, zero
  /// counts dropped.
  static Multiset from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    Multiset m;
    for (const auto& [id, n] : entries) {
      if (n == 0) continue;
      if (!m.entries_.empty() && m.entries_.back().first == id)
        m.entries_.back().second += n;
      else
        m.entries_.emplace_back(id, n);
    }
    return m;
  }

  Count count(Id id) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Entry& e, Id v) { return e.first < v; });
    return (it != entries_.end() && it->first == id) ? it->second : 0;
  }

  bool contains(Id id) const { return count(id) > 0; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  std::uint64_t cardinality() const {
    std::uint64_t total = 0;
    for (const auto& e : entries_) total += e.second;
    return total;
  }

  /// Pointwise <=, i.e. multiset inclusion.
  bool subset_of(const Multiset& other) const {
    auto it = other.entries_.begin();
    for (const auto& [id, n] : entries_) {
      while (it != other.entries_.end() && it->first < id) ++it;
      if (it == other.entries_.end() || it->first != id || it->second < n) return false;
    }
    return true;
  }

  /// Pointwise sum.
  Multiset operator+(const Multiset& other) const {
    Multiset out;
    out.entries_.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin(), b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first))
        out.entries_.push_back(*a++);
      else if (a == entries_.end() || b->first < a->first)
        out.entries_.push_back(*b++);
      else {
        out.entries_.emplace_back(a->first, a->second + b->second);
        ++a, ++b;
      }
    }
    return out;
  }

  /// Saturating difference: (m - n)(s) = max(0, m(s) - n(s)).
  Multiset operator-(const Multiset& other) const {
    Multiset out;
    out.entries_.reserve(entries_.size());
    auto b = other.entries_.begin();
    for (const auto& [id, n] : entries_) {
      while (b != other.entries_.end() && b->first < id) ++b;
      Count sub = (b != other.entries_.end() && b->first == id) ? b->second : 0;
      if (n > sub) out.entries_.emplace_back(id, n - sub);
    }
    return out;
  }

  /// Image under an id map f: result(t) = sum of count(s) over all s with
  /// f(s) = t.
  template <typename F>
  Multiset image(F&& f) const {
    std::vector<Entry> mapped;
    mapped.reserve(entries_.size());
    for (const auto& [id, n] : entries_) mapped.emplace_back(f(id), n);
    return from_entries(std::move(mapped));
  }

  /// In-place accumulate (keeps canonical form).
  void add(Id id, Count n = 1) {
    if (n == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Entry& e, Id v) { return e.first < v; });
    if (it != entries_.end() && it->first == id)
      it->second += n;
    else
      entries_.insert(it, Entry{id, n});
  }

  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const Multiset&) const = default;
  auto operator<=>(const Multiset&) const = default;

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& [id, n] : entries_) {
      h ^= (std::size_t(id) << 32 | n) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  std::vector<Entry> entries_;
};

struct MultisetHash {
  std::size_t operator()(const Multiset& m) const { return m.hash(); }
};

/// Markings are multisets over place ids.
using Marking = Multiset;

}  // namespace pg
