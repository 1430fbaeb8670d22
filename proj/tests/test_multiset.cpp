#include <map>
#include <random>

#include "doctest.h"
#include "pg/multiset.hpp"

using namespace pg;

TEST_CASE("from_entries canonicalizes") {
  Multiset m = Multiset::from_entries({{3, 1}, {1, 2}, {3, 4}, {7, 0}});
  CHECK(m.entries() == std::vector<Multiset::Entry>{{1, 2}, {3, 5}});
  CHECK(m.count(1) == 2);
  CHECK(m.count(3) == 5);
  CHECK(m.count(7) == 0);
  CHECK(!m.contains(7));
  CHECK(m.cardinality() == 7);
  CHECK(m.support_size() == 2);
}

TEST_CASE("single and empty") {
  CHECK(Multiset::single(5).entries() == std::vector<Multiset::Entry>{{5, 1}});
  CHECK(Multiset::single(5, 0).empty());
  CHECK(Multiset{}.empty());
  CHECK(Multiset{}.cardinality() == 0);
}

TEST_CASE("subset_of is pointwise") {
  Multiset a = Multiset::from_entries({{1, 1}, {2, 2}});
  Multiset b = Multiset::from_entries({{1, 1}, {2, 3}, {4, 1}});
  CHECK(a.subset_of(b));
  CHECK(!b.subset_of(a));
  CHECK(Multiset{}.subset_of(a));
  CHECK(a.subset_of(a));
}

TEST_CASE("difference saturates") {
  Multiset a = Multiset::from_entries({{1, 2}, {2, 1}});
  Multiset b = Multiset::from_entries({{1, 5}, {3, 1}});
  CHECK((a - b) == Multiset::single(2));
  CHECK((b - a) == Multiset::from_entries({{1, 3}, {3, 1}}));
}

TEST_CASE("image merges collisions") {
  Multiset a = Multiset::from_entries({{1, 2}, {2, 1}, {5, 1}});
  Multiset img = a.image([](Id i) { return i < 3 ? Id{0} : Id{9}; });
  CHECK(img == Multiset::from_entries({{0, 3}, {9, 1}}));
}

TEST_CASE("ordering is total and equality structural") {
  Multiset a = Multiset::from_entries({{1, 1}});
  Multiset b = Multiset::from_entries({{1, 2}});
  Multiset c = Multiset::from_entries({{2, 1}});
  CHECK(a < b);
  CHECK(b < c);
  CHECK(a == Multiset::single(1));
  CHECK(a.hash() == Multiset::single(1).hash());
}

// Reference model: a plain ordered map from id to count.
namespace {
using Model = std::map<Id, Count>;

Model model_of(const Multiset& m) {
  Model out;
  for (auto [id, n] : m.entries()) out[id] = n;
  return out;
}

Multiset from_model(const Model& m) {
  std::vector<Multiset::Entry> entries(m.begin(), m.end());
  return Multiset::from_entries(entries);
}
}  // namespace

TEST_CASE("randomized agreement with a map model") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 500; ++round) {
    Model ma, mb;
    Multiset a, b;
    for (int i = 0; i < 6; ++i) {
      Id id = Id(rng() % 8);
      Count n = Count(rng() % 3);
      if (n) {
        ma[id] += n;
        a.add(id, n);
      }
      id = Id(rng() % 8);
      n = Count(rng() % 3);
      if (n) {
        mb[id] += n;
        b.add(id, n);
      }
    }
    CHECK(a == from_model(ma));
    CHECK(model_of(a + b).size() == [&] {
      Model sum = ma;
      for (auto [id, n] : mb) sum[id] += n;
      return sum.size();
    }());
    Model sum = ma, diff;
    for (auto [id, n] : mb) sum[id] += n;
    for (auto [id, n] : ma) {
      Count sub = mb.count(id) ? mb.at(id) : 0;
      if (n > sub) diff[id] = n - sub;
    }
    CHECK((a + b) == from_model(sum));
    CHECK((a - b) == from_model(diff));
    bool subset = true;
    for (auto [id, n] : ma)
      if ((mb.count(id) ? mb.at(id) : 0) < n) subset = false;
    CHECK(a.subset_of(b) == subset);
  }
}
