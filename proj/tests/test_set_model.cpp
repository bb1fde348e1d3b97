// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "setembed/rng.hpp"
#include "setembed/set_model.hpp"

using namespace setembed;

namespace {

SetFamily make_family(const std::vector<std::string>& universe,
                      const std::vector<std::vector<std::string>>& sets) {
  SetFamily f;
  f.universe.elements = universe;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    SubsetRef s;
    s.name = "S" + std::to_string(i);
    s.members.insert(sets[i].begin(), sets[i].end());
    f.sets.push_back(std::move(s));
  }
  f.provenance.assign(f.sets.size(), Provenance::original);
  return f;
}

std::set<ElementSet> atom_set(const AtomicPartition& p) {
  return {p.atoms.begin(), p.atoms.end()};
}

ElementSet diff(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

ElementSet inter(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

// Oracle: the recursive subtraction scheme. Peel one set at a time and split
// the existing atoms against it.
std::set<ElementSet> recursive_atoms(std::vector<ElementSet> sets) {
  std::set<ElementSet> atoms;
  for (const auto& x : sets) {
    ElementSet rest = x;
    std::set<ElementSet> next;
    for (const auto& a : atoms) {
      const ElementSet in = inter(a, x);
      const ElementSet out_part = diff(a, x);
      if (!in.empty()) next.insert(in);
      if (!out_part.empty()) next.insert(out_part);
      rest = diff(rest, a);
    }
    if (!rest.empty()) next.insert(rest);
    atoms = std::move(next);
  }
  return atoms;
}

SetFamily random_family(std::uint64_t key, int max_elems = 8, int max_sets = 6) {
  const int n_elems = 1 + stream_u64(key, 0) % max_elems;
  const int n_sets = 1 + stream_u64(key, 1) % max_sets;
  std::vector<std::string> universe;
  for (int e = 0; e < n_elems; ++e) universe.push_back(std::string(1, 'a' + e));
  std::vector<std::vector<std::string>> sets(n_sets);
  std::uint64_t c = 2;
  bool any = false;
  for (int s = 0; s < n_sets; ++s)
    for (int e = 0; e < n_elems; ++e)
      if (stream_u64(key, c++) % 2) {
        sets[s].push_back(universe[e]);
        any = true;
      }
  if (!any) sets[0].push_back(universe[0]);
  return make_family(universe, sets);
}

}  // namespace

TEST_CASE("single set is its own atom") {
  auto f = make_family({"A", "B"}, {{"A", "B"}});
  auto p = compute_atoms(f);
  REQUIRE(p.atoms.size() == 1);
  CHECK(p.atoms[0] == ElementSet{"A", "B"});
  CHECK(p.membership[0][0]);
}

TEST_CASE("two overlapping sets split into three atoms") {
  auto f = make_family({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  auto p = compute_atoms(f);
  CHECK(atom_set(p) ==
        std::set<ElementSet>{{"A"}, {"B"}, {"C"}});
}

TEST_CASE("Table-style family of five sets yields the singleton atoms") {
  auto f = make_family({"A", "B", "C"},
                       {{"A", "B"}, {"B", "C"}, {"A"}, {"B"}, {"C"}});
  auto p = compute_atoms(f);
  CHECK(atom_set(p) == std::set<ElementSet>{{"A"}, {"B"}, {"C"}});
  // canonical order: by smallest contained element id
  CHECK(p.atoms[0] == ElementSet{"A"});
  CHECK(p.atoms[1] == ElementSet{"B"});
  CHECK(p.atoms[2] == ElementSet{"C"});
}

TEST_CASE("membership matrix marks containment only") {
  auto f = make_family({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  auto p = compute_atoms(f);
  for (std::size_t a = 0; a < p.atoms.size(); ++a)
    for (std::size_t s = 0; s < f.sets.size(); ++s) {
      const bool contained =
          std::includes(f.sets[s].members.begin(), f.sets[s].members.end(),
                        p.atoms[a].begin(), p.atoms[a].end());
      CHECK(p.membership[a][s] == contained);
    }
}

TEST_CASE("augment on a lone singleton is a no-op") {
  auto f = make_family({"A"}, {{"A"}});
  auto g = augment(f, {AugmentMode::full});
  CHECK(g.sets.size() == 1);
}

TEST_CASE("augment of two overlapping pairs adds the four derived sets") {
  auto f = make_family({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  auto g = augment(f, {AugmentMode::full});
  REQUIRE(g.sets.size() == 6);
  std::set<ElementSet> derived;
  for (std::size_t i = 2; i < g.sets.size(); ++i) {
    derived.insert(g.sets[i].members);
    CHECK(g.provenance[i] == Provenance::derived);
  }
  CHECK(derived == std::set<ElementSet>{
                       {"B"}, {"A", "B", "C"}, {"A"}, {"C"}});
}

TEST_CASE("the full power-set family is closed under augmentation") {
  auto f = make_family({"A", "B", "C"},
                       {{"A"}, {"B"}, {"C"}, {"A", "B"}, {"B", "C"},
                        {"C", "A"}, {"A", "B", "C"}});
  auto g = augment(f, {AugmentMode::full});
  CHECK(g.sets.size() == f.sets.size());
}

TEST_CASE("sampled augmentation is deterministic and bounded") {
  auto f = make_family({"A", "B", "C", "D"},
                       {{"A", "B"}, {"B", "C"}, {"C", "D"}});
  AugmentMode mode{AugmentMode::sample, 3, 42};
  auto g1 = augment(f, mode);
  auto g2 = augment(f, mode);
  CHECK(g1.sets.size() == f.sets.size() + 3);
  REQUIRE(g1.sets.size() == g2.sets.size());
  for (std::size_t i = 0; i < g1.sets.size(); ++i)
    CHECK(g1.sets[i].members == g2.sets[i].members);
}

TEST_CASE("atoms_equivalent") {
  auto f = make_family({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  CHECK(atoms_equivalent(f, f));
  CHECK(atoms_equivalent(f, augment(f, {AugmentMode::full})));

  auto g1 = make_family({"A", "B"}, {{"A"}});
  auto g2 = make_family({"A", "B"}, {{"A", "B"}});
  CHECK_FALSE(atoms_equivalent(g1, g2));

  auto other = make_family({"A", "B", "X"}, {{"A"}});
  CHECK_THROWS_AS(atoms_equivalent(g1, other), std::invalid_argument);
}

TEST_CASE("set_volume") {
  GroundUniverse u;
  u.elements = {"A", "B", "C"};
  SubsetRef abc{"abc", {"A", "B", "C"}};
  CHECK(set_volume(abc, u) == doctest::Approx(3.0));

  u.volume = {{"A", 0.5}, {"B", 2.0}};
  SubsetRef ab{"ab", {"A", "B"}};
  CHECK(set_volume(ab, u) == doctest::Approx(2.5));

  SubsetRef empty{"empty", {}};
  CHECK(set_volume(empty, u) == 0.0);
}

TEST_CASE("partition laws and recursive oracle on random families") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    auto f = random_family(stream_key(7, trial, 0));
    auto p = compute_atoms(f);

    ElementSet family_union;
    for (const auto& s : f.sets)
      family_union.insert(s.members.begin(), s.members.end());

    // disjointness + coverage
    ElementSet atom_union;
    std::size_t total = 0;
    for (const auto& a : p.atoms) {
      CHECK(!a.empty());
      total += a.size();
      atom_union.insert(a.begin(), a.end());
    }
    CHECK(total == atom_union.size());
    CHECK(atom_union == family_union);

    // containment-or-disjointness; every set is a union of its atoms
    for (std::size_t s = 0; s < f.sets.size(); ++s) {
      ElementSet rebuilt;
      for (std::size_t a = 0; a < p.atoms.size(); ++a) {
        const auto in = inter(p.atoms[a], f.sets[s].members);
        CHECK((in.empty() || in == p.atoms[a]));
        if (p.membership[a][s]) rebuilt.insert(p.atoms[a].begin(), p.atoms[a].end());
      }
      CHECK(rebuilt == f.sets[s].members);
    }

    // recursive-subtraction oracle
    std::vector<ElementSet> raw;
    for (const auto& s : f.sets) raw.push_back(s.members);
    CHECK(atom_set(p) == recursive_atoms(raw));

    // augmentation closure preserves atoms
    CHECK(atoms_equivalent(f, augment(f, {AugmentMode::full})));
  }
}

TEST_CASE("permutation invariance of atoms and volumes") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    auto f = random_family(stream_key(11, trial, 0));
    auto shuffled = f;
    std::reverse(shuffled.universe.elements.begin(),
                 shuffled.universe.elements.end());
    std::reverse(shuffled.sets.begin(), shuffled.sets.end());
    std::reverse(shuffled.provenance.begin(), shuffled.provenance.end());
    CHECK(atom_set(compute_atoms(f)) == atom_set(compute_atoms(shuffled)));
    for (const auto& s : f.sets)
      CHECK(set_volume(s, f.universe) ==
            doctest::Approx(set_volume(s, shuffled.universe)));
  }
}

TEST_CASE("family validation rejects bad input") {
  auto f = make_family({"A"}, {{"A"}});
  f.sets.push_back({"S0", {"A"}});  // duplicate name
  f.provenance.push_back(Provenance::original);
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);

  auto g = make_family({"A"}, {{}});
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // no non-empty set
}
