// SPDX-License-Identifier: Apache-2.0
//
// Finite-set algebra: families of named subsets over a measured ground
// universe, atomic-partition computation and augmentation closure.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace setembed {

using ElementSet = std::set<std::string>;

struct GroundUniverse {
  std::vector<std::string> elements;        // ordered, unique ids
  std::map<std::string, double> volume;     // missing entry -> 1.0

  bool contains(const std::string& id) const;
  double volume_of(const std::string& id) const;
  // Throws std::invalid_argument on duplicate ids or non-positive volumes.
  void validate() const;

  bool operator==(const GroundUniverse&) const = default;
};

enum class Provenance { original, derived };

struct SubsetRef {
  std::string name;
  ElementSet members;  // unordered semantics; sorted storage

  bool operator==(const SubsetRef&) const = default;
};

struct SetFamily {
  GroundUniverse universe;
  std::vector<SubsetRef> sets;
  std::vector<Provenance> provenance;  // parallel to sets

  // Throws std::invalid_argument when names collide, members leave the
  // universe, every set is empty, or provenance is out of sync.
  void validate() const;
};

struct AtomicPartition {
  // Disjoint non-empty element sets covering the union of the family,
  // ordered by their lexicographically smallest element id.
  std::vector<ElementSet> atoms;
  // membership[a][s] is true iff atom a is contained in family set s.
  std::vector<std::vector<bool>> membership;
};

struct AugmentMode {
  enum Kind { none, full, sample } kind = none;
  int count = 0;           // sample only
  std::uint64_t seed = 0;  // sample only
};

// Atoms by the element-signature method: group elements of the family union
// by their membership bit-vector across sets.
AtomicPartition compute_atoms(const SetFamily& family);

// One round of closure: appends every non-empty, not-already-present
// intersection, union and both differences over pairs of the input sets.
// sample mode keeps `count` uniform draws of that candidate pool.
SetFamily augment(const SetFamily& family, const AugmentMode& mode);

// True iff both families induce the same atoms. Throws on universe mismatch.
bool atoms_equivalent(const SetFamily& f1, const SetFamily& f2);

// Sum of member volumes; 0 for the empty set.
double set_volume(const SubsetRef& s, const GroundUniverse& u);

}  // namespace setembed
