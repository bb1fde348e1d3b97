// SPDX-License-Identifier: Apache-2.0

#include "setembed/set_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "setembed/rng.hpp"

namespace setembed {

bool GroundUniverse::contains(const std::string& id) const {
  return std::find(elements.begin(), elements.end(), id) != elements.end();
}

double GroundUniverse::volume_of(const std::string& id) const {
  auto it = volume.find(id);
  return it == volume.end() ? 1.0 : it->second;
}

void GroundUniverse::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& e : elements) {
    if (!seen.insert(e).second)
      throw std::invalid_argument("duplicate element id: " + e);
  }
  for (const auto& [id, v] : volume) {
    if (!seen.count(id))
      throw std::invalid_argument("volume for unknown element: " + id);
    if (!(v > 0.0))
      throw std::invalid_argument("non-positive volume for element: " + id);
  }
}

void SetFamily::validate() const {
  universe.validate();
  if (!provenance.empty() && provenance.size() != sets.size())
    throw std::invalid_argument("provenance out of sync with sets");
  std::unordered_set<std::string> names;
  bool any_nonempty = false;
  for (const auto& s : sets) {
    if (!names.insert(s.name).second)
      throw std::invalid_argument("duplicate set name: " + s.name);
    for (const auto& m : s.members)
      if (!universe.contains(m))
        throw std::invalid_argument("set " + s.name +
                                    " references unknown element: " + m);
    if (!s.members.empty()) any_nonempty = true;
  }
  if (!any_nonempty)
    throw std::invalid_argument("family has no non-empty set");
}

double set_volume(const SubsetRef& s, const GroundUniverse& u) {
  double v = 0.0;
  for (const auto& m : s.members) v += u.volume_of(m);
  return v;
}

AtomicPartition compute_atoms(const SetFamily& family) {
  family.validate();
  const std::size_t n = family.sets.size();

  // Signature of an element: its membership bit-vector across the family.
  std::map<std::vector<bool>, ElementSet> groups;
  for (const auto& e : family.universe.elements) {
    std::vector<bool> sig(n, false);
    bool in_any = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (family.sets[s].members.count(e)) {
        sig[s] = true;
        in_any = true;
      }
    }
    if (in_any) groups[std::move(sig)].insert(e);
  }

  std::vector<std::pair<ElementSet, std::vector<bool>>> atoms;
  atoms.reserve(groups.size());
  for (auto& [sig, atom] : groups) atoms.emplace_back(atom, sig);
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
    return *a.first.begin() < *b.first.begin();
  });

  AtomicPartition out;
  for (auto& [atom, sig] : atoms) {
    out.atoms.push_back(std::move(atom));
    out.membership.push_back(std::move(sig));
  }
  return out;
}

namespace {

std::string derived_name(const std::string& a, char op, const std::string& b,
                         const std::unordered_set<std::string>& taken) {
  std::string name = "(" + a + op + b + ")";
  while (taken.count(name)) name += "'";
  return name;
}

}  // namespace

SetFamily augment(const SetFamily& family, const AugmentMode& mode) {
  family.validate();
  if (mode.kind == AugmentMode::none) return family;

  SetFamily out = family;
  if (out.provenance.empty())
    out.provenance.assign(out.sets.size(), Provenance::original);

  std::set<ElementSet> present;
  for (const auto& s : family.sets) present.insert(s.members);

  // Candidate pool in a fixed order: pairs (i<j), ops (∩, ∪, i−j, j−i).
  std::vector<std::pair<std::string, ElementSet>> pool;
  std::unordered_set<std::string> taken;
  for (const auto& s : family.sets) taken.insert(s.name);
  const std::size_t n = family.sets.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& x = family.sets[i];
      const auto& y = family.sets[j];
      ElementSet inter, uni, diff_xy, diff_yx;
      std::set_intersection(x.members.begin(), x.members.end(),
                            y.members.begin(), y.members.end(),
                            std::inserter(inter, inter.end()));
      std::set_union(x.members.begin(), x.members.end(), y.members.begin(),
                     y.members.end(), std::inserter(uni, uni.end()));
      std::set_difference(x.members.begin(), x.members.end(),
                          y.members.begin(), y.members.end(),
                          std::inserter(diff_xy, diff_xy.end()));
      std::set_difference(y.members.begin(), y.members.end(),
                          x.members.begin(), x.members.end(),
                          std::inserter(diff_yx, diff_yx.end()));
      const std::pair<char, ElementSet*> ops[] = {
          {'&', &inter}, {'|', &uni}, {'-', &diff_xy}, {'~', &diff_yx}};
      for (const auto& [op, members] : ops) {
        if (members->empty()) continue;
        if (!present.insert(*members).second) continue;  // dedup by members
        std::string name = op == '~' ? derived_name(y.name, '-', x.name, taken)
                                     : derived_name(x.name, op, y.name, taken);
        taken.insert(name);
        pool.emplace_back(std::move(name), std::move(*members));
      }
    }
  }

  std::vector<std::size_t> keep(pool.size());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
  if (mode.kind == AugmentMode::sample) {
    // Fisher-Yates on the pool, then keep the first `count` entries.
    const std::uint64_t key = stream_key(mode.seed, 0, 0);
    for (std::size_t i = keep.size(); i > 1; --i) {
      const std::size_t j = stream_u64(key, i) % i;
      std::swap(keep[i - 1], keep[j]);
    }
    const std::size_t want =
        std::min<std::size_t>(keep.size(), std::max(mode.count, 0));
    keep.resize(want);
    std::sort(keep.begin(), keep.end());  // keep pool order in the output
  }

  for (std::size_t idx : keep) {
    out.sets.push_back({pool[idx].first, pool[idx].second});
    out.provenance.push_back(Provenance::derived);
  }
  return out;
}

bool atoms_equivalent(const SetFamily& f1, const SetFamily& f2) {
  if (!(f1.universe == f2.universe))
    throw std::invalid_argument("atoms_equivalent: universe mismatch");
  // compute_atoms output is canonically ordered, so direct comparison works.
  return compute_atoms(f1).atoms == compute_atoms(f2).atoms;
}

}  // namespace setembed
