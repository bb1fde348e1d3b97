// SPDX-License-Identifier: Apache-2.0

#include "setembed/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace setembed {

std::uint64_t partition_tag(const AtomicPartition& p) {
  // FNV-1a over atom contents with separators.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& atom : p.atoms) {
    for (const auto& e : atom) {
      for (unsigned char c : e) eat(c);
      eat(0x1f);
    }
    eat(0x1e);
  }
  return h;
}

AtomHistogram uniform_histogram(const SubsetRef& x, const AtomicPartition& p,
                                const GroundUniverse& u) {
  if (x.members.empty())
    throw std::invalid_argument("uniform_histogram: empty set " + x.name);

  const std::size_t m = p.atoms.size();
  AtomHistogram h;
  h.partition_tag = partition_tag(p);
  h.weights.assign(m, 0.0);
  h.density.assign(m, 0.0);

  std::size_t covered = 0;
  double total = 0.0;
  std::vector<double> atom_vol(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& atom = p.atoms[i];
    const bool contained = std::includes(x.members.begin(), x.members.end(),
                                         atom.begin(), atom.end());
    if (contained) {
      for (const auto& e : atom) atom_vol[i] += u.volume_of(e);
      total += atom_vol[i];
      covered += atom.size();
      h.weights[i] = atom_vol[i];  // normalized below
    } else {
      for (const auto& e : atom)
        if (x.members.count(e))
          throw std::invalid_argument(
              "uniform_histogram: set " + x.name +
              " is not a union of atoms (stale partition)");
    }
  }
  if (covered != x.members.size())
    throw std::invalid_argument("uniform_histogram: set " + x.name +
                                " has elements outside the partition");

  for (std::size_t i = 0; i < m; ++i) {
    h.weights[i] /= total;
    if (atom_vol[i] > 0.0) h.density[i] = h.weights[i] / atom_vol[i];
  }
  return h;
}

static void require_same_partition(const AtomHistogram& p,
                                   const AtomHistogram& q, const char* who) {
  if (p.partition_tag != q.partition_tag || p.weights.size() != q.weights.size())
    throw std::invalid_argument(std::string(who) + ": partition mismatch");
}

double damped_kl(const AtomHistogram& p, const AtomHistogram& q, double eps) {
  require_same_partition(p, q, "damped_kl");
  if (!(eps > 0.0)) throw std::invalid_argument("damped_kl: eps must be > 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    if (p.weights[i] <= 0.0) continue;
    acc += p.weights[i] * (std::log(p.density[i]) - std::log(q.density[i] + eps));
  }
  return std::max(acc, 0.0);
}

double extended_kl(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("extended_kl: length mismatch");
  double acc = 0.0, sum_p = 0.0, sum_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum_p += p[i];
    sum_q += q[i];
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
      acc += p[i] * std::log(p[i] / q[i]);
    }
  }
  return acc + sum_q - sum_p;
}

double discrete_js(const AtomHistogram& p, const AtomHistogram& q) {
  require_same_partition(p, q, "discrete_js");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    const double m = 0.5 * (p.weights[i] + q.weights[i]);
    if (p.weights[i] > 0.0) acc += 0.5 * p.weights[i] * std::log(p.weights[i] / m);
    if (q.weights[i] > 0.0) acc += 0.5 * q.weights[i] * std::log(q.weights[i] / m);
  }
  return acc;
}

double entropy(const AtomHistogram& h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < h.weights.size(); ++i)
    if (h.weights[i] > 0.0) acc -= h.weights[i] * std::log(h.density[i]);
  return acc;
}

}  // namespace setembed
