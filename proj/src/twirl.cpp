// Copyright 2026 The macrocert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "macrocert/twirl.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "macrocert/errors.hpp"
#include "macrocert/linalg.hpp"

namespace macrocert {
namespace {

constexpr double kDropWeight = 1e-15;

std::vector<BasisPair> union_basis(const BlockDiagonalState& a, const BlockDiagonalState& b,
                                   std::int64_t label) {
  std::vector<BasisPair> out;
  if (a.contains(label)) out = a.block(label).basis;
  if (b.contains(label)) {
    const auto& other = b.block(label).basis;
    std::vector<BasisPair> merged;
    merged.reserve(out.size() + other.size());
    std::set_union(out.begin(), out.end(), other.begin(), other.end(), std::back_inserter(merged));
    out = std::move(merged);
  }
  return out;
}

}  // namespace

BlockDiagonalState::BlockDiagonalState(std::map<std::int64_t, SectorBlock> blocks) {
  double total = 0.0;
  for (auto it = blocks.begin(); it != blocks.end();) {
    if (it->second.weight < kDropWeight) {
      it = blocks.erase(it);
    } else {
      total += it->second.weight;
      ++it;
    }
  }
  if (total > 0.0) {
    for (auto& [label, blk] : blocks) blk.weight /= total;
  }
  blocks_ = std::move(blocks);
}

const SectorBlock& BlockDiagonalState::block(std::int64_t label) const {
  const auto it = blocks_.find(label);
  if (it == blocks_.end()) throw NotFoundError("no sector with label " + std::to_string(label));
  return it->second;
}

Eigen::MatrixXd BlockDiagonalState::weighted_on(std::int64_t label,
                                                const std::vector<BasisPair>& basis) const {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const auto it = blocks_.find(label);
  if (it == blocks_.end()) return out;
  const SectorBlock& blk = it->second;
  std::vector<Eigen::Index> pos(blk.basis.size());
  for (std::size_t i = 0; i < blk.basis.size(); ++i) {
    const auto found = std::lower_bound(basis.begin(), basis.end(), blk.basis[i]);
    if (found == basis.end() || *found != blk.basis[i]) {
      throw DomainError("weighted_on: target basis does not cover the sector basis");
    }
    pos[i] = found - basis.begin();
  }
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = 0; j < pos.size(); ++j) {
      out(pos[i], pos[j]) = blk.weight * blk.matrix(static_cast<Eigen::Index>(i),
                                                    static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

SupportDensity density_of(const NumberState& state) {
  SupportDensity d;
  d.support = state.support();
  const auto n = static_cast<Eigen::Index>(d.support.size());
  Eigen::VectorXd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a(i) = state[d.support[static_cast<std::size_t>(i)]];
  d.rho = a * a.transpose();
  return d;
}

SupportDensity density_of(const MixtureEnsemble& ensemble) {
  std::set<std::int64_t> all;
  for (const auto& c : ensemble.components()) {
    for (auto n : c.state.support()) all.insert(n);
  }
  SupportDensity d;
  d.support.assign(all.begin(), all.end());
  const auto n = static_cast<Eigen::Index>(d.support.size());
  d.rho = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : ensemble.components()) {
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a(i) = c.state[d.support[static_cast<std::size_t>(i)]];
    d.rho.noalias() += c.weight * a * a.transpose();
  }
  return d;
}

BlockDiagonalState twirl_density_joint(const SupportDensity& sys, const MixtureEnsemble& rf) {
  const auto s = sys.support.size();
  if (s == 0) throw DomainError("twirl_density_joint: empty system support");
  if (sys.rho.rows() != static_cast<Eigen::Index>(s) || sys.rho.cols() != static_cast<Eigen::Index>(s)) {
    throw DomainError("twirl_density_joint: density matrix does not match its support");
  }
  const auto& comps = rf.components();
  std::int64_t rf_lo = comps.front().state.offset();
  std::int64_t rf_hi = comps.front().state.last();
  for (const auto& c : comps) {
    rf_lo = std::min(rf_lo, c.state.offset());
    rf_hi = std::max(rf_hi, c.state.last());
  }
  const std::int64_t k_lo = sys.support.front() + rf_lo;
  const std::int64_t k_hi = sys.support.back() + rf_hi;

  std::map<std::int64_t, SectorBlock> blocks;
  std::vector<std::size_t> members;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    members.clear();
    // Descending system index gives ascending rf index.
    for (std::size_t a = s; a-- > 0;) {
      const std::int64_t r = k - sys.support[a];
      if (r < rf_lo || r > rf_hi) continue;
      for (const auto& c : comps) {
        if (c.state[r] != 0.0) {
          members.push_back(a);
          break;
        }
      }
    }
    if (members.empty()) continue;

    const auto d = static_cast<Eigen::Index>(members.size());
    SectorBlock blk;
    blk.label = k;
    blk.basis.reserve(members.size());
    for (std::size_t a : members) blk.basis.push_back({k - sys.support[a], sys.support[a]});
    blk.matrix = Eigen::MatrixXd::Zero(d, d);
    for (const auto& c : comps) {
      Eigen::VectorXd r(d);
      for (Eigen::Index p = 0; p < d; ++p) r(p) = c.state[blk.basis[static_cast<std::size_t>(p)].rf_index];
      blk.matrix.noalias() += c.weight * r * r.transpose();
    }
    for (Eigen::Index p = 0; p < d; ++p) {
      for (Eigen::Index q = 0; q < d; ++q) {
        blk.matrix(p, q) *= sys.rho(static_cast<Eigen::Index>(members[static_cast<std::size_t>(p)]),
                                    static_cast<Eigen::Index>(members[static_cast<std::size_t>(q)]));
      }
    }
    blk.weight = blk.matrix.trace();
    if (!(blk.weight > 0.0)) continue;
    blk.matrix /= blk.weight;
    blocks.emplace(k, std::move(blk));
  }
  return BlockDiagonalState(std::move(blocks));
}

BlockDiagonalState twirl_pure_joint(const NumberState& sys, const NumberState& rf) {
  return twirl_density_joint(density_of(sys), MixtureEnsemble::pure(rf));
}

BlockDiagonalState twirl_mixture_joint(const MixtureEnsemble& sys, const NumberState& rf) {
  return twirl_density_joint(density_of(sys), MixtureEnsemble::pure(rf));
}

BlockDiagonalState merge_weighted(const std::vector<std::pair<double, BlockDiagonalState>>& parts) {
  std::set<std::int64_t> labels;
  for (const auto& [w, st] : parts) {
    for (const auto& [label, blk] : st.blocks()) labels.insert(label);
  }
  std::map<std::int64_t, SectorBlock> blocks;
  for (std::int64_t label : labels) {
    std::set<BasisPair> basis_set;
    for (const auto& [w, st] : parts) {
      if (st.contains(label)) {
        const auto& b = st.block(label).basis;
        basis_set.insert(b.begin(), b.end());
      }
    }
    SectorBlock blk;
    blk.label = label;
    blk.basis.assign(basis_set.begin(), basis_set.end());
    const auto d = static_cast<Eigen::Index>(blk.basis.size());
    blk.matrix = Eigen::MatrixXd::Zero(d, d);
    for (const auto& [w, st] : parts) blk.matrix += w * st.weighted_on(label, blk.basis);
    blk.weight = blk.matrix.trace();
    if (!(blk.weight > 0.0)) continue;
    blk.matrix /= blk.weight;
    blocks.emplace(label, std::move(blk));
  }
  return BlockDiagonalState(std::move(blocks));
}

double trace_distance_blocks(const BlockDiagonalState& a, const BlockDiagonalState& b) {
  std::set<std::int64_t> labels;
  for (const auto& [label, blk] : a.blocks()) labels.insert(label);
  for (const auto& [label, blk] : b.blocks()) labels.insert(label);
  double total = 0.0;
  for (std::int64_t label : labels) {
    const auto basis = union_basis(a, b, label);
    const Eigen::MatrixXd diff = a.weighted_on(label, basis) - b.weighted_on(label, basis);
    total += linalg::trace_norm_symmetric(diff);
  }
  return 0.5 * total;
}

std::vector<double> block_spectrum(const BlockDiagonalState& state, std::int64_t label) {
  return linalg::symmetric_eigenvalues_desc(state.block(label).matrix);
}

}  // namespace macrocert
