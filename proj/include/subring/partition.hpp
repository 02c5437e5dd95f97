#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subring/checked_int.hpp"
#include "subring/int_matrix.hpp"
#include "subring/lattice.hpp"

namespace subring {

/// Stirling number of the second kind S(u, v).
inline Int stirling2(std::size_t u, std::size_t v) {
  if (v > u) return 0;
  // row[j] holds S(i, j) while sweeping i upward.
  std::vector<Int> row(v + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= u; ++i) {
    for (std::size_t j = std::min(i, v); j >= 1; --j)
      row[j] = checked::add(checked::mul(static_cast<Int>(j), row[j]), row[j - 1]);
    row[0] = 0;
  }
  return row[v];
}

/// Partition of {0, ..., ground_size - 1} into nonempty blocks, each block
/// sorted and blocks ordered by their minimum element.
class SetPartition {
 public:
  SetPartition(std::size_t ground_size, std::vector<std::vector<std::size_t>> blocks)
      : ground_size_(ground_size), blocks_(std::move(blocks)) {
    std::vector<bool> seen(ground_size_, false);
    for (auto& b : blocks_) {
      if (b.empty()) throw UsageError("SetPartition: empty block");
      std::sort(b.begin(), b.end());
      for (std::size_t x : b) {
        if (x >= ground_size_ || seen[x]) throw UsageError("SetPartition: blocks overlap or leave the ground set");
        seen[x] = true;
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw UsageError("SetPartition: blocks do not cover the ground set");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
  }

  /// From a restricted growth string: element i goes to block rgs[i].
  static SetPartition from_restricted_growth(std::span<const std::size_t> rgs) {
    std::size_t count = rgs.empty() ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<std::size_t>> blocks(count);
    for (std::size_t i = 0; i < rgs.size(); ++i) blocks[rgs[i]].push_back(i);
    return SetPartition(rgs.size(), std::move(blocks));
  }

  std::size_t ground_size() const { return ground_size_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }

  std::vector<std::size_t> restricted_growth() const {
    std::vector<std::size_t> out(ground_size_);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (std::size_t x : blocks_[b]) out[x] = b;
    return out;
  }

  /// "{{0,3,4},{1,5},{2,7,8},{6}}"
  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (b) os << ',';
      os << '{';
      for (std::size_t i = 0; i < blocks_[b].size(); ++i) os << (i ? "," : "") << blocks_[b][i];
      os << '}';
    }
    os << '}';
    return os.str();
  }

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  std::size_t ground_size_;
  std::vector<std::vector<std::size_t>> blocks_;
};

inline std::ostream& operator<<(std::ostream& os, const SetPartition& p) {
  return os << p.to_string();
}

/// All partitions of a ground set into `block_count` blocks, in lexicographic
/// order of their restricted growth strings.
inline std::vector<SetPartition> enumerate_partitions(std::size_t ground_size,
                                                      std::size_t block_count) {
  std::vector<SetPartition> out;
  if (block_count > ground_size) return out;
  if (ground_size == 0) {
    out.emplace_back(0, std::vector<std::vector<std::size_t>>{});
    return out;
  }
  if (block_count == 0) return out;
  std::vector<std::size_t> rgs(ground_size, 0);
  // rgs[0] = 0; extend position by position, keeping enough room to open
  // the remaining blocks.
  auto rec = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
    if (pos == ground_size) {
      if (used == block_count) out.push_back(SetPartition::from_restricted_growth(rgs));
      return;
    }
    const std::size_t remaining = ground_size - pos;
    const std::size_t top = std::min(used, block_count - 1);
    for (std::size_t b = 0; b <= top; ++b) {
      const std::size_t next_used = std::max(used, b + 1);
      if (block_count - next_used > remaining - 1) continue;
      rgs[pos] = b;
      self(self, pos + 1, next_used);
    }
  };
  rec(rec, 1, 1);
  return out;
}

/// Coordinate pattern Z^n -> Z^(n+k): target coordinate j carries source
/// coordinate assignment[j] (1-based), or 0 when assignment[j] == 0.
class AcceptableMap {
 public:
  AcceptableMap(std::size_t source_dim, std::vector<std::size_t> assignment)
      : source_dim_(source_dim), assignment_(std::move(assignment)) {
    std::vector<bool> hit(source_dim_ + 1, false);
    for (std::size_t a : assignment_) {
      if (a > source_dim_) throw UsageError("AcceptableMap: source index out of range");
      hit[a] = true;
    }
    for (std::size_t i = 1; i <= source_dim_; ++i)
      if (!hit[i]) throw UsageError("AcceptableMap: source coordinate never used (map not injective)");
  }

  static AcceptableMap identity(std::size_t n) {
    std::vector<std::size_t> a(n);
    std::iota(a.begin(), a.end(), std::size_t{1});
    return AcceptableMap(n, std::move(a));
  }

  /// Parses "a,b,0,0,a,c,b,b"; letters name source coordinates in order,
  /// `x<i>` (1-based) is accepted for any index.
  static AcceptableMap parse(std::string_view text, std::size_t source_dim) {
    std::vector<std::size_t> a;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view tok = text.substr(start, end - start);
      if (tok == "0") {
        a.push_back(0);
      } else if (tok.size() == 1 && tok[0] >= 'a' && tok[0] <= 'z') {
        a.push_back(static_cast<std::size_t>(tok[0] - 'a') + 1);
      } else if (tok.size() > 1 && tok[0] == 'x') {
        a.push_back(std::stoul(std::string(tok.substr(1))));
      } else {
        throw UsageError("AcceptableMap::parse: bad token '" + std::string(tok) + "'");
      }
      start = end + 1;
    }
    return AcceptableMap(source_dim, std::move(a));
  }

  std::size_t source_dim() const { return source_dim_; }
  std::size_t target_dim() const { return assignment_.size(); }
  const std::vector<std::size_t>& assignment() const { return assignment_; }

  /// Block A_i: 1-based target positions carrying source coordinate i.
  std::vector<std::size_t> block(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < assignment_.size(); ++j)
      if (assignment_[j] == i) out.push_back(j + 1);
    return out;
  }

  /// min A_i increases with i.
  bool is_ordered() const {
    std::size_t next = 1;
    for (std::size_t a : assignment_) {
      if (a == 0 || a < next) continue;
      if (a != next) return false;
      ++next;
    }
    return true;
  }

  IntVector apply(std::span<const Int> x) const {
    if (x.size() != source_dim_) throw UsageError("AcceptableMap::apply: dimension mismatch");
    IntVector y(assignment_.size(), 0);
    for (std::size_t j = 0; j < assignment_.size(); ++j)
      if (assignment_[j] != 0) y[j] = x[assignment_[j] - 1];
    return y;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < assignment_.size(); ++j) {
      if (j) out += ',';
      const std::size_t a = assignment_[j];
      if (a == 0)
        out += '0';
      else if (source_dim_ <= 26)
        out += static_cast<char>('a' + a - 1);
      else
        out += "x" + std::to_string(a);
    }
    return out;
  }

  friend bool operator==(const AcceptableMap&, const AcceptableMap&) = default;
  friend auto operator<=>(const AcceptableMap&, const AcceptableMap&) = default;

 private:
  std::size_t source_dim_;
  std::vector<std::size_t> assignment_;
};

inline std::ostream& operator<<(std::ostream& os, const AcceptableMap& g) {
  return os << g.to_string();
}

/// Ordered acceptable map of a partition of {0, ..., n+k} into n+1 blocks.
/// Element 0 marks the zero block; its other elements become zero
/// coordinates.
inline AcceptableMap partition_to_map(const SetPartition& p, std::size_t source_dim) {
  if (p.block_count() != source_dim + 1)
    throw UsageError("partition_to_map: partition must have source_dim + 1 blocks");
  std::vector<std::size_t> assignment(p.ground_size() - 1, 0);
  for (std::size_t b = 1; b < p.block_count(); ++b)
    for (std::size_t x : p.blocks()[b]) assignment[x - 1] = b;
  return AcceptableMap(source_dim, std::move(assignment));
}

inline SetPartition map_to_partition(const AcceptableMap& g) {
  std::vector<std::vector<std::size_t>> blocks(g.source_dim() + 1);
  blocks[0].push_back(0);
  for (std::size_t j = 0; j < g.target_dim(); ++j) blocks[g.assignment()[j]].push_back(j + 1);
  return SetPartition(g.target_dim() + 1, std::move(blocks));
}

/// The unique (g0, tau) with g0 ordered and g0 = g o tau. `tau` is 1-based:
/// source coordinate i of g0 is source coordinate tau[i-1] of g.
struct OrderedMap {
  AcceptableMap map;
  std::vector<std::size_t> permutation;
};

inline OrderedMap order_map(const AcceptableMap& g) {
  const std::size_t n = g.source_dim();
  std::vector<std::size_t> relabel(n + 1, 0);  // old index -> new index
  std::vector<std::size_t> tau;
  tau.reserve(n);
  for (std::size_t a : g.assignment()) {
    if (a == 0 || relabel[a] != 0) continue;
    tau.push_back(a);
    relabel[a] = tau.size();
  }
  std::vector<std::size_t> assignment(g.target_dim());
  for (std::size_t j = 0; j < g.target_dim(); ++j) assignment[j] = relabel[g.assignment()[j]];
  return {AcceptableMap(n, std::move(assignment)), std::move(tau)};
}

/// Image g(L) of a full-rank lattice L in Z^n.
inline Lattice apply_map(const AcceptableMap& g, const Lattice& l) {
  if (l.ambient_dim() != g.source_dim()) throw UsageError("apply_map: dimension mismatch");
  if (!l.is_full_rank()) throw PreconditionError("apply_map: lattice must be full rank");
  const IntMatrix& b = l.basis();
  IntMatrix image(b.rows(), g.target_dim());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    const IntVector y = g.apply(b.row(i));
    std::copy(y.begin(), y.end(), image.row(i).begin());
  }
  return Lattice::from_generators(image);
}

/// One ordered representative per class of acceptable maps Z^n -> Z^target.
inline std::vector<AcceptableMap> enumerate_ordered_maps(std::size_t source_dim,
                                                         std::size_t target_dim) {
  if (target_dim < source_dim) throw UsageError("enumerate_ordered_maps: target smaller than source");
  std::vector<AcceptableMap> out;
  for (const auto& p : enumerate_partitions(target_dim + 1, source_dim + 1))
    out.push_back(partition_to_map(p, source_dim));
  return out;
}

}  // namespace subring
