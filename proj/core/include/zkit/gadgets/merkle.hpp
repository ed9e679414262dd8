#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zkit/gadgets/mimc.hpp"

namespace zkit::gadgets {

/// Authentication path from a leaf to the root. indices[i] = 1 when the
/// running node is the right child at level i (leaf level first).
struct MerklePath {
  FieldElement leaf;
  FieldElement root;
  std::vector<FieldElement> elements;
  std::vector<std::uint8_t> indices;
};

/// Parent node: mimc_hash({left, right}).
FieldElement merkle_node(const FieldElement& left, const FieldElement& right);

/// Folds a leaf up a path; no comparison with path.root.
FieldElement merkle_fold(const FieldElement& leaf, std::span<const FieldElement> elements,
                         std::span<const std::uint8_t> indices);

/// Sparse fixed-depth tree whose unused leaves are zero. Appends only;
/// inserting updates `depth` nodes.
class MerkleTree {
 public:
  explicit MerkleTree(const PrimeField& f, std::size_t depth);

  std::size_t depth() const { return depth_; }
  std::size_t size() const { return levels_[0].size(); }
  std::size_t capacity() const { return std::size_t{1} << depth_; }
  const std::vector<FieldElement>& leaves() const { return levels_[0]; }
  FieldElement root() const;

  /// Index of the new leaf. Throws TreeFull.
  std::size_t append(const FieldElement& leaf);
  /// Throws DimensionMismatch for an index past the last leaf.
  MerklePath path(std::size_t index) const;

 private:
  FieldElement node(std::size_t level, std::size_t index) const;

  std::size_t depth_;
  std::vector<std::vector<FieldElement>> levels_;  // levels_[0] = leaves
  std::vector<FieldElement> empty_;                // root of an all-zero subtree per level
};

/// Constrains leaf to hash up to root along the path; each level costs one
/// dual_mux and a two-input sponge. Returns the computed root.
LC merkle_inclusion(CircuitBuilder& b, const LC& leaf, const LC& root,
                    std::span<const LC> elements, std::span<const LC> indices);

}  // namespace zkit::gadgets
