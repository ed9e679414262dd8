#include "zkit/gadgets/merkle.hpp"

#include "zkit/gadgets/basic.hpp"

namespace zkit::gadgets {

FieldElement merkle_node(const FieldElement& left, const FieldElement& right) {
  return mimc_hash({left, right});
}

FieldElement merkle_fold(const FieldElement& leaf, std::span<const FieldElement> elements,
                         std::span<const std::uint8_t> indices) {
  if (elements.size() != indices.size()) {
    throw Error(Errc::kDimensionMismatch, "merkle path: element and index counts differ");
  }
  FieldElement cur = leaf;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    cur = indices[i] ? merkle_node(elements[i], cur) : merkle_node(cur, elements[i]);
  }
  return cur;
}

MerkleTree::MerkleTree(const PrimeField& f, std::size_t depth) : depth_(depth), levels_(depth + 1) {
  if (depth == 0 || depth > 32) {
    throw Error(Errc::kDimensionMismatch, "merkle depth must be in 1..32");
  }
  empty_.push_back(f.zero());
  for (std::size_t l = 0; l < depth; ++l) empty_.push_back(merkle_node(empty_[l], empty_[l]));
}

FieldElement MerkleTree::node(std::size_t level, std::size_t index) const {
  const auto& row = levels_[level];
  return index < row.size() ? row[index] : empty_[level];
}

FieldElement MerkleTree::root() const { return node(depth_, 0); }

std::size_t MerkleTree::append(const FieldElement& leaf) {
  if (size() == capacity()) throw Error(Errc::kTreeFull, "merkle tree is full");
  std::size_t index = size();
  levels_[0].push_back(leaf);
  std::size_t i = index;
  for (std::size_t l = 0; l < depth_; ++l) {
    std::size_t parent = i / 2;
    FieldElement h = merkle_node(node(l, parent * 2), node(l, parent * 2 + 1));
    auto& up = levels_[l + 1];
    if (parent < up.size()) {
      up[parent] = h;
    } else {
      up.push_back(h);
    }
    i = parent;
  }
  return index;
}

MerklePath MerkleTree::path(std::size_t index) const {
  if (index >= size()) throw Error(Errc::kDimensionMismatch, "merkle path: no such leaf");
  MerklePath p{levels_[0][index], root(), {}, {}};
  std::size_t i = index;
  for (std::size_t l = 0; l < depth_; ++l) {
    p.elements.push_back(node(l, i ^ 1));
    p.indices.push_back(static_cast<std::uint8_t>(i & 1));
    i /= 2;
  }
  return p;
}

LC merkle_inclusion(CircuitBuilder& b, const LC& leaf, const LC& root,
                    std::span<const LC> elements, std::span<const LC> indices) {
  if (elements.size() != indices.size() || elements.empty()) {
    throw Error(Errc::kDimensionMismatch, "merkle_inclusion: bad path shape");
  }
  LC cur = leaf;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    auto level = b.scope("level" + std::to_string(i));
    auto [l, r] = [&] {
      auto s = b.scope("mux");
      return dual_mux(b, cur, elements[i], indices[i]);
    }();
    auto s = b.scope("hash");
    LC pair[] = {l, r};
    cur = mimc_hash(b, pair);
  }
  b.assert_equal(circuit::Quadratic(cur), circuit::Quadratic(root));
  return cur;
}

}  // namespace zkit::gadgets
