#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace symcone {

enum class BlockKind { Orthant, Psd, Soc };

std::string to_string(BlockKind kind);

/// One factor of a direct-product cone.
///
/// `size` is the block's defining parameter: the number of coordinates for
/// Orthant and Soc blocks, and the matrix order for Psd blocks.
struct Block {
  BlockKind kind;
  int size;

  /// Number of isometric coordinates occupied by the block.
  int dim() const;
  /// Jordan rank of the block.
  int rank() const;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Cone layout resolved against a block list: coordinate and rank offsets.
struct BlockLayout {
  Block block;
  int offset;       // first coordinate of the block
  int rank_offset;  // first eigenvalue slot of the block
};

class ConeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered product of orthant, PSD and second-order cone blocks.
///
/// Immutable and cheap to copy; copies share the resolved layout.
class ConeDescriptor {
 public:
  explicit ConeDescriptor(std::vector<Block> blocks);

  static ConeDescriptor orthant(int n) { return ConeDescriptor({{BlockKind::Orthant, n}}); }
  static ConeDescriptor psd(int n) { return ConeDescriptor({{BlockKind::Psd, n}}); }
  static ConeDescriptor soc(int n) { return ConeDescriptor({{BlockKind::Soc, n}}); }

  const std::vector<BlockLayout>& layout() const { return impl_->layout; }
  std::size_t num_blocks() const { return impl_->layout.size(); }
  const BlockLayout& block(std::size_t i) const { return impl_->layout.at(i); }

  int ambient_dim() const { return impl_->ambient_dim; }
  int rank() const { return impl_->rank; }

  bool is_pure_orthant() const;

  /// Index of the block containing coordinate `coord`.
  std::size_t block_of_coord(int coord) const;
  /// Index of the block owning eigenvalue slot `slot`.
  std::size_t block_of_rank_slot(int slot) const;

  /// Human-readable form, e.g. "ORTHANT 3 x PSD 2".
  std::string describe() const;

  friend bool operator==(const ConeDescriptor& a, const ConeDescriptor& b) {
    return a.impl_ == b.impl_ || a.blocks() == b.blocks();
  }

  std::vector<Block> blocks() const;

 private:
  struct Impl {
    std::vector<BlockLayout> layout;
    int ambient_dim = 0;
    int rank = 0;
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace symcone
