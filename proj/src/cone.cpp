#include "symcone/cone.hpp"

#include <algorithm>
#include <sstream>

namespace symcone {

std::string to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Orthant:
      return "ORTHANT";
    case BlockKind::Psd:
      return "PSD";
    case BlockKind::Soc:
      return "SOC";
  }
  return "?";
}

int Block::dim() const {
  switch (kind) {
    case BlockKind::Orthant:
    case BlockKind::Soc:
      return size;
    case BlockKind::Psd:
      return size * (size + 1) / 2;
  }
  return 0;
}

int Block::rank() const {
  switch (kind) {
    case BlockKind::Orthant:
    case BlockKind::Psd:
      return size;
    case BlockKind::Soc:
      return 2;
  }
  return 0;
}

ConeDescriptor::ConeDescriptor(std::vector<Block> blocks) {
  if (blocks.empty()) throw ConeError("cone must have at least one block");
  auto impl = std::make_shared<Impl>();
  for (const Block& b : blocks) {
    const int min_size = b.kind == BlockKind::Soc ? 2 : 1;
    if (b.size < min_size) {
      throw ConeError(to_string(b.kind) + " block needs size >= " + std::to_string(min_size) +
                      ", got " + std::to_string(b.size));
    }
    impl->layout.push_back({b, impl->ambient_dim, impl->rank});
    impl->ambient_dim += b.dim();
    impl->rank += b.rank();
  }
  impl_ = std::move(impl);
}

bool ConeDescriptor::is_pure_orthant() const {
  return std::all_of(layout().begin(), layout().end(),
                     [](const BlockLayout& l) { return l.block.kind == BlockKind::Orthant; });
}

std::size_t ConeDescriptor::block_of_coord(int coord) const {
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    const auto& l = layout()[i];
    if (coord >= l.offset && coord < l.offset + l.block.dim()) return i;
  }
  throw ConeError("coordinate out of range: " + std::to_string(coord));
}

std::size_t ConeDescriptor::block_of_rank_slot(int slot) const {
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    const auto& l = layout()[i];
    if (slot >= l.rank_offset && slot < l.rank_offset + l.block.rank()) return i;
  }
  throw ConeError("rank slot out of range: " + std::to_string(slot));
}

std::string ConeDescriptor::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    if (i) os << " x ";
    os << to_string(layout()[i].block.kind) << ' ' << layout()[i].block.size;
  }
  return os.str();
}

std::vector<Block> ConeDescriptor::blocks() const {
  std::vector<Block> out;
  out.reserve(num_blocks());
  for (const auto& l : layout()) out.push_back(l.block);
  return out;
}

}  // namespace symcone
