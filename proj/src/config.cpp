#include "gmx/config.hpp"

#include <sstream>

namespace gmx {

std::string coord_to_string(const Coord& c) {
  std::ostringstream os;
  os << c.block << ":" << c.index;
  return os.str();
}

Rat Memory::get(const Coord& c) const {
  if (c.block < 0 || static_cast<std::size_t>(c.block) >= blocks_.size())
    return Rat(0);
  const auto& b = blocks_[static_cast<std::size_t>(c.block)];
  auto it = b.find(c.index);
  return it == b.end() ? Rat(0) : it->second;
}

void Memory::set(const Coord& c, const Rat& v) {
  if (c.block < 0) throw std::invalid_argument("negative block index");
  ensure_blocks(static_cast<std::size_t>(c.block) + 1);
  auto& b = blocks_[static_cast<std::size_t>(c.block)];
  if (v == 0)
    b.erase(c.index);
  else
    b[c.index] = v;
}

void Memory::ensure_blocks(std::size_t n) {
  if (blocks_.size() < n) blocks_.resize(n);
}

const std::map<long, Rat>& Memory::block(std::size_t b) const {
  static const std::map<long, Rat> empty;
  return b < blocks_.size() ? blocks_[b] : empty;
}

bool Memory::operator==(const Memory& o) const {
  std::size_t n = std::max(blocks_.size(), o.blocks_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (block(i) != o.block(i)) return false;
  return true;
}

}  // namespace gmx
