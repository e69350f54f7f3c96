#ifndef GMX_CONFIG_HPP_
#define GMX_CONFIG_HPP_

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "gmx/rat.hpp"

namespace gmx {

/// A memory coordinate: (block, cell index). Block 0 is the shared block by
/// convention wherever sharing applies.
struct Coord {
  int block = 0;
  long index = 0;
  auto operator<=>(const Coord&) const = default;
};

std::string coord_to_string(const Coord& c);

enum class BlockKind { Integer, Real };

/// Number and kind of memory blocks an action space is made of.
struct SpaceSignature {
  std::vector<BlockKind> blocks;
  bool operator==(const SpaceSignature&) const = default;
};

/// Finitely supported memory: absent cells are 0.
class Memory {
 public:
  Memory() = default;
  explicit Memory(std::size_t num_blocks) : blocks_(num_blocks) {}

  Rat get(const Coord& c) const;
  void set(const Coord& c, const Rat& v);
  std::size_t num_blocks() const { return blocks_.size(); }
  void ensure_blocks(std::size_t n);
  const std::map<long, Rat>& block(std::size_t b) const;

  bool operator==(const Memory& o) const;

 private:
  std::vector<std::map<long, Rat>> blocks_;
};

/// Control states are strings; product states join components with ','.
using State = std::string;

struct ConfigPoint {
  Memory mem;
  State state;
  bool operator==(const ConfigPoint&) const = default;
};

}  // namespace gmx

#endif  // GMX_CONFIG_HPP_
