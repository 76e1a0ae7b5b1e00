#include "terzatic/core.hpp"

namespace terzatic {

std::size_t count_multi_indices(std::span<const std::size_t> extents, std::size_t cap) {
  if (extents.empty()) throw ValidationError("at least one block extent required");
  std::size_t total = 1;
  bool saturated = false;
  for (std::size_t n : extents) {
    if (n == 0) throw ValidationError("block extents must be >= 1");
    if (total > std::numeric_limits<std::size_t>::max() / n) {
      saturated = true;
      total = std::numeric_limits<std::size_t>::max();
    } else if (!saturated) {
      total *= n;
    }
  }
  if (saturated || total > cap) throw CapExceeded(total, cap);
  return total;
}

MultiIndexRange::MultiIndexRange(std::vector<std::size_t> extents, std::size_t cap)
    : extents_(std::move(extents)), size_(count_multi_indices(extents_, cap)) {}

MultiIndexRange::iterator::iterator(const std::vector<std::size_t>* extents, std::size_t position)
    : extents_(extents), position_(position) {
  current_.j.assign(extents->size(), 1);
  // Decode position in mixed radix, last coordinate fastest.
  std::size_t rest = position;
  for (std::size_t i = extents->size(); i-- > 0;) {
    current_.j[i] = 1 + rest % (*extents)[i];
    rest /= (*extents)[i];
  }
}

MultiIndexRange::iterator& MultiIndexRange::iterator::operator++() {
  ++position_;
  for (std::size_t i = current_.j.size(); i-- > 0;) {
    if (current_.j[i] < (*extents_)[i]) {
      ++current_.j[i];
      return *this;
    }
    current_.j[i] = 1;
  }
  return *this;
}

}  // namespace terzatic
