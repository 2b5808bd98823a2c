#include "rover/replay.hpp"

#include <utility>

namespace rover {

ReplayPool::ReplayPool(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
  items_.reserve(capacity);
}

void ReplayPool::add(Transition t) {
  if (size_ < capacity_) {
    items_.push_back(std::move(t));
    ++size_;
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayPool::sample(size_t count, Rng& rng) const {
  if (size_ == 0) throw EmptyPoolError("cannot sample from an empty replay pool");
  std::vector<const Transition*> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(&items_[rng.below(size_)]);
  return out;
}

}  // namespace rover
