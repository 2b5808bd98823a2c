#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rover/rng.hpp"

namespace rover {

class EmptyPoolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One environment interaction. Every episode end here is a genuine MDP
// termination (the step cap is itself penalized), so `done` is stored exactly
// as the environment reports it.
struct Transition {
  std::vector<double> obs;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_obs;
  bool done = false;
};

// Fixed-capacity ring buffer of transitions with uniform sampling.
class ReplayPool {
 public:
  explicit ReplayPool(size_t capacity);

  void add(Transition t);
  size_t size() const { return size_; }
  size_t capacity() const { return capacity_; }

  // Samples `count` transitions uniformly with replacement.
  std::vector<const Transition*> sample(size_t count, Rng& rng) const;

 private:
  size_t capacity_;
  size_t size_ = 0;
  size_t next_ = 0;
  std::vector<Transition> items_;
};

}  // namespace rover
