#pragma once

#include <cassert>
#include <cstddef>
#include <random>
#include <vector>

namespace rbmarket {

// One interaction: feature vectors for x and x', the unit-interval action and
// the scalar reward.
struct Transition {
    std::vector<double> state;
    std::vector<double> next_state;
    double action = 0.0;
    double reward = 0.0;
};

// Fixed-capacity ring buffer with uniform sampling (with replacement). Oldest
// entries are overwritten once the buffer wraps.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        assert(capacity_ > 0);
        data_.reserve(std::min<std::size_t>(capacity_, 4096));
    }

    void push(Transition t) {
        if (data_.size() < capacity_) {
            data_.push_back(std::move(t));
        } else {
            data_[cursor_] = std::move(t);
        }
        cursor_ = (cursor_ + 1) % capacity_;
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }

    const Transition& sample(std::mt19937_64& rng) const {
        assert(!data_.empty());
        std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
        return data_[pick(rng)];
    }

    std::vector<const Transition*> sample(std::size_t k, std::mt19937_64& rng) const {
        std::vector<const Transition*> batch;
        batch.reserve(k);
        for (std::size_t i = 0; i < k; ++i) batch.push_back(&sample(rng));
        return batch;
    }

    const Transition& at(std::size_t i) const { return data_[i]; }

  private:
    std::size_t capacity_;
    std::size_t cursor_ = 0;
    std::vector<Transition> data_;
};

}  // namespace rbmarket
