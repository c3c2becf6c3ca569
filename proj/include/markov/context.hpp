#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace markov {

using StateId = std::uint32_t;

// Reserved id of the synthetic path-boundary state. It is always present in a
// vocabulary and never appears inside a stored path.
inline constexpr StateId kResetState = 0;

// Hard cap on the chain order so contexts fit in a fixed-size key.
inline constexpr int kMaxOrder = 8;

// Problems caused by user-supplied data or parameters (bad files, bad CLI
// values). Everything else thrown by this library is a programming error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A context is the tuple of the k most recent states, oldest first. Stored
// inline so it can key hash maps without allocation. Unused slots stay zero,
// which makes default equality valid.
class ContextKey {
 public:
  ContextKey() = default;

  explicit ContextKey(std::span<const StateId> ids) {
    if (ids.size() > kMaxOrder)
      throw std::invalid_argument("ContextKey: order exceeds kMaxOrder");
    len_ = static_cast<std::uint8_t>(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids_[i] = ids[i];
  }

  static ContextKey all_reset(int order) {
    if (order < 0 || order > kMaxOrder)
      throw std::invalid_argument("ContextKey: order out of range");
    ContextKey key;
    key.len_ = static_cast<std::uint8_t>(order);
    return key;  // slots are already kResetState
  }

  int size() const { return len_; }
  bool empty() const { return len_ == 0; }

  StateId operator[](int i) const { return ids_[static_cast<std::size_t>(i)]; }

  std::span<const StateId> ids() const { return {ids_.data(), len_}; }

  // Advances the context by one observed state: drops the oldest entry and
  // appends `next`. For an order-0 (empty) context this is a no-op.
  ContextKey shifted(StateId next) const {
    ContextKey out;
    out.len_ = len_;
    for (int i = 0; i + 1 < len_; ++i) out.ids_[static_cast<std::size_t>(i)] = ids_[static_cast<std::size_t>(i) + 1];
    if (len_ > 0) out.ids_[static_cast<std::size_t>(len_ - 1)] = next;
    return out;
  }

  // The newest `k` entries, i.e. this context marginalized down to order k.
  ContextKey suffix(int k) const {
    if (k < 0 || k > len_)
      throw std::invalid_argument("ContextKey::suffix: bad length");
    ContextKey out;
    out.len_ = static_cast<std::uint8_t>(k);
    for (int i = 0; i < k; ++i)
      out.ids_[static_cast<std::size_t>(i)] = ids_[static_cast<std::size_t>(len_ - k + i)];
    return out;
  }

  bool all_equal_to(StateId s) const {
    for (int i = 0; i < len_; ++i)
      if (ids_[static_cast<std::size_t>(i)] != s) return false;
    return true;
  }

  friend bool operator==(const ContextKey&, const ContextKey&) = default;

  // Lexicographic by length, then elements; used only for stable output order.
  friend bool operator<(const ContextKey& a, const ContextKey& b) {
    if (a.len_ != b.len_) return a.len_ < b.len_;
    for (int i = 0; i < a.len_; ++i)
      if (a.ids_[static_cast<std::size_t>(i)] != b.ids_[static_cast<std::size_t>(i)])
        return a.ids_[static_cast<std::size_t>(i)] < b.ids_[static_cast<std::size_t>(i)];
    return false;
  }

 private:
  std::array<StateId, kMaxOrder> ids_{};
  std::uint8_t len_ = 0;
};

struct ContextKeyHash {
  std::size_t operator()(const ContextKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(key.size());
    for (int i = 0; i < key.size(); ++i) {
      h ^= key[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace markov
