#pragma once

#include <deque>
#include <mutex>
#include <unordered_set>

namespace porcheck::detail {

// Append-only hash-consing table. Nodes live for the whole process, so the
// returned pointers are stable and may be shared between threads.
template <class Node, class Hash, class Eq>
class Interner {
 public:
  const Node* intern(Node&& candidate) {
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(&candidate); it != index_.end()) return *it;
    store_.push_back(std::move(candidate));
    const Node* stored = &store_.back();
    index_.insert(stored);
    return stored;
  }

  std::size_t size() {
    std::lock_guard lock(mutex_);
    return store_.size();
  }

 private:
  struct PtrHash {
    std::size_t operator()(const Node* n) const { return Hash{}(*n); }
  };
  struct PtrEq {
    bool operator()(const Node* a, const Node* b) const { return Eq{}(*a, *b); }
  };

  std::mutex mutex_;
  std::deque<Node> store_;
  std::unordered_set<const Node*, PtrHash, PtrEq> index_;
};

}  // namespace porcheck::detail
