#pragma once
// Process-wide memo tables. Lookups are thread safe; a value computed twice
// concurrently is discarded in favour of the first one stored.

#include <map>
#include <memory>
#include <mutex>

namespace cyclok {

template <class Key, class Value>
class Memo {
  public:
    template <class F>
    std::shared_ptr<const Value> get(const Key& k, F&& make) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = table_.find(k);
            if (it != table_.end()) return it->second;
        }
        auto v = std::make_shared<const Value>(make());
        std::lock_guard<std::mutex> lk(mu_);
        return table_.emplace(k, std::move(v)).first->second;
    }

  private:
    std::mutex mu_;
    std::map<Key, std::shared_ptr<const Value>> table_;
};

}  // namespace cyclok
