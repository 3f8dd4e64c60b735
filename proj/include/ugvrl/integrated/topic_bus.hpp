#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace ugvrl {

/// In-process publish/subscribe bus with named topics.
///
/// Topics are created on first use. A publish appends to the topic log and
/// enqueues the message for every subscriber that existed at that moment, all
/// under one lock, so each subscriber sees a topic's messages in publish order.
template <class Message>
class TopicBus {
  struct Queue {
    std::mutex mu;
    std::deque<Message> pending;
  };

 public:
  class Subscription {
   public:
    Subscription() = default;

    /// Removes and returns everything delivered since the last poll, oldest first.
    std::vector<Message> poll() {
      if (!queue_) return {};
      std::lock_guard lock(queue_->mu);
      std::vector<Message> out(std::make_move_iterator(queue_->pending.begin()),
                               std::make_move_iterator(queue_->pending.end()));
      queue_->pending.clear();
      return out;
    }

    std::size_t pending() const {
      if (!queue_) return 0;
      std::lock_guard lock(queue_->mu);
      return queue_->pending.size();
    }

    const std::string& topic() const noexcept { return topic_; }

   private:
    friend class TopicBus;
    Subscription(std::string topic, std::shared_ptr<Queue> q)
        : topic_(std::move(topic)), queue_(std::move(q)) {}
    std::string topic_;
    std::shared_ptr<Queue> queue_;
  };

  Subscription subscribe(const std::string& topic) {
    auto q = std::make_shared<Queue>();
    std::lock_guard lock(mu_);
    topics_[topic].subscribers.push_back(q);
    return Subscription(topic, std::move(q));
  }

  void publish(const std::string& topic, Message message) {
    std::lock_guard lock(mu_);
    auto& t = topics_[topic];
    auto& subs = t.subscribers;
    for (auto it = subs.begin(); it != subs.end();) {
      if (auto q = it->lock()) {
        std::lock_guard ql(q->mu);
        q->pending.push_back(message);
        ++it;
      } else {
        it = subs.erase(it);  // subscription dropped
      }
    }
    t.log.push_back(std::move(message));
  }

  /// Every message ever published on `topic`, in order.
  std::vector<Message> log(const std::string& topic) const {
    std::lock_guard lock(mu_);
    auto it = topics_.find(topic);
    return it == topics_.end() ? std::vector<Message>{} : it->second.log;
  }

  std::vector<std::string> topics() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> names;
    for (const auto& [name, _] : topics_) names.push_back(name);
    return names;
  }

 private:
  struct Topic {
    std::vector<Message> log;
    std::vector<std::weak_ptr<Queue>> subscribers;
  };

  mutable std::mutex mu_;
  std::map<std::string, Topic> topics_;
};

}  // namespace ugvrl
