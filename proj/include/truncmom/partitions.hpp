#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "truncmom/common.hpp"

namespace truncmom {

// A partition: weakly decreasing sequence of positive integer parts.
// The empty partition is allowed and indexes the constant term of every
// hypergeometric series.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] <= 0)
        throw invalid_parameter("Partition: parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw invalid_parameter("Partition: parts must be weakly decreasing");
    }
  }

  const std::vector<int>& parts() const { return parts_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int weight() const {
    int w = 0;
    for (int p : parts_) w += p;
    return w;
  }
  // 1-indexed row, 0 beyond the length.
  int part(int i) const {
    return (i >= 1 && i <= length()) ? parts_[i - 1] : 0;
  }
  bool empty() const { return parts_.empty(); }

  // 2*nu: every part doubled.
  Partition doubled() const {
    std::vector<int> p(parts_);
    for (int& v : p) v *= 2;
    return Partition(std::move(p));
  }
  // nu^2: every part repeated twice.
  Partition squared() const {
    std::vector<int> p;
    p.reserve(parts_.size() * 2);
    for (int v : parts_) {
      p.push_back(v);
      p.push_back(v);
    }
    return Partition(std::move(p));
  }
  // Conjugate (transpose of the Young diagram).
  Partition conjugate() const {
    if (parts_.empty()) return Partition();
    std::vector<int> c(parts_[0], 0);
    for (int v : parts_)
      for (int j = 0; j < v; ++j) ++c[j];
    return Partition(std::move(c));
  }

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }

 private:
  std::vector<int> parts_;
};

// Streams every partition fitting in a max_part x max_length box exactly
// once, starting with the empty partition. The caller owns the iteration
// state, so independent enumerations never interact.
class PartitionEnumerator {
 public:
  PartitionEnumerator(int max_part, int max_length)
      : max_part_(max_part), max_length_(max_length) {
    if (max_part < 0 || max_length < 0)
      throw invalid_parameter("PartitionEnumerator: box sizes must be >= 0");
  }

  std::optional<Partition> next() {
    if (!started_) {
      started_ = true;
      return Partition();  // empty partition first
    }
    if (max_part_ == 0 || max_length_ == 0) return std::nullopt;
    // Deepen by appending a 1 while room remains; otherwise backtrack to the
    // deepest part that can still be incremented.
    if (static_cast<int>(current_.size()) < max_length_) {
      current_.push_back(1);
      return Partition(current_);
    }
    while (!current_.empty()) {
      const int cap = current_.size() == 1
                          ? max_part_
                          : std::min(max_part_, current_[current_.size() - 2]);
      if (current_.back() < cap) {
        ++current_.back();
        return Partition(current_);
      }
      current_.pop_back();
    }
    return std::nullopt;
  }

 private:
  int max_part_;
  int max_length_;
  bool started_ = false;
  std::vector<int> current_;
};

// All partitions in the box, materialized.
inline std::vector<Partition> enumerate_partitions(int max_part,
                                                   int max_length) {
  PartitionEnumerator en(max_part, max_length);
  std::vector<Partition> out;
  while (auto p = en.next()) out.push_back(std::move(*p));
  return out;
}

// Visits every partition of exact weight w with at most max_length parts.
inline void for_each_partition_of_weight(
    int w, int max_length, const std::function<void(const Partition&)>& fn) {
  if (w < 0) throw invalid_parameter("for_each_partition_of_weight: w >= 0");
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      fn(Partition(parts));
      return;
    }
    if (static_cast<int>(parts.size()) >= max_length) return;
    for (int p = std::min(max_part, remaining); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  rec(w, w);
}

}  // namespace truncmom
