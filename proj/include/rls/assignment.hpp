#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace rls {

using Group = int;

/// Item -> group map for a partition into `k` (possibly empty) groups.
class Assignment {
public:
    Assignment() = default;

    Assignment(std::size_t items, int groups) : group_of_(items, 0), k_(groups) {
        if (groups < 1) throw std::invalid_argument("group count must be positive");
    }

    Assignment(std::vector<Group> group_of, int groups) : group_of_(std::move(group_of)), k_(groups) {
        if (groups < 1) throw std::invalid_argument("group count must be positive");
        for (Group g : group_of_)
            if (g < 0 || g >= groups) throw std::invalid_argument("group id out of range");
    }

    std::size_t size() const noexcept { return group_of_.size(); }
    int group_count() const noexcept { return k_; }

    Group operator[](std::size_t item) const noexcept { return group_of_[item]; }
    void set(std::size_t item, Group g) noexcept { group_of_[item] = g; }

    std::span<const Group> groups() const noexcept { return group_of_; }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<Group> group_of_;
    int k_ = 0;
};

}  // namespace rls
