#pragma once

#include <cstddef>
#include <vector>

namespace posproof::detail {

/// Calls fn once per element of the cartesian product of choices, in
/// lexicographic order. Does nothing if any choice list is empty.
template <typename T, typename Fn>
void for_each_product(const std::vector<std::vector<T>>& choices, Fn&& fn) {
  for (const auto& c : choices)
    if (c.empty()) return;
  std::vector<std::size_t> idx(choices.size(), 0);
  std::vector<T> pick;
  pick.reserve(choices.size());
  while (true) {
    pick.clear();
    for (std::size_t i = 0; i < idx.size(); ++i) pick.push_back(choices[i][idx[i]]);
    fn(pick);
    std::size_t i = idx.size();
    while (i > 0 && ++idx[i - 1] == choices[i - 1].size()) idx[--i] = 0;
    if (i == 0) return;
  }
}

}  // namespace posproof::detail
