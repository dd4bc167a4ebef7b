#pragma once

#include <stdexcept>
#include <string>

#include "qcs/parallel.hpp"

namespace qcs {

template <class Result>
std::vector<Result> map_family(const std::vector<FundamentalDiscriminant>& members, unsigned workers,
                               const std::function<Result(const FundamentalDiscriminant&, CharacterWorkspace&)>& fn) {
  std::vector<Result> out(members.size());
  workers = std::max(1u, workers);
  std::vector<CharacterWorkspace> spaces(workers);
  // Larger |d| cost more, so chunks stay small enough to balance the tail.
  const std::size_t chunk = std::max<std::size_t>(1, members.size() / (64 * workers));
  parallel_chunks(members.size(), workers, chunk, [&](std::size_t begin, std::size_t end, unsigned id) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = fn(members[i], spaces[id]);
      } catch (const std::exception& e) {
        throw std::runtime_error("discriminant " + std::to_string(members[i].value()) + ": " + e.what());
      }
    }
  });
  return out;
}

}  // namespace qcs
