#include "pandora/search.hpp"

#include <algorithm>

namespace pandora {

double SearchOutcome::best_value() const {
  return observed_values.empty()
             ? -std::numeric_limits<double>::infinity()
             : *std::max_element(observed_values.begin(), observed_values.end());
}

void SearchOutcome::clear() {
  opened.clear();
  observed_values.clear();
  observed_qualities.clear();
  was_fresh.clear();
  best_explored = 0;
  took_outside_option = false;
  utility = 0.0;
  must_choose_utility = 0.0;
}

SearchOutcome run_search(std::span<const ValueBelief> beliefs, double fresh_index,
                         const FreshSampler& fresh, const ExploredSampler& explored, double cost,
                         std::size_t step_cap) {
  std::vector<IndexedItem> order;
  order.reserve(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    order.push_back({reservation_value(beliefs[i], cost), static_cast<ItemId>(i)});
  }
  std::sort(order.begin(), order.end(), OpeningOrder{});
  SearchOutcome out;
  run_search_ordered(order, fresh_index, static_cast<ItemId>(beliefs.size()), fresh, explored,
                     cost, step_cap, out);
  return out;
}

}  // namespace pandora
