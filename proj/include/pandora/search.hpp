#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pandora/errors.hpp"
#include "pandora/reservation.hpp"

namespace pandora {

using ItemId = std::uint64_t;

inline constexpr std::size_t kDefaultStepCap = 1'000'000;

// An explored item and its current reservation value.
struct IndexedItem {
  double index = 0.0;
  ItemId id = 0;
};

// Opening order: larger index first, then smaller id.
struct OpeningOrder {
  bool operator()(const IndexedItem& a, const IndexedItem& b) const {
    if (a.index != b.index) return a.index > b.index;
    return a.id < b.id;
  }
};

// What opening an item reveals to the searching agent. The quality is
// carried along for bookkeeping; the agent only acts on `value`.
struct ItemDraw {
  double quality = 0.0;
  double value = 0.0;
};

struct SearchOutcome {
  std::vector<ItemId> opened;
  std::vector<double> observed_values;
  std::vector<double> observed_qualities;
  std::vector<bool> was_fresh;
  // Best explored item, kept even when the outside option wins.
  ItemId best_explored = 0;
  bool took_outside_option = false;
  // max(0, best value) - c * |opened|
  double utility = 0.0;
  // best value - c * |opened|: the agent must keep an explored item.
  double must_choose_utility = 0.0;

  std::size_t size() const { return opened.size(); }
  double best_value() const;
  void clear();
};

/// Weitzman search over explored items already sorted by OpeningOrder plus
/// an unbounded supply of fresh items with index `fresh_index`.
///
/// Opens the unopened item with the largest index (explored items win ties
/// against fresh ones since they carry smaller ids) and stops as soon as the
/// best value seen is at least the largest remaining index. Fresh items get
/// ids next_fresh_id, next_fresh_id + 1, ... in the order they are opened.
///
/// `fresh(id)` and `explored(id)` return the draw for that item.
template <class OrderedRange, class FreshSampler, class ExploredSampler>
void run_search_ordered(const OrderedRange& ordered, double fresh_index, ItemId next_fresh_id,
                        FreshSampler&& fresh, ExploredSampler&& explored, double cost,
                        std::size_t step_cap, SearchOutcome& out) {
  if (!(fresh_index > 0.0)) throw DomainError("run_search: fresh index must be > 0");
  out.clear();
  auto it = std::begin(ordered);
  const auto end = std::end(ordered);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_pos = 0;
  while (true) {
    const bool explored_left = it != end;
    const double next_explored = explored_left ? it->index : -std::numeric_limits<double>::infinity();
    const double top = std::max(next_explored, fresh_index);
    if (!out.opened.empty() && best >= top) break;
    if (out.opened.size() >= step_cap) {
      throw StepCapExceeded("run_search: step cap of " + std::to_string(step_cap) +
                            " openings reached");
    }
    ItemId id = 0;
    ItemDraw draw;
    bool is_fresh = false;
    if (explored_left && next_explored >= fresh_index) {
      id = it->id;
      draw = explored(id);
      ++it;
    } else {
      id = next_fresh_id++;
      draw = fresh(id);
      is_fresh = true;
    }
    out.opened.push_back(id);
    out.observed_values.push_back(draw.value);
    out.observed_qualities.push_back(draw.quality);
    out.was_fresh.push_back(is_fresh);
    if (draw.value > best) {
      best = draw.value;
      best_pos = out.opened.size() - 1;
    }
  }
  const double spent = cost * static_cast<double>(out.opened.size());
  out.best_explored = out.opened[best_pos];
  out.took_outside_option = best < 0.0;
  out.utility = std::max(best, 0.0) - spent;
  out.must_choose_utility = best - spent;
}

using FreshSampler = std::function<ItemDraw(ItemId)>;
using ExploredSampler = std::function<ItemDraw(ItemId)>;

/// Convenience form: `beliefs[i]` is the belief over explored item i. The
/// indices are computed here and sorted into opening order.
SearchOutcome run_search(std::span<const ValueBelief> beliefs, double fresh_index,
                         const FreshSampler& fresh, const ExploredSampler& explored, double cost,
                         std::size_t step_cap = kDefaultStepCap);

}  // namespace pandora
