#include <algorithm>
#include <stdexcept>

#include "saturn/engine/state.hpp"

namespace saturn::engine {

StateMirror::StateMirror(std::string problem) : symbols_(std::make_shared<fol::SymbolTable>()) {
  state_.problem_name_ = std::move(problem);
  state_.symbols_ = symbols_;
}

ClauseId StateMirror::add_clause(fol::Clause c) {
  c.id = static_cast<ClauseId>(state_.clauses_.size());
  state_.clauses_.push_back(std::make_shared<const fol::Clause>(std::move(c)));
  return state_.clauses_.back()->id;
}

void StateMirror::set_conjecture(std::vector<ClauseId> ids) {
  for (auto id : ids)
    if (id >= state_.clauses_.size()) throw std::invalid_argument("unknown conjecture clause");
  state_.conjecture_ = std::move(ids);
}

void StateMirror::update(std::uint32_t step, Status status, std::vector<ClauseId> processed,
                         std::vector<Action> actions) {
  const auto n = state_.clauses_.size();
  if (processed.size() < state_.processed_.size() ||
      !std::equal(state_.processed_.begin(), state_.processed_.end(), processed.begin()))
    throw std::invalid_argument("the processed list may only grow at its end");
  for (auto id : processed)
    if (id >= n) throw std::invalid_argument("unknown processed clause");
  for (const auto& a : actions)
    if (a.clause >= n) throw std::invalid_argument("unknown action clause");
  for (std::size_t i = state_.processed_.size(); i < processed.size(); ++i)
    state_.processed_set_.insert(processed[i]);
  state_.processed_ = std::move(processed);
  state_.actions_ = std::move(actions);
  state_.step_ = step;
  state_.status_ = status;
}

}  // namespace saturn::engine
