#include "svsp/spec_index.hpp"

#include <algorithm>

namespace svsp {

SpecIndex::SpecIndex(const Specification& spec) : spec_(&spec) {
  states_ = spec.state_decl();
  if (states_ != nullptr && !states_->states.empty()) {
    state_element_ = std::make_unique<DataElement>();
    state_element_->id = std::string(kStateElement);
    state_element_->init.status = Status::Known;
    state_element_->init.value = states_->states.front();
    state_element_->loc = states_->loc;
    elements_by_id_.emplace(state_element_->id, state_element_.get());
    elements_.push_back(state_element_.get());
  } else {
    states_ = nullptr;
  }
  for (const auto& d : spec.declarations) {
    if (const auto* t = std::get_if<DataType>(&d)) {
      types_.emplace(t->id, t);
    } else if (const auto* e = std::get_if<DataElement>(&d)) {
      if (elements_by_id_.emplace(e->id, e).second) elements_.push_back(e);
    } else if (const auto* f = std::get_if<FunctionSpec>(&d)) {
      if (functions_by_id_.emplace(f->id, f).second) functions_.push_back(f);
    }
  }
}

namespace {
template <typename T, typename Map>
const T* lookup(const Map& m, std::string_view id) {
  auto it = m.find(id);
  return it == m.end() ? nullptr : it->second;
}
}  // namespace

const DataType* SpecIndex::type(std::string_view id) const { return lookup<DataType>(types_, id); }

const DataElement* SpecIndex::element(std::string_view id) const {
  return lookup<DataElement>(elements_by_id_, id);
}

const FunctionSpec* SpecIndex::function(std::string_view id) const {
  return lookup<FunctionSpec>(functions_by_id_, id);
}

bool SpecIndex::is_state(std::string_view name) const {
  if (states_ == nullptr) return false;
  return std::find(states_->states.begin(), states_->states.end(), name) != states_->states.end();
}

std::optional<ElementKind> SpecIndex::element_kind(std::string_view id) const {
  if (id == kStateElement) {
    if (has_states()) return ElementKind::String;
    return std::nullopt;
  }
  const DataElement* e = element(id);
  if (e == nullptr) return std::nullopt;
  const DataType* t = type(e->type_ref);
  if (t == nullptr) return std::nullopt;
  return t->kind();
}

}  // namespace svsp
