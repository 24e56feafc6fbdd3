#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svsp/model.hpp"

namespace svsp {

/// Name lookup over a Specification.  The first declaration of a name wins.
/// When the specification declares states, the implicit `$state` element
/// (String, init Known(first state)) is resolvable like any other element.
///
/// Holds pointers into the indexed Specification, which must outlive it.
class SpecIndex {
 public:
  explicit SpecIndex(const Specification& spec);

  [[nodiscard]] const Specification& spec() const { return *spec_; }

  [[nodiscard]] const DataType* type(std::string_view id) const;
  [[nodiscard]] const DataElement* element(std::string_view id) const;
  [[nodiscard]] const FunctionSpec* function(std::string_view id) const;

  [[nodiscard]] const StateDecl* states() const { return states_; }
  [[nodiscard]] bool has_states() const { return states_ != nullptr; }
  [[nodiscard]] bool is_state(std::string_view name) const;

  /// Kind of an element once its type resolves; `$state` is String.
  [[nodiscard]] std::optional<ElementKind> element_kind(std::string_view id) const;

  /// Declared elements in declaration order (first of each name), with
  /// `$state` first when states are declared.
  [[nodiscard]] const std::vector<const DataElement*>& elements() const { return elements_; }
  [[nodiscard]] const std::vector<const FunctionSpec*>& functions() const { return functions_; }

 private:
  template <typename T>
  using Table = std::map<std::string, const T*, std::less<>>;

  const Specification* spec_;
  Table<DataType> types_;
  Table<DataElement> elements_by_id_;
  Table<FunctionSpec> functions_by_id_;
  const StateDecl* states_ = nullptr;
  std::unique_ptr<DataElement> state_element_;
  std::vector<const DataElement*> elements_;
  std::vector<const FunctionSpec*> functions_;
};

}  // namespace svsp
