#ifndef GIBMAP_MODEL_HPP_
#define GIBMAP_MODEL_HPP_

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "gibmap/errors.hpp"
#include "gibmap/valueset.hpp"

namespace gibmap {

// Raw (unvalidated) network description, mirroring the JSON file format.
struct RawConcept {
  std::string name;
  std::vector<std::string> values;
};

struct RawCptRow {
  std::map<std::string, std::string> given;  // parent name -> value label
  std::map<std::string, double> p;           // value label -> probability
};

struct RawVariable {
  std::string name;
  std::vector<std::string> values;
  std::vector<std::string> parents;
  std::vector<RawConcept> concepts;
  std::vector<RawCptRow> cpt;
};

struct RawNetwork {
  std::vector<RawVariable> variables;
};

struct Concept {
  std::string name;
  ValueSet values;  // non-empty strict subset of the owner's domain
};

struct Variable {
  int id = -1;  // dense, declaration order
  std::string name;
  std::vector<std::string> domain;
  std::vector<int> parents;  // declared order
  std::vector<Concept> concepts;
};

// Rows are indexed by a mixed-radix code over parent values in declared
// parent order, first parent most significant.
struct Cpt {
  int owner = -1;
  std::vector<std::vector<double>> rows;

  std::size_t row_code(const std::vector<int>& parentValues,
                       const std::vector<std::size_t>& parentDomainSizes) const {
    std::size_t code = 0;
    for (std::size_t k = 0; k < parentValues.size(); ++k) {
      code = code * parentDomainSizes[k] + static_cast<std::size_t>(parentValues[k]);
    }
    return code;
  }
};

// A validated, immutable belief network. Safe to share across threads.
class Network {
 public:
  int size() const { return static_cast<int>(vars_.size()); }

  const Variable& var(int id) const {
    check_id(id);
    return vars_[static_cast<std::size_t>(id)];
  }
  const Cpt& cpt(int id) const {
    check_id(id);
    return cpts_[static_cast<std::size_t>(id)];
  }
  int id_of(const std::string& name) const;

  const std::vector<int>& parents(int id) const { return var(id).parents; }
  const std::vector<int>& ancestors(int id) const {
    check_id(id);
    return ancestors_[static_cast<std::size_t>(id)];
  }

  // M_v: singletons, declared concepts, and the full domain. Laminar, hence
  // closed under non-empty pairwise intersection. Deterministic order.
  const std::vector<ValueSet>& permissible_sets(int id) const {
    check_id(id);
    return permissible_[static_cast<std::size_t>(id)];
  }

  // 1-based index; every variable's index is smaller than its ancestors'.
  int index_of(int id) const {
    check_id(id);
    return indexOf_[static_cast<std::size_t>(id)];
  }
  // Variable ids in ascending index order.
  const std::vector<int>& index_order() const { return order_; }

  bool positive() const { return positive_; }

  std::size_t domain_size(int id) const { return var(id).domain.size(); }
  ValueSet full_set(int id) const { return ValueSet::full(id, domain_size(id)); }
  int value_index(int id, const std::string& label) const;

  // If a concept of v matches s exactly, returns its name; otherwise empty.
  std::string concept_name(const ValueSet& s) const;

  RawNetwork to_raw(bool keepConcepts = true) const;

  friend Network validate_network(const RawNetwork& raw,
                                  std::vector<std::string>* warnings);

 private:
  Network() = default;
  void check_id(int id) const {
    if (id < 0 || id >= static_cast<int>(vars_.size()))
      throw UnknownVariable("variable id " + std::to_string(id));
  }

  std::vector<Variable> vars_;
  std::vector<Cpt> cpts_;
  std::vector<std::vector<int>> ancestors_;
  std::vector<std::vector<ValueSet>> permissible_;
  std::vector<int> order_;
  std::vector<int> indexOf_;
  std::unordered_map<std::string, int> byName_;
  bool positive_ = true;
};

// Validates a raw description and freezes it into a Network. Zero
// probabilities are legal but reported through `warnings`.
Network validate_network(const RawNetwork& raw,
                         std::vector<std::string>* warnings = nullptr);

// The same network with all declared concepts removed (M = singletons + full).
Network strip_concepts(const Network& net);

}  // namespace gibmap

#endif  // GIBMAP_MODEL_HPP_
